#include <gtest/gtest.h>

#include <random>

#include "weilrad/dense.hpp"

using namespace weilrad;

namespace {

struct Case {
  GroupTag tag;
  ExtensionSpec spec;
  std::uint32_t field_degree;
};

std::vector<Case> cases() {
  return {{GroupTag::gl(2), ExtensionSpec(2, {2, 1}), 1}, {GroupTag::gl(3), ExtensionSpec(2, {2}), 1},
          {GroupTag::gl(3), ExtensionSpec(3, {1}), 2},    {GroupTag::sl2(), ExtensionSpec(2, {1, 1}), 2},
          {GroupTag::sl2(), ExtensionSpec(3, {2}), 1},    {GroupTag::pgl2(), ExtensionSpec(2, {3}), 1},
          {GroupTag::pgl2(), ExtensionSpec(3, {1}), 2},   {GroupTag::torus(2), ExtensionSpec(2, {2, 1}), 2},
          {GroupTag::borel2(), ExtensionSpec(2, {2}), 1}, {GroupTag::borel2m(), ExtensionSpec(3, {1, 1}), 1},
          {GroupTag::gl(1), ExtensionSpec(2, {3}), 1}};
}

}  // namespace

TEST(DenseRing, MatchesSparseArithmetic) {
  std::mt19937_64 rng(31);
  for (const auto& c : cases()) {
    TruncatedAlgebra A(c.spec, CoefficientField(c.spec.p(), c.field_degree));
    DenseRing R(A);
    for (int k = 0; k < 100; ++k) {
      auto a = random_element(A, rng), b = random_element(A, rng);
      auto da = R.from(a), db = R.from(b);
      std::vector<std::uint8_t> prod(R.dimension());
      R.mul(da.data(), db.data(), prod.data());
      EXPECT_EQ(R.to(prod.data()), a * b);
      if (a.is_unit()) EXPECT_EQ(R.to(R.inverse(da.data()).data()), a.inverse());
      EXPECT_EQ(R.to(da.data()), a);
    }
  }
}

TEST(DenseGroup, EnumerationAgreesWithSparse) {
  for (const auto& c : cases()) {
    TruncatedAlgebra A(c.spec, CoefficientField(c.spec.p(), c.field_degree));
    DenseGroup G(c.tag, A);
    UnipotentEnumeration en(c.tag, A, UINT64_MAX - 1);
    ASSERT_EQ(G.order(), en.size()) << c.tag.to_string();
    std::mt19937_64 rng(32);
    for (int k = 0; k < 100; ++k) {
      const std::uint64_t i = rng() % en.size();
      EXPECT_EQ(G.to_matrix(G.at(i)), en.at(i).matrix()) << c.tag.to_string() << " index " << i;
    }
  }
}

TEST(DenseGroup, OperationsAgreeWithSparse) {
  std::mt19937_64 rng(33);
  for (const auto& c : cases()) {
    TruncatedAlgebra A(c.spec, CoefficientField(c.spec.p(), c.field_degree));
    DenseGroup G(c.tag, A);
    for (int k = 0; k < 60; ++k) {
      auto g = sample_unipotent(c.tag, A, rng), h = sample_unipotent(c.tag, A, rng);
      auto dg = G.from(g), dh = G.from(h);
      EXPECT_EQ(G.to(G.mul(dg, dh)), g * h) << c.tag.to_string();
      EXPECT_EQ(G.to(G.inverse(dg)), g.inverse()) << c.tag.to_string();
      EXPECT_EQ(G.to(G.commutator(dg, dh)), commutator(g, h));
      EXPECT_EQ(G.p_power_order(dg), p_power_order(g));
      EXPECT_TRUE(G.is_identity(G.mul(dg, G.inverse(dg))));
    }
  }
}

TEST(DenseGroup, SamplesAreRadicalPoints) {
  std::mt19937_64 rng(34);
  for (const auto& c : cases()) {
    TruncatedAlgebra A(c.spec, CoefficientField(c.spec.p(), c.field_degree));
    DenseGroup G(c.tag, A);
    for (int k = 0; k < 50; ++k) {
      EXPECT_NO_THROW(UnipotentElement::make(c.tag, G.to_matrix(G.sample(rng)))) << c.tag.to_string();
    }
  }
}

TEST(DenseRing, RejectsOversizedInputs) {
  EXPECT_THROW(DenseRing(TruncatedAlgebra(ExtensionSpec(2, {11}))), UsageError);
  EXPECT_THROW(DenseRing(TruncatedAlgebra(ExtensionSpec(2, {1}), CoefficientField(2, 9))), UsageError);
}
