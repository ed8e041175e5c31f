#include <gtest/gtest.h>

#include <random>

#include "weilrad/matrix.hpp"

using namespace weilrad;

namespace {

AlgebraMatrix random_matrix(const TruncatedAlgebra& A, std::size_t n, std::mt19937_64& rng, bool unipotent) {
  std::vector<AlgebraElement> e;
  for (std::size_t i = 0; i < n * n; ++i) {
    auto x = random_element(A, rng, unipotent ? 1 : 0);
    if (unipotent && i % (n + 1) == 0) x = x + A.one();
    e.push_back(x);
  }
  return AlgebraMatrix(n, std::move(e));
}

}  // namespace

TEST(AlgebraMatrix, DeterminantIsMultiplicative) {
  std::mt19937_64 rng(2);
  for (auto spec : {ExtensionSpec(2, {2, 1}), ExtensionSpec(3, {1, 1})}) {
    TruncatedAlgebra A(spec);
    for (std::size_t n : {1u, 2u, 3u, 4u}) {
      for (int k = 0; k < 30; ++k) {
        auto a = random_matrix(A, n, rng, false), b = random_matrix(A, n, rng, false);
        EXPECT_EQ((a * b).determinant(), a.determinant() * b.determinant());
        EXPECT_EQ(a.transpose().determinant(), a.determinant());
      }
    }
  }
}

TEST(AlgebraMatrix, InverseMethodsAgree) {
  std::mt19937_64 rng(4);
  TruncatedAlgebra A(ExtensionSpec(2, {1, 1}), CoefficientField(2, 2));
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    for (int k = 0; k < 30; ++k) {
      auto a = random_matrix(A, n, rng, true);
      ASSERT_TRUE(a.is_invertible());
      auto inv = a.inverse_by_adjugate();
      EXPECT_EQ(inv, a.inverse_by_elimination());
      EXPECT_TRUE((a * inv).is_identity());
      EXPECT_TRUE((inv * a).is_identity());
    }
  }
}

TEST(AlgebraMatrix, SingularRejected) {
  TruncatedAlgebra A(ExtensionSpec(2, {2}));
  auto x = A.generator(0);
  auto m = AlgebraMatrix::of(x, A.one(), A.one(), x);  // det = x^2 + 1, a unit
  EXPECT_TRUE(m.is_invertible());
  auto s = AlgebraMatrix::of(x, x, A.zero(), A.one());
  EXPECT_FALSE(s.is_invertible());
  EXPECT_THROW(s.inverse(), InvariantViolation);
  EXPECT_THROW(s.inverse_by_elimination(), InvariantViolation);
}

TEST(AlgebraMatrix, ParseRoundTrip) {
  std::mt19937_64 rng(9);
  TruncatedAlgebra A(ExtensionSpec(3, {1, 1}));
  for (int k = 0; k < 50; ++k) {
    auto a = random_matrix(A, 2, rng, false);
    EXPECT_EQ(AlgebraMatrix::parse(A, a.to_string()), a) << a.to_string();
  }
  EXPECT_THROW(AlgebraMatrix::parse(A, "1, 0; 0"), UsageError);
}

TEST(AlgebraMatrix, PowerAndTruncation) {
  TruncatedAlgebra A(ExtensionSpec(2, {2}));
  auto x = A.generator(0);
  auto m = AlgebraMatrix::of(A.one(), x, A.zero(), A.one());
  EXPECT_EQ(m.pow(2), AlgebraMatrix::identity(A, 2));
  auto d = AlgebraMatrix::diagonal({A.one() + x, A.one()});
  EXPECT_EQ(d.pow(4), AlgebraMatrix::identity(A, 2));
  EXPECT_FALSE(d.pow(2).is_identity());
  EXPECT_TRUE(d.truncate_degree(1).is_identity());
  EXPECT_FALSE(d.truncate_degree(2).is_identity());
}
