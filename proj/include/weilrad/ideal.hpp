#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "weilrad/algebra.hpp"
#include "weilrad/error.hpp"
#include "weilrad/extension.hpp"

namespace weilrad {

using ExponentVector = std::vector<std::uint32_t>;

/// A monomial ideal of F[x_1..x_r]/(x_i^{q_i}). Ideals depend only on the
/// monomial structure, so they are keyed by the extension rather than by a
/// particular coefficient field.
///
/// The generating set is kept reduced (no generator divides another), free
/// of vanishing monomials and sorted, so equal ideals compare equal.
/// An empty generating set is the zero ideal.
class MonomialIdeal {
 public:
  MonomialIdeal(ExtensionSpec spec, std::vector<ExponentVector> generators) : spec_(std::move(spec)) {
    for (auto& g : generators) {
      if (g.size() != spec_.rank()) throw UsageError("generator has wrong number of variables");
      if (!vanishes(g)) gens_.push_back(std::move(g));
    }
    reduce();
  }

  static MonomialIdeal zero(const ExtensionSpec& spec) { return MonomialIdeal(spec, {}); }
  /// The unit ideal (1).
  static MonomialIdeal unit(const ExtensionSpec& spec) {
    return MonomialIdeal(spec, {ExponentVector(spec.rank(), 0)});
  }
  /// m = (x_1, ..., x_r).
  static MonomialIdeal maximal(const ExtensionSpec& spec) {
    std::vector<ExponentVector> gens;
    for (std::size_t i = 0; i < spec.rank(); ++i) {
      ExponentVector e(spec.rank(), 0);
      e[i] = 1;
      gens.push_back(std::move(e));
    }
    return MonomialIdeal(spec, std::move(gens));
  }

  const ExtensionSpec& spec() const { return spec_; }
  const std::vector<ExponentVector>& generators() const { return gens_; }
  bool is_zero() const { return gens_.empty(); }

  /// x^alpha in I. A vanishing monomial is the zero element, which lies in every ideal.
  bool contains(const ExponentVector& alpha) const {
    if (vanishes(alpha)) return true;
    return std::any_of(gens_.begin(), gens_.end(), [&](const ExponentVector& g) { return divides(g, alpha); });
  }

  /// A monomial ideal contains f iff it contains every monomial of f.
  bool contains(const AlgebraElement& f) const {
    if (!(f.algebra().spec() == spec_)) throw UsageError("element and ideal live over different extensions");
    for (const Term& t : f.terms()) {
      if (!contains(f.algebra().unpack(t.mono))) return false;
    }
    return true;
  }

  /// J is a subset of this ideal.
  bool contains(const MonomialIdeal& J) const {
    check_same(J);
    return std::all_of(J.gens_.begin(), J.gens_.end(), [&](const ExponentVector& g) { return contains(g); });
  }

  friend MonomialIdeal operator*(const MonomialIdeal& I, const MonomialIdeal& J) {
    I.check_same(J);
    std::vector<ExponentVector> prods;
    prods.reserve(I.gens_.size() * J.gens_.size());
    for (const auto& a : I.gens_) {
      for (const auto& b : J.gens_) {
        ExponentVector c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
        prods.push_back(std::move(c));
      }
    }
    return MonomialIdeal(I.spec_, std::move(prods));
  }

  MonomialIdeal power(std::uint64_t k) const {
    MonomialIdeal acc = unit(spec_);
    for (std::uint64_t i = 0; i < k && !acc.is_zero(); ++i) acc = acc * *this;
    return acc;
  }

  std::string to_string() const {
    if (gens_.empty()) return "0";
    std::string out = "(";
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      if (g) out += ", ";
      std::string mono;
      for (std::size_t i = 0; i < gens_[g].size(); ++i) {
        if (gens_[g][i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (gens_[g][i] > 1) mono += "^" + std::to_string(gens_[g][i]);
      }
      out += mono.empty() ? "1" : mono;
    }
    return out + ")";
  }

  friend bool operator==(const MonomialIdeal& a, const MonomialIdeal& b) {
    return a.spec_ == b.spec_ && a.gens_ == b.gens_;
  }

 private:
  bool vanishes(const ExponentVector& alpha) const {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] >= spec_.q(i)) return true;
    }
    return false;
  }
  static bool divides(const ExponentVector& g, const ExponentVector& a) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] > a[i]) return false;
    }
    return true;
  }
  void check_same(const MonomialIdeal& other) const {
    if (!(spec_ == other.spec_)) throw UsageError("ideals live over different extensions");
  }
  void reduce() {
    std::sort(gens_.begin(), gens_.end());
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
    // Sorting lexicographically puts any divisor of g before g.
    std::vector<ExponentVector> kept;
    for (auto& g : gens_) {
      bool redundant = std::any_of(kept.begin(), kept.end(), [&](const ExponentVector& h) { return divides(h, g); });
      if (!redundant) kept.push_back(std::move(g));
    }
    gens_ = std::move(kept);
  }

  ExtensionSpec spec_;
  std::vector<ExponentVector> gens_;
};

/// Least n >= 1 with m^n = 0, by the closed form 1 + sum (q_i - 1).
inline std::uint64_t nilpotency_index(const ExtensionSpec& spec) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < spec.rank(); ++i) n += spec.q(i) - 1;
  return n;
}
inline std::uint64_t nilpotency_index(const TruncatedAlgebra& A) { return nilpotency_index(A.spec()); }

/// Least n with m^n = 0, by multiplying out powers of m.
inline std::uint64_t nilpotency_index_by_powers(const ExtensionSpec& spec) {
  const MonomialIdeal m = MonomialIdeal::maximal(spec);
  MonomialIdeal power = m;
  std::uint64_t n = 1;
  while (!power.is_zero()) {
    power = power * m;
    ++n;
  }
  return n;
}

inline void require_char2(const ExtensionSpec& spec, const char* what) {
  if (spec.p() != 2) {
    throw UnsupportedCharacteristic(std::string(what) + " is only defined in characteristic 2 (got p=" +
                                    std::to_string(spec.p()) + ")");
  }
}

/// The ideal generated by squares of elements of m. In characteristic 2
/// squaring is additive, so this is (x_1^2, ..., x_r^2).
inline MonomialIdeal squares_ideal(const ExtensionSpec& spec) {
  require_char2(spec, "the ideal of squares");
  std::vector<ExponentVector> gens;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    ExponentVector e(spec.rank(), 0);
    e[i] = 2;
    gens.push_back(std::move(e));
  }
  return MonomialIdeal(spec, std::move(gens));
}
inline MonomialIdeal squares_ideal(const TruncatedAlgebra& A) { return squares_ideal(A.spec()); }

/// The pair (I_r, J_r): I_0 = J_0 = m; I_r = (sq m)^r m and J_r = (sq m)^{r-1} m^2 for r >= 1.
inline std::pair<MonomialIdeal, MonomialIdeal> lemma38_ideals(const ExtensionSpec& spec, std::uint64_t r) {
  require_char2(spec, "the filtration ideals I_r, J_r");
  const MonomialIdeal m = MonomialIdeal::maximal(spec);
  if (r == 0) return {m, m};
  const MonomialIdeal sq = squares_ideal(spec);
  MonomialIdeal I = sq.power(r) * m;
  MonomialIdeal J = sq.power(r - 1) * (m * m);
  return {std::move(I), std::move(J)};
}
inline std::pair<MonomialIdeal, MonomialIdeal> lemma38_ideals(const TruncatedAlgebra& A, std::uint64_t r) {
  return lemma38_ideals(A.spec(), r);
}

/// Least n >= 1 with (sq m)^{n-1} m^2 = 0, found by iterating J_{k+1} = sq m * J_k.
/// Termination is guaranteed within nilpotency_index steps since sq m is in m^2.
inline std::uint64_t unusual_class_invariant(const ExtensionSpec& spec) {
  require_char2(spec, "the class invariant of SL2-type fibres");
  const MonomialIdeal m = MonomialIdeal::maximal(spec);
  const MonomialIdeal sq = squares_ideal(spec);
  const std::uint64_t cap = nilpotency_index(spec);
  MonomialIdeal J = m * m;  // J_1
  std::uint64_t n = 1;
  while (!J.is_zero()) {
    if (n > cap) throw InvariantViolation("unusual class invariant did not terminate");
    J = sq * J;
    ++n;
  }
  return n;
}
inline std::uint64_t unusual_class_invariant(const TruncatedAlgebra& A) { return unusual_class_invariant(A.spec()); }

}  // namespace weilrad
