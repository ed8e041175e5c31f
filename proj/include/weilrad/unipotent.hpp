#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/algebra.hpp"
#include "weilrad/error.hpp"
#include "weilrad/ideal.hpp"
#include "weilrad/matrix.hpp"

namespace weilrad {

/// Matrix models of unipotent radicals: the kernel of reduction modulo m
/// in GL(n), SL2 and PGL2, the diagonal torus, and the radical of the
/// 2x2 upper-triangular Borel subgroup.
/// Borel2 is R_u(C) x| U with the upper entry free in B; Borel2m is its
/// intersection with the GL2 reduction kernel (upper entry in m).
enum class GroupKind { GL, SL2, PGL2, Torus, Borel2, Borel2m };

struct GroupTag {
  GroupKind kind = GroupKind::GL;
  std::size_t rank = 2;  // n for GL(n), rank for tori; 2 otherwise

  static GroupTag gl(std::size_t n) {
    if (n < 1) throw UsageError("GL(n) needs n >= 1");
    return {GroupKind::GL, n};
  }
  static GroupTag sl2() { return {GroupKind::SL2, 2}; }
  static GroupTag pgl2() { return {GroupKind::PGL2, 2}; }
  static GroupTag torus(std::size_t r) {
    if (r < 1) throw UsageError("torus rank must be >= 1");
    return {GroupKind::Torus, r};
  }
  static GroupTag borel2() { return {GroupKind::Borel2, 2}; }
  static GroupTag borel2m() { return {GroupKind::Borel2m, 2}; }
  bool is_borel() const { return kind == GroupKind::Borel2 || kind == GroupKind::Borel2m; }

  std::size_t matrix_size() const { return rank; }

  std::string to_string() const {
    switch (kind) {
      case GroupKind::GL: return "GL" + std::to_string(rank);
      case GroupKind::SL2: return "SL2";
      case GroupKind::PGL2: return "PGL2";
      case GroupKind::Torus: return "T" + std::to_string(rank);
      case GroupKind::Borel2: return "Borel2";
      case GroupKind::Borel2m: return "Borel2m";
    }
    return "?";
  }

  friend bool operator==(const GroupTag&, const GroupTag&) = default;
};

/// A point of a unipotent radical. PGL2 points are stored through their
/// unique representative with (1,1) entry equal to 1.
class UnipotentElement {
 public:
  static UnipotentElement make(GroupTag tag, AlgebraMatrix m) {
    if (m.size() != tag.matrix_size()) {
      throw UsageError(tag.to_string() + " needs a " + std::to_string(tag.matrix_size()) + "x" +
                       std::to_string(tag.matrix_size()) + " matrix");
    }
    if (tag.kind == GroupKind::PGL2) m = canonical_pgl2(m);
    validate(tag, m);
    return UnipotentElement(tag, std::move(m));
  }

  static UnipotentElement identity(GroupTag tag, const TruncatedAlgebra& A) {
    return UnipotentElement(tag, AlgebraMatrix::identity(A, tag.matrix_size()));
  }

  const GroupTag& tag() const { return tag_; }
  const AlgebraMatrix& matrix() const { return m_; }
  const TruncatedAlgebra& algebra() const { return m_.algebra(); }
  bool is_identity() const { return m_.is_identity(); }

  friend UnipotentElement operator*(const UnipotentElement& g, const UnipotentElement& h) {
    check_same(g, h);
    AlgebraMatrix prod = g.m_ * h.m_;
    if (g.tag_.kind == GroupKind::PGL2) prod = canonical_pgl2(prod);
    return UnipotentElement(g.tag_, std::move(prod));
  }

  UnipotentElement inverse() const {
    AlgebraMatrix inv = m_.inverse();
    if (tag_.kind == GroupKind::PGL2) inv = canonical_pgl2(inv);
    return UnipotentElement(tag_, std::move(inv));
  }

  UnipotentElement pow(std::uint64_t k) const {
    UnipotentElement result = identity(tag_, algebra());
    UnipotentElement base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Equality in the group; for PGL2 this is equality of canonical representatives.
  friend bool operator==(const UnipotentElement& a, const UnipotentElement& b) {
    return a.tag_ == b.tag_ && a.m_ == b.m_;
  }

  /// Reduces a matrix with unit (1,1) entry to the representative with (1,1) = 1.
  static AlgebraMatrix canonical_pgl2(const AlgebraMatrix& m) {
    const AlgebraElement& lead = m.at(0, 0);
    if (!lead.is_unit()) throw UsageError("PGL2 representative must have a unit (1,1) entry");
    if (lead == m.algebra().one()) return m;
    return m.scaled(lead.inverse());
  }

 private:
  UnipotentElement(GroupTag tag, AlgebraMatrix m) : tag_(tag), m_(std::move(m)) {}

  static void validate(const GroupTag& tag, const AlgebraMatrix& m) {
    const std::size_t n = m.size();
    const auto& A = m.algebra();
    auto fail = [&](const std::string& why) {
      throw UsageError("not a point of the " + tag.to_string() + " radical: " + why + " [" + m.to_string() + "]");
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const AlgebraElement& x = m.at(i, j);
        if (i == j) {
          if (!(x - A.one()).in_maximal_ideal()) fail("diagonal entry not in 1 + m");
          continue;
        }
        bool off_diagonal_zero = tag.kind == GroupKind::Torus || (tag.is_borel() && i > j);
        if (off_diagonal_zero && !x.is_zero()) fail("entry must vanish");
        if (tag.kind == GroupKind::Borel2 && i < j) continue;  // unrestricted
        if (!x.in_maximal_ideal()) fail("off-diagonal entry not in m");
      }
    }
    if (tag.kind == GroupKind::SL2 && !(m.determinant() == A.one())) fail("determinant is not 1");
  }

  static void check_same(const UnipotentElement& g, const UnipotentElement& h) {
    if (!(g.tag_ == h.tag_)) throw UsageError("cannot combine " + g.tag_.to_string() + " and " + h.tag_.to_string());
    if (!(g.algebra() == h.algebra())) throw UsageError("unipotent elements over different algebras");
  }

  GroupTag tag_;
  AlgebraMatrix m_;
};

/// [g, h] = g h g^{-1} h^{-1}.
inline UnipotentElement commutator(const UnipotentElement& g, const UnipotentElement& h) {
  return g * h * g.inverse() * h.inverse();
}

/// [x_1, [x_2, ... [x_k, z]]]; returns z when xs is empty.
inline UnipotentElement nested_commutator(const std::vector<UnipotentElement>& xs, const UnipotentElement& z) {
  UnipotentElement acc = z;
  for (std::size_t i = xs.size(); i-- > 0;) acc = commutator(xs[i], acc);
  return acc;
}

/// PGL2 equality test by proportionality: a = u b for a unit u iff a b_11 = b a_11.
/// Independent of the canonical representative.
inline bool equal_up_to_scalar(const AlgebraMatrix& a, const AlgebraMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (!(a.at(i, j) * b.at(0, 0) == b.at(i, j) * a.at(0, 0))) return false;
    }
  }
  return a.at(0, 0).is_unit() && b.at(0, 0).is_unit();
}

/// Image of g under G(B) -> G(B / m^i).
inline AlgebraMatrix reduce_mod_power(const UnipotentElement& g, std::uint64_t level) {
  if (level < 1 || level > g.algebra().nilpotency_index()) {
    throw UsageError("filtration level must lie in [1, " + std::to_string(g.algebra().nilpotency_index()) + "]");
  }
  return g.matrix().truncate_degree(level);
}

/// g lies in U_i, the kernel of reduction modulo m^i.
inline bool filtration_member(const UnipotentElement& g, std::uint64_t level) {
  if (g.tag().kind == GroupKind::Borel2) {
    throw UsageError("the m-adic filtration is defined on kernel-of-reduction groups, not Borel2");
  }
  return reduce_mod_power(g, level).is_identity();
}

/// Membership in R_r: diagonal entries minus 1 in J_r, off-diagonal entries in I_r.
inline bool sl2_filtration_member(const UnipotentElement& g, std::uint64_t r) {
  if (g.tag().kind != GroupKind::SL2) throw UsageError("R_r is defined for SL2 points only");
  const auto& A = g.algebra();
  auto [I, J] = lemma38_ideals(A.spec(), r);
  const AlgebraMatrix& m = g.matrix();
  return J.contains(m.at(0, 0) - A.one()) && J.contains(m.at(1, 1) - A.one()) && I.contains(m.at(0, 1)) &&
         I.contains(m.at(1, 0));
}

/// Least s with g^{p^s} = 1.
inline std::uint32_t p_power_order(const UnipotentElement& g) {
  const std::uint32_t p = g.algebra().spec().p();
  UnipotentElement h = g;
  std::uint32_t s = 0;
  while (!h.is_identity()) {
    if (++s > 128) throw InvariantViolation("p-power order did not terminate for " + g.matrix().to_string());
    h = h.pow(p);
  }
  return s;
}

/// Shape of the free parameters of a radical model. Every model is a
/// product of "slots", each ranging over m (all but the constant
/// coefficient) or over the whole algebra.
struct SlotLayout {
  std::vector<bool> full;  // true: slot ranges over B, false: over m

  static SlotLayout of(const GroupTag& tag) {
    switch (tag.kind) {
      case GroupKind::GL: return {std::vector<bool>(tag.rank * tag.rank, false)};
      case GroupKind::SL2:
      case GroupKind::PGL2: return {std::vector<bool>(3, false)};
      case GroupKind::Torus: return {std::vector<bool>(tag.rank, false)};
      case GroupKind::Borel2: return {{false, true, false}};
      case GroupKind::Borel2m: return {{false, false, false}};
    }
    return {};
  }

  /// Group order is field_size^digits().
  std::uint64_t digits(std::uint64_t dimension) const {
    std::uint64_t d = 0;
    for (bool f : full) d += f ? dimension : dimension - 1;
    return d;
  }
};

/// Exact group order as field_size^exponent, or nullopt-like UINT64_MAX when
/// it does not fit in 64 bits.
inline std::uint64_t group_order_or_max(std::uint64_t field_size, std::uint64_t exponent) {
  unsigned __int128 v = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    v *= field_size;
    if (v > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(v);
}

/// Builds the radical point with the given slot values (see SlotLayout).
inline UnipotentElement assemble_unipotent(const GroupTag& tag, const TruncatedAlgebra& A,
                                           const std::vector<AlgebraElement>& slots) {
  const auto one = A.one();
  switch (tag.kind) {
    case GroupKind::GL: {
      const std::size_t n = tag.rank;
      std::vector<AlgebraElement> e = slots;
      for (std::size_t i = 0; i < n; ++i) e[i * n + i] = e[i * n + i] + one;
      return UnipotentElement::make(tag, AlgebraMatrix(n, std::move(e)));
    }
    case GroupKind::SL2: {
      // (1+m1)(1+m4) - m2 m3 = 1 determines m4.
      AlgebraElement d = (one + slots[1] * slots[2]) * (one + slots[0]).inverse();
      return UnipotentElement::make(tag, AlgebraMatrix::of(one + slots[0], slots[1], slots[2], d));
    }
    case GroupKind::PGL2:
      return UnipotentElement::make(tag, AlgebraMatrix::of(one, slots[0], slots[1], one + slots[2]));
    case GroupKind::Torus: {
      std::vector<AlgebraElement> d;
      for (const auto& s : slots) d.push_back(one + s);
      return UnipotentElement::make(tag, AlgebraMatrix::diagonal(d));
    }
    case GroupKind::Borel2:
    case GroupKind::Borel2m:
      return UnipotentElement::make(tag, AlgebraMatrix::of(one + slots[0], slots[1], A.zero(), one + slots[2]));
  }
  throw UsageError("unknown group kind");
}

/// Exhaustive, duplicate-free enumeration of a radical's points over the
/// algebra's finite coefficient field. Random access by index makes the
/// stream restartable and lets workers split index ranges.
///
/// Index decoding: slots are mixed-radix digits with the first slot least
/// significant; within a slot, base-|F| digit j is the coefficient of the
/// basis monomial at linear index j (+1 for m-slots, skipping the constant).
class UnipotentEnumeration {
 public:
  UnipotentEnumeration(GroupTag tag, TruncatedAlgebra A, std::uint64_t budget)
      : tag_(tag), A_(std::move(A)), layout_(SlotLayout::of(tag_)) {
    const std::uint64_t q = A_.field().size();
    exponent_ = layout_.digits(A_.dimension());
    size_ = group_order_or_max(q, exponent_);
    if (size_ == UINT64_MAX || size_ > budget) throw BudgetExceeded(q, exponent_, budget);
    basis_ = A_.basis();
  }

  std::uint64_t size() const { return size_; }
  const GroupTag& tag() const { return tag_; }

  UnipotentElement at(std::uint64_t index) const {
    if (index >= size_) throw UsageError("enumeration index out of range");
    const std::uint64_t q = A_.field().size();
    std::vector<AlgebraElement> slots;
    for (bool full : layout_.full) {
      const std::size_t first = full ? 0 : 1;
      std::vector<Term> terms;
      for (std::size_t j = first; j < basis_.size(); ++j) {
        Coeff c = static_cast<Coeff>(index % q);
        index /= q;
        if (c) terms.push_back({basis_[j], c});
      }
      slots.push_back(A_.from_terms(std::move(terms)));
    }
    return assemble_unipotent(tag_, A_, slots);
  }

  template <class Fn>
  void for_each(Fn&& fn, std::uint64_t begin = 0, std::uint64_t end = UINT64_MAX) const {
    end = std::min(end, size_);
    for (std::uint64_t i = begin; i < end; ++i) fn(at(i));
  }

 private:
  GroupTag tag_;
  TruncatedAlgebra A_;
  SlotLayout layout_;
  std::uint64_t exponent_ = 0;
  std::uint64_t size_ = 0;
  std::vector<Monomial> basis_;
};

/// Random element of the monomial ideal I (uniform over the span of its monomials).
template <class Rng>
AlgebraElement random_in_ideal(const TruncatedAlgebra& A, const MonomialIdeal& I, Rng& rng) {
  const std::uint64_t q = A.field().size();
  std::vector<Term> terms;
  for (Monomial m : A.basis()) {
    if (!I.contains(A.unpack(m))) continue;
    Coeff c = static_cast<Coeff>(rng() % q);
    if (c) terms.push_back({m, c});
  }
  return A.from_terms(std::move(terms));
}

/// Random point of U_level (entries of g - 1 in m^level). For Borel2 the
/// unrestricted upper entry is drawn from m^{level-1}.
template <class Rng>
UnipotentElement sample_unipotent(const GroupTag& tag, const TruncatedAlgebra& A, Rng& rng, std::uint64_t level = 1) {
  if (level < 1) throw UsageError("filtration level must be >= 1");
  const SlotLayout layout = SlotLayout::of(tag);
  std::vector<AlgebraElement> slots;
  for (bool full : layout.full) slots.push_back(random_element(A, rng, full ? level - 1 : level));
  return assemble_unipotent(tag, A, slots);
}

/// Random point of R_r (SL2, characteristic 2).
template <class Rng>
UnipotentElement sample_sl2_filtration_element(const TruncatedAlgebra& A, std::uint64_t r, Rng& rng) {
  auto [I, J] = lemma38_ideals(A.spec(), r);
  AlgebraElement m1 = random_in_ideal(A, J, rng);
  AlgebraElement m2 = random_in_ideal(A, I, rng);
  AlgebraElement m3 = random_in_ideal(A, I, rng);
  return assemble_unipotent(GroupTag::sl2(), A, {m1, m2, m3});
}

}  // namespace weilrad
