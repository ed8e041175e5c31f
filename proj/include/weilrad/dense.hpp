#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "weilrad/algebra.hpp"
#include "weilrad/error.hpp"
#include "weilrad/unipotent.hpp"

namespace weilrad {

/// Dense table-driven arithmetic for brute-force work: an algebra element is
/// `dimension` bytes indexed by linear_index, one field element per byte.
/// Limited to fields of size <= 256 and algebras of dimension <= 1024.
class DenseRing {
 public:
  static constexpr std::uint64_t kMaxField = 256;
  static constexpr std::uint64_t kMaxDimension = 1024;

  explicit DenseRing(TruncatedAlgebra A) : A_(std::move(A)) {
    const std::uint64_t q = A_.field().size();
    if (q > kMaxField || A_.dimension() > kMaxDimension) {
      throw UsageError("dense kernel needs field size <= 256 and dimension <= 1024, got " + A_.field().to_string() +
                       " and " + std::to_string(A_.dimension()));
    }
    A_.require_packable();
    D_ = static_cast<std::size_t>(A_.dimension());
    q_ = static_cast<std::size_t>(q);
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.resize(q_);
    const auto& F = A_.field();
    for (std::size_t a = 0; a < q_; ++a) {
      neg_[a] = static_cast<std::uint8_t>(F.neg(static_cast<Coeff>(a)));
      inv_[a] = a ? static_cast<std::uint8_t>(F.inv(static_cast<Coeff>(a))) : 0;
      for (std::size_t b = 0; b < q_; ++b) {
        add_[a * q_ + b] = static_cast<std::uint8_t>(F.add(static_cast<Coeff>(a), static_cast<Coeff>(b)));
        mul_[a * q_ + b] = static_cast<std::uint8_t>(F.mul(static_cast<Coeff>(a), static_cast<Coeff>(b)));
      }
    }
    basis_ = A_.basis();
    prod_.assign(D_ * D_, -1);
    for (std::size_t i = 0; i < D_; ++i) {
      for (std::size_t j = 0; j < D_; ++j) {
        Monomial m;
        if (A_.multiply(basis_[i], basis_[j], m)) prod_[i * D_ + j] = static_cast<std::int32_t>(A_.linear_index(m));
      }
    }
  }

  const TruncatedAlgebra& algebra() const { return A_; }
  std::size_t dimension() const { return D_; }
  std::size_t field_size() const { return q_; }

  std::uint8_t fadd(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t fmul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t fneg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t finv(std::uint8_t a) const { return inv_[a]; }

  /// out += a * b
  void mul_acc(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) const {
    for (std::size_t i = 0; i < D_; ++i) {
      if (!a[i]) continue;
      const std::int32_t* row = &prod_[i * D_];
      for (std::size_t j = 0; j < D_; ++j) {
        if (!b[j] || row[j] < 0) continue;
        std::uint8_t& o = out[row[j]];
        o = fadd(o, fmul(a[i], b[j]));
      }
    }
  }
  void mul(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out) const {
    std::memset(out, 0, D_);
    mul_acc(a, b, out);
  }
  void scale(const std::uint8_t* a, std::uint8_t c, std::uint8_t* out) const {
    for (std::size_t i = 0; i < D_; ++i) out[i] = fmul(a[i], c);
  }

  /// Inverse of a unit c (1 - u) as c^{-1} (1 + u + ... + u^{n-1}).
  std::vector<std::uint8_t> inverse(const std::uint8_t* a) const {
    if (!a[0]) throw InvariantViolation("dense inverse of a non-unit");
    const std::uint8_t ci = finv(a[0]);
    std::vector<std::uint8_t> u(D_), sum(D_, 0), tmp(D_);
    scale(a, ci, u.data());
    for (std::size_t i = 0; i < D_; ++i) u[i] = fneg(u[i]);
    u[0] = 0;  // u = 1 - a / c
    sum[0] = 1;
    for (std::uint64_t k = 1; k < A_.nilpotency_index(); ++k) {
      mul(u.data(), sum.data(), tmp.data());
      tmp[0] = fadd(tmp[0], 1);
      sum.swap(tmp);
    }
    scale(sum.data(), ci, tmp.data());
    return tmp;
  }

  std::vector<std::uint8_t> from(const AlgebraElement& x) const {
    std::vector<std::uint8_t> out(D_, 0);
    for (const Term& t : x.terms()) out[A_.linear_index(t.mono)] = static_cast<std::uint8_t>(t.coeff);
    return out;
  }
  AlgebraElement to(const std::uint8_t* x) const {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < D_; ++i) {
      if (x[i]) terms.push_back({basis_[i], x[i]});
    }
    return A_.from_terms(std::move(terms));
  }

 private:
  TruncatedAlgebra A_;
  std::size_t D_ = 0, q_ = 0;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
  std::vector<Monomial> basis_;
  std::vector<std::int32_t> prod_;
};

/// Dense model of a radical: an element is an n x n matrix stored row-major
/// as n*n*dimension bytes inside a std::string, which doubles as a hash key.
/// PGL2 elements are stored through the representative with (1,1) entry 1.
class DenseGroup {
 public:
  using Elem = std::string;

  DenseGroup(GroupTag tag, TruncatedAlgebra A) : tag_(tag), R_(std::move(A)), layout_(SlotLayout::of(tag_)) {
    n_ = tag_.matrix_size();
    D_ = R_.dimension();
    exponent_digits_ = layout_.digits(D_);
    order_ = group_order_or_max(R_.field_size(), exponent_digits_);
    // Only GL(n), n >= 3, inverts by powering: (I + M)^{p^s} = I once p^s >= nilpotency index.
    const std::uint64_t bound = R_.algebra().nilpotency_index();
    inverse_power_ = 1;
    while (inverse_power_ < bound) inverse_power_ *= R_.algebra().spec().p();
    identity_ = identity();
  }

  const GroupTag& tag() const { return tag_; }
  const DenseRing& ring() const { return R_; }
  std::size_t bytes() const { return n_ * n_ * D_; }
  /// Group order, or UINT64_MAX when it does not fit.
  std::uint64_t order() const { return order_; }
  /// order() = field_size^order_exponent().
  std::uint64_t order_exponent() const { return exponent_digits_; }

  Elem identity() const {
    Elem e(bytes(), '\0');
    for (std::size_t i = 0; i < n_; ++i) entry(e, i, i)[0] = 1;
    return e;
  }
  bool is_identity(const Elem& g) const { return g == identity_cached(); }

  Elem mul(const Elem& a, const Elem& b) const {
    Elem out(bytes(), '\0');
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < n_; ++k) {
        const std::uint8_t* aik = entry(a, i, k);
        if (is_zero(aik)) continue;
        for (std::size_t j = 0; j < n_; ++j) R_.mul_acc(aik, entry(b, k, j), entry(out, i, j));
      }
    }
    if (tag_.kind == GroupKind::PGL2) normalize(out);
    return out;
  }

  Elem inverse(const Elem& a) const {
    if (n_ == 1) {
      Elem out(bytes(), '\0');
      auto inv = R_.inverse(entry(a, 0, 0));
      std::memcpy(entry(out, 0, 0), inv.data(), D_);
      return out;
    }
    if (n_ == 2) {
      // adj / det
      std::vector<std::uint8_t> det(D_), tmp(D_);
      R_.mul(entry(a, 0, 0), entry(a, 1, 1), det.data());
      R_.mul(entry(a, 0, 1), entry(a, 1, 0), tmp.data());
      for (std::size_t i = 0; i < D_; ++i) det[i] = R_.fadd(det[i], R_.fneg(tmp[i]));
      auto di = R_.inverse(det.data());
      Elem out(bytes(), '\0');
      R_.mul(entry(a, 1, 1), di.data(), entry(out, 0, 0));
      R_.mul(entry(a, 0, 0), di.data(), entry(out, 1, 1));
      R_.mul(entry(a, 0, 1), di.data(), tmp.data());
      for (std::size_t i = 0; i < D_; ++i) entry(out, 0, 1)[i] = R_.fneg(tmp[i]);
      R_.mul(entry(a, 1, 0), di.data(), tmp.data());
      for (std::size_t i = 0; i < D_; ++i) entry(out, 1, 0)[i] = R_.fneg(tmp[i]);
      if (tag_.kind == GroupKind::PGL2) normalize(out);
      return out;
    }
    return pow(a, inverse_power_ - 1);
  }

  Elem pow(Elem base, std::uint64_t k) const {
    Elem result = identity();
    while (k) {
      if (k & 1) result = mul(result, base);
      k >>= 1;
      if (k) base = mul(base, base);
    }
    return result;
  }

  /// [g, h] = g h g^{-1} h^{-1}
  Elem commutator(const Elem& g, const Elem& h) const { return mul(mul(g, h), mul(inverse(g), inverse(h))); }

  Elem conjugate(const Elem& y, const Elem& h) const { return mul(mul(y, h), inverse(y)); }

  /// Least s with g^{p^s} = 1.
  std::uint32_t p_power_order(Elem g) const {
    const std::uint32_t p = R_.algebra().spec().p();
    std::uint32_t s = 0;
    const Elem& one = identity_cached();
    while (g != one) {
      if (++s > 128) throw InvariantViolation("dense p-power order did not terminate");
      g = pow(g, p);
    }
    return s;
  }

  /// Same decoding as UnipotentEnumeration::at.
  Elem at(std::uint64_t index) const {
    const std::size_t q = R_.field_size();
    std::vector<std::vector<std::uint8_t>> slots;
    for (bool full : layout_.full) {
      std::vector<std::uint8_t> v(D_, 0);
      for (std::size_t j = full ? 0 : 1; j < D_; ++j) {
        v[j] = static_cast<std::uint8_t>(index % q);
        index /= q;
      }
      slots.push_back(std::move(v));
    }
    return assemble(slots);
  }

  /// Uniform random point.
  template <class Rng>
  Elem sample(Rng& rng) const {
    const std::size_t q = R_.field_size();
    std::vector<std::vector<std::uint8_t>> slots;
    for (bool full : layout_.full) {
      std::vector<std::uint8_t> v(D_, 0);
      for (std::size_t j = full ? 0 : 1; j < D_; ++j) v[j] = static_cast<std::uint8_t>(rng() % q);
      slots.push_back(std::move(v));
    }
    return assemble(slots);
  }

  /// Generators: one point per (slot, basis monomial, F_p-basis element of F)
  /// with that single slot coefficient set.
  std::vector<Elem> generators() const {
    const auto& F = R_.algebra().field();
    std::vector<std::uint8_t> field_basis;
    // 1, a, a^2, ... where the generator a is encoded as p
    for (std::uint32_t k = 0; k < F.degree(); ++k) {
      field_basis.push_back(static_cast<std::uint8_t>(k == 0 ? 1 : F.pow(F.characteristic(), k)));
    }
    std::vector<Elem> gens;
    for (std::size_t s = 0; s < layout_.full.size(); ++s) {
      for (std::size_t j = layout_.full[s] ? 0 : 1; j < D_; ++j) {
        for (std::uint8_t c : field_basis) {
          std::vector<std::vector<std::uint8_t>> slots(layout_.full.size(), std::vector<std::uint8_t>(D_, 0));
          slots[s][j] = c;
          gens.push_back(assemble(slots));
        }
      }
    }
    return gens;
  }

  Elem from(const UnipotentElement& g) const {
    if (!(g.tag() == tag_)) throw UsageError("element has the wrong group tag");
    Elem out(bytes(), '\0');
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        auto v = R_.from(g.matrix().at(i, j));
        std::memcpy(entry(out, i, j), v.data(), D_);
      }
    }
    return out;
  }
  UnipotentElement to(const Elem& g) const { return UnipotentElement::make(tag_, to_matrix(g)); }
  AlgebraMatrix to_matrix(const Elem& g) const {
    std::vector<AlgebraElement> e;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) e.push_back(R_.to(entry(g, i, j)));
    }
    return AlgebraMatrix(n_, std::move(e));
  }

 private:
  const Elem& identity_cached() const { return identity_; }
  std::uint8_t* entry(Elem& g, std::size_t i, std::size_t j) const {
    return reinterpret_cast<std::uint8_t*>(g.data()) + (i * n_ + j) * D_;
  }
  const std::uint8_t* entry(const Elem& g, std::size_t i, std::size_t j) const {
    return reinterpret_cast<const std::uint8_t*>(g.data()) + (i * n_ + j) * D_;
  }
  bool is_zero(const std::uint8_t* x) const {
    for (std::size_t i = 0; i < D_; ++i) {
      if (x[i]) return false;
    }
    return true;
  }
  void normalize(Elem& g) const {
    const std::uint8_t* lead = entry(g, 0, 0);
    bool is_one = lead[0] == 1;
    for (std::size_t i = 1; i < D_ && is_one; ++i) is_one = lead[i] == 0;
    if (is_one) return;
    auto inv = R_.inverse(lead);
    std::vector<std::uint8_t> tmp(D_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        R_.mul(inv.data(), entry(g, i, j), tmp.data());
        std::memcpy(entry(g, i, j), tmp.data(), D_);
      }
    }
  }

  Elem assemble(const std::vector<std::vector<std::uint8_t>>& slots) const {
    Elem g(bytes(), '\0');
    auto put = [&](std::size_t i, std::size_t j, const std::vector<std::uint8_t>& v, bool plus_one) {
      std::uint8_t* dst = entry(g, i, j);
      std::memcpy(dst, v.data(), D_);
      if (plus_one) dst[0] = R_.fadd(dst[0], 1);
    };
    switch (tag_.kind) {
      case GroupKind::GL:
        for (std::size_t k = 0; k < n_ * n_; ++k) put(k / n_, k % n_, slots[k], k / n_ == k % n_);
        break;
      case GroupKind::SL2: {
        put(0, 0, slots[0], true);
        put(0, 1, slots[1], false);
        put(1, 0, slots[2], false);
        // (1 + m2 m3) (1 + m1)^{-1}
        std::vector<std::uint8_t> num(D_, 0);
        R_.mul(slots[1].data(), slots[2].data(), num.data());
        num[0] = R_.fadd(num[0], 1);
        auto inv = R_.inverse(entry(g, 0, 0));
        R_.mul(num.data(), inv.data(), entry(g, 1, 1));
        break;
      }
      case GroupKind::PGL2:
        entry(g, 0, 0)[0] = 1;
        put(0, 1, slots[0], false);
        put(1, 0, slots[1], false);
        put(1, 1, slots[2], true);
        break;
      case GroupKind::Torus:
        for (std::size_t k = 0; k < n_; ++k) put(k, k, slots[k], true);
        break;
      case GroupKind::Borel2:
      case GroupKind::Borel2m:
        put(0, 0, slots[0], true);
        put(0, 1, slots[1], false);
        put(1, 1, slots[2], true);
        break;
    }
    return g;
  }

  GroupTag tag_;
  DenseRing R_;
  SlotLayout layout_;
  std::size_t n_ = 0, D_ = 0;
  std::uint64_t exponent_digits_ = 0;
  std::uint64_t order_ = 0;
  std::uint64_t inverse_power_ = 1;
  Elem identity_;
};

}  // namespace weilrad
