#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/error.hpp"
#include "weilrad/extension.hpp"
#include "weilrad/field.hpp"

namespace weilrad {

/// A basis monomial x^alpha packed into one word. Each variable owns a bit
/// field one bit wider than q_i - 1 needs, so adding two packed monomials
/// never carries between fields.
using Monomial = std::uint64_t;

struct Term {
  Monomial mono;
  Coeff coeff;
  friend bool operator==(const Term&, const Term&) = default;
};

class AlgebraElement;

/// The truncated polynomial algebra F[x_1..x_r]/(x_1^{q_1}, ..., x_r^{q_r})
/// over a finite coefficient field F. This is the local algebra
/// k' (x)_k kbar for a modular extension, with maximal ideal m = (x_1..x_r).
///
/// The handle is cheap to copy; all copies share one immutable layout.
class TruncatedAlgebra {
 public:
  explicit TruncatedAlgebra(ExtensionSpec spec)
      : TruncatedAlgebra(spec, CoefficientField(spec.p())) {}

  TruncatedAlgebra(ExtensionSpec spec, CoefficientField field) {
    if (field.characteristic() != spec.p()) {
      throw UsageError("coefficient field " + field.to_string() +
                       " does not have characteristic p=" + std::to_string(spec.p()));
    }
    auto data = std::make_shared<Data>(Data{std::move(spec), std::move(field), {}, {}, {}, 0, 0, true});
    unsigned offset = 0;
    for (std::size_t i = 0; i < data->spec.rank(); ++i) {
      std::uint64_t q = data->spec.q(i);
      unsigned width = static_cast<unsigned>(std::bit_width(q - 1)) + 1;
      data->offsets.push_back(offset);
      data->widths.push_back(width);
      data->limits.push_back(q);
      offset += width;
      if (offset > 64) data->packable = false;
    }
    if (data->packable && data->spec.p() == 2) {
      // For q = 2^e the guard bit is set exactly when the field reaches q.
      for (std::size_t i = 0; i < data->spec.rank(); ++i) {
        data->guard_mask |= Monomial{1} << (data->offsets[i] + data->widths[i] - 1);
      }
    }
    data->nilpotency_index = 1;
    for (std::size_t i = 0; i < data->spec.rank(); ++i) data->nilpotency_index += data->limits[i] - 1;
    data_ = std::move(data);
  }

  const ExtensionSpec& spec() const { return data_->spec; }
  const CoefficientField& field() const { return data_->field; }
  std::size_t rank() const { return data_->spec.rank(); }
  /// Dimension over the coefficient field: prod q_i.
  std::uint64_t dimension() const { return data_->spec.degree(); }
  /// 1 + sum (q_i - 1): the least n with m^n = 0.
  std::uint64_t nilpotency_index() const { return data_->nilpotency_index; }
  /// Whether monomials fit in one machine word; element arithmetic needs it.
  bool packable() const { return data_->packable; }

  std::uint64_t exponent(Monomial m, std::size_t i) const {
    const unsigned w = data_->widths[i];
    const Monomial mask = w >= 64 ? ~Monomial{0} : ((Monomial{1} << w) - 1);
    return (m >> data_->offsets[i]) & mask;
  }

  std::vector<std::uint32_t> unpack(Monomial m) const {
    std::vector<std::uint32_t> out(rank());
    for (std::size_t i = 0; i < rank(); ++i) out[i] = static_cast<std::uint32_t>(exponent(m, i));
    return out;
  }

  /// Packs an exponent vector; nullopt if some exponent reaches q_i (x^alpha = 0).
  std::optional<Monomial> pack(std::span<const std::uint32_t> exps) const {
    require_packable();
    if (exps.size() != rank()) throw UsageError("exponent vector has wrong length");
    Monomial m = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (exps[i] >= data_->limits[i]) return std::nullopt;
      m |= Monomial{exps[i]} << data_->offsets[i];
    }
    return m;
  }

  /// x^a * x^b; false when the product vanishes in the truncated algebra.
  bool multiply(Monomial a, Monomial b, Monomial& out) const {
    out = a + b;
    if (data_->guard_mask) return (out & data_->guard_mask) == 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (exponent(out, i) >= data_->limits[i]) return false;
    }
    return true;
  }

  std::uint64_t total_degree(Monomial m) const {
    std::uint64_t d = 0;
    for (std::size_t i = 0; i < rank(); ++i) d += exponent(m, i);
    return d;
  }

  /// Graded lexicographic order with x1 > x2 > ...: lower degree first, then
  /// larger x1 exponent first.
  bool grlex_less(Monomial a, Monomial b) const {
    auto da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    for (std::size_t i = 0; i < rank(); ++i) {
      auto ea = exponent(a, i), eb = exponent(b, i);
      if (ea != eb) return ea > eb;
    }
    return false;
  }

  /// Mixed-radix position of a monomial in the basis, x1 varying fastest.
  std::uint64_t linear_index(Monomial m) const {
    std::uint64_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < rank(); ++i) {
      idx += exponent(m, i) * stride;
      stride *= data_->limits[i];
    }
    return idx;
  }

  Monomial monomial_at(std::uint64_t index) const {
    require_packable();
    Monomial m = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      m |= Monomial{index % data_->limits[i]} << data_->offsets[i];
      index /= data_->limits[i];
    }
    return m;
  }

  /// All basis monomials in linear_index order.
  std::vector<Monomial> basis() const {
    if (dimension() > (std::uint64_t{1} << 24)) throw UsageError("algebra too large to list its basis");
    std::vector<Monomial> out;
    out.reserve(dimension());
    for (std::uint64_t i = 0; i < dimension(); ++i) out.push_back(monomial_at(i));
    return out;
  }

  std::string format_monomial(Monomial m) const {
    std::string out;
    for (std::size_t i = 0; i < rank(); ++i) {
      auto e = exponent(m, i);
      if (e == 0) continue;
      if (!out.empty()) out += "*";
      out += "x" + std::to_string(i + 1);
      if (e > 1) out += "^" + std::to_string(e);
    }
    return out.empty() ? "1" : out;
  }

  AlgebraElement zero() const;
  AlgebraElement one() const;
  AlgebraElement constant(Coeff c) const;
  /// The generator x_{i+1} (zero-based i).
  AlgebraElement generator(std::size_t i) const;
  AlgebraElement monomial(std::span<const std::uint32_t> exps, Coeff c = 1) const;
  AlgebraElement from_terms(std::vector<Term> terms) const;
  /// Parses the canonical printing, e.g. "1 + x1 + 2*x1*x2^3".
  AlgebraElement parse(std::string_view text) const;

  void require_packable() const {
    if (!packable()) {
      throw UsageError("extension " + spec().to_string() +
                       " is too large for element arithmetic (monomials exceed 64 bits)");
    }
  }

  friend bool operator==(const TruncatedAlgebra& a, const TruncatedAlgebra& b) {
    return a.data_ == b.data_ || (a.spec() == b.spec() && a.field() == b.field());
  }

 private:
  struct Data {
    ExtensionSpec spec;
    CoefficientField field;
    std::vector<unsigned> offsets;
    std::vector<unsigned> widths;
    std::vector<std::uint64_t> limits;
    Monomial guard_mask;
    std::uint64_t nilpotency_index;
    bool packable;
  };
  std::shared_ptr<const Data> data_;
};

/// An element of a TruncatedAlgebra stored as a sorted sparse list of
/// (monomial, nonzero coefficient) pairs. Values are immutable.
class AlgebraElement {
 public:
  AlgebraElement(TruncatedAlgebra algebra, std::vector<Term> sorted_terms)
      : algebra_(std::move(algebra)), terms_(std::move(sorted_terms)) {}

  const TruncatedAlgebra& algebra() const { return algebra_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Coeff constant_term() const {
    return (!terms_.empty() && terms_.front().mono == 0) ? terms_.front().coeff : 0;
  }
  Coeff coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial v) { return t.mono < v; });
    return (it != terms_.end() && it->mono == m) ? it->coeff : 0;
  }
  /// Units are exactly the elements with nonzero constant term.
  bool is_unit() const { return constant_term() != 0; }
  bool in_maximal_ideal() const { return constant_term() == 0; }

  /// Least total degree in the support; nullopt for zero.
  std::optional<std::uint64_t> order() const {
    if (terms_.empty()) return std::nullopt;
    std::uint64_t best = UINT64_MAX;
    for (const Term& t : terms_) best = std::min(best, algebra_.total_degree(t.mono));
    return best;
  }
  /// Membership in m^i.
  bool in_power_of_maximal(std::uint64_t i) const {
    auto o = order();
    return !o || *o >= i;
  }
  /// Image in B / m^i: drops every monomial of total degree >= i.
  AlgebraElement truncate_degree(std::uint64_t i) const {
    std::vector<Term> kept;
    for (const Term& t : terms_) {
      if (algebra_.total_degree(t.mono) < i) kept.push_back(t);
    }
    return AlgebraElement(algebra_, std::move(kept));
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    const auto& F = a.algebra_.field();
    std::vector<Term> out;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->mono < j->mono)) {
        out.push_back(*i++);
      } else if (i == a.terms_.end() || j->mono < i->mono) {
        out.push_back(*j++);
      } else {
        Coeff c = F.add(i->coeff, j->coeff);
        if (c != 0) out.push_back({i->mono, c});
        ++i;
        ++j;
      }
    }
    return AlgebraElement(a.algebra_, std::move(out));
  }

  AlgebraElement operator-() const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff = algebra_.field().neg(t.coeff);
    return AlgebraElement(algebra_, std::move(out));
  }

  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) { return a + (-b); }

  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a, b);
    const auto& F = a.algebra_.field();
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& s : a.terms_) {
      for (const Term& t : b.terms_) {
        Monomial m;
        if (a.algebra_.multiply(s.mono, t.mono, m)) out.push_back({m, F.mul(s.coeff, t.coeff)});
      }
    }
    return AlgebraElement(a.algebra_, normalize(F, std::move(out)));
  }

  AlgebraElement scaled(Coeff c) const {
    const auto& F = algebra_.field();
    std::vector<Term> out;
    if (c != 0) {
      out.reserve(terms_.size());
      for (const Term& t : terms_) out.push_back({t.mono, F.mul(t.coeff, c)});
    }
    return AlgebraElement(algebra_, std::move(out));
  }

  AlgebraElement pow(std::uint64_t k) const {
    AlgebraElement result = algebra_.one();
    AlgebraElement base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Inverse of a unit by the truncated geometric series
  /// a^{-1} = c^{-1} (1 + u + ... + u^{n-1}) with a = c(1 - u), u in m.
  AlgebraElement inverse() const {
    if (!is_unit()) throw UsageError("element " + to_string() + " is not a unit");
    const auto& F = algebra_.field();
    Coeff c_inv = F.inv(constant_term());
    AlgebraElement u = algebra_.one() - scaled(c_inv);
    AlgebraElement sum = algebra_.one();
    for (std::uint64_t k = 1; k < algebra_.nilpotency_index(); ++k) {
      sum = algebra_.one() + u * sum;
    }
    return sum.scaled(c_inv);
  }

  /// Canonical printing: graded-lex order, lowest degree first.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<Term> sorted = terms_;
    std::sort(sorted.begin(), sorted.end(),
              [&](const Term& x, const Term& y) { return algebra_.grlex_less(x.mono, y.mono); });
    const auto& F = algebra_.field();
    std::string out;
    for (const Term& t : sorted) {
      if (!out.empty()) out += " + ";
      std::string c = F.format(t.coeff);
      if (t.mono == 0) {
        out += c;
        continue;
      }
      if (t.coeff != 1) {
        bool compound = c.find('+') != std::string::npos;
        out += (compound ? "(" + c + ")" : c) + "*";
      }
      out += algebra_.format_monomial(t.mono);
    }
    return out;
  }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.algebra_ == b.algebra_ && a.terms_ == b.terms_;
  }

  static std::vector<Term> normalize(const CoefficientField& F, std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mono < y.mono; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& t : terms) {
      if (!out.empty() && out.back().mono == t.mono) {
        out.back().coeff = F.add(out.back().coeff, t.coeff);
      } else {
        out.push_back(t);
      }
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
    }
    return out;
  }

 private:
  static void check_same(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.algebra_ == b.algebra_)) {
      throw UsageError("elements belong to different algebras (" + a.algebra_.spec().to_string() +
                       " over " + a.algebra_.field().to_string() + " vs " +
                       b.algebra_.spec().to_string() + " over " + b.algebra_.field().to_string() + ")");
    }
  }

  TruncatedAlgebra algebra_;
  std::vector<Term> terms_;
};

inline AlgebraElement TruncatedAlgebra::zero() const {
  require_packable();
  return AlgebraElement(*this, {});
}
inline AlgebraElement TruncatedAlgebra::one() const { return constant(1); }
inline AlgebraElement TruncatedAlgebra::constant(Coeff c) const {
  require_packable();
  if (c == 0) return zero();
  return AlgebraElement(*this, {Term{0, c}});
}
inline AlgebraElement TruncatedAlgebra::generator(std::size_t i) const {
  if (i >= rank()) throw UsageError("generator index out of range");
  std::vector<std::uint32_t> e(rank(), 0);
  e[i] = 1;
  return monomial(e);
}
inline AlgebraElement TruncatedAlgebra::monomial(std::span<const std::uint32_t> exps, Coeff c) const {
  auto m = pack(exps);
  if (!m || c == 0) return zero();
  return AlgebraElement(*this, {Term{*m, c}});
}
inline AlgebraElement TruncatedAlgebra::from_terms(std::vector<Term> terms) const {
  require_packable();
  return AlgebraElement(*this, AlgebraElement::normalize(field(), std::move(terms)));
}

inline AlgebraElement TruncatedAlgebra::parse(std::string_view text) const {
  require_packable();
  std::string_view s = detail::trim(text);
  if (s.empty()) throw UsageError("empty algebra element");
  // split on '+' outside parentheses
  std::vector<std::string_view> terms;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] == '(') ++depth;
    if (i < s.size() && s[i] == ')') --depth;
    if (i == s.size() || (s[i] == '+' && depth == 0)) {
      terms.push_back(detail::trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  AlgebraElement acc = zero();
  for (std::string_view term : terms) {
    if (term.empty()) throw UsageError("malformed algebra element '" + std::string(text) + "'");
    std::vector<std::uint32_t> exps(rank(), 0);
    Coeff coeff = field().one();
    depth = 0;
    start = 0;
    for (std::size_t i = 0; i <= term.size(); ++i) {
      if (i < term.size() && term[i] == '(') ++depth;
      if (i < term.size() && term[i] == ')') --depth;
      if (i != term.size() && !(term[i] == '*' && depth == 0)) continue;
      std::string_view factor = detail::trim(term.substr(start, i - start));
      start = i + 1;
      if (factor.empty()) throw UsageError("malformed term '" + std::string(term) + "'");
      if (factor.front() == 'x') {
        auto caret = factor.find('^');
        std::uint64_t var = detail::parse_uint(factor.substr(1, caret == std::string_view::npos
                                                                    ? std::string_view::npos
                                                                    : caret - 1),
                                               "variable index");
        if (var < 1 || var > rank()) {
          throw UsageError("variable x" + std::to_string(var) + " not in algebra of rank " +
                           std::to_string(rank()));
        }
        std::uint64_t e = caret == std::string_view::npos
                              ? 1
                              : detail::parse_uint(factor.substr(caret + 1), "variable exponent");
        exps[var - 1] = static_cast<std::uint32_t>(std::min<std::uint64_t>(exps[var - 1] + e, UINT32_MAX));
      } else {
        coeff = field().mul(coeff, field().parse_element(factor));
      }
    }
    acc = acc + monomial(exps, coeff);
  }
  return acc;
}

/// Uniformly random element of m^min_degree (every monomial of total degree
/// >= min_degree gets an independent random coefficient).
template <class Rng>
AlgebraElement random_element(const TruncatedAlgebra& A, Rng& rng, std::uint64_t min_degree = 0) {
  const std::uint64_t q = A.field().size();
  std::vector<Term> terms;
  for (Monomial m : A.basis()) {
    if (A.total_degree(m) < min_degree) continue;
    Coeff c = static_cast<Coeff>(rng() % q);
    if (c != 0) terms.push_back({m, c});
  }
  return A.from_terms(std::move(terms));
}

}  // namespace weilrad
