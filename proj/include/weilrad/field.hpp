#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/error.hpp"

namespace weilrad {

/// A finite-field element, encoded as an integer in [0, field size).
/// For F_{p^d} the base-p digits are the coefficients of the element as a
/// polynomial in the generator `a` (lowest degree first).
using Coeff = std::uint32_t;

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// p^k, or 0 when the result would exceed 2^62.
inline std::uint64_t checked_power(std::uint64_t base, std::uint64_t exp) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > kLimit / base) return 0;
    r *= base;
  }
  return r;
}

inline std::uint64_t parse_uint(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string("expected a non-negative integer for ") + what +
                     ", got '" + std::string(text) + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// The finite field F_{p^d}, used as a stand-in for the algebraic closure of
/// the base field. Prime fields use modular arithmetic directly; extension
/// fields are tabulated and so limited to kMaxTabulated elements.
class CoefficientField {
 public:
  static constexpr std::uint64_t kMaxTabulated = 1024;

  explicit CoefficientField(std::uint32_t p, std::uint32_t degree = 1) : p_(p), d_(degree) {
    if (!detail::is_prime(p)) {
      throw UsageError("field characteristic must be prime, got " + std::to_string(p));
    }
    if (p >= (std::uint32_t{1} << 31)) throw UsageError("field characteristic too large");
    if (degree < 1) throw UsageError("field degree must be at least 1");
    size_ = detail::checked_power(p, degree);
    if (degree > 1) {
      if (size_ == 0 || size_ > kMaxTabulated) {
        throw UsageError("extension field F" + std::to_string(p) + "^" + std::to_string(degree) +
                         " is larger than the supported " + std::to_string(kMaxTabulated) +
                         " elements");
      }
      tables_ = build_tables();
    }
  }

  /// Accepts "F4", "F2^2", "F<4>" and "F<2^2>".
  static CoefficientField parse(std::string_view text) {
    std::string_view s = detail::trim(text);
    if (s.size() < 2 || (s[0] != 'F' && s[0] != 'f')) {
      throw UsageError("coefficient field must look like F<q>, got '" + std::string(text) + "'");
    }
    s.remove_prefix(1);
    if (!s.empty() && s.front() == '<') {
      if (s.back() != '>') throw UsageError("unbalanced '<' in field '" + std::string(text) + "'");
      s = s.substr(1, s.size() - 2);
    }
    std::uint64_t p = 0, d = 1;
    if (auto caret = s.find('^'); caret != std::string_view::npos) {
      p = detail::parse_uint(s.substr(0, caret), "field characteristic");
      d = detail::parse_uint(s.substr(caret + 1), "field degree");
    } else {
      std::uint64_t q = detail::parse_uint(s, "field size");
      if (q < 2) throw UsageError("field size must be a prime power, got " + std::to_string(q));
      for (p = 2; p * p <= q && q % p != 0; ++p) {
      }
      if (q % p != 0) p = q;
      d = 0;
      for (std::uint64_t r = q; r > 1; r /= p) {
        if (r % p != 0) throw UsageError("field size must be a prime power, got " + std::to_string(q));
        ++d;
      }
    }
    if (p > UINT32_MAX || d > 64) throw UsageError("field '" + std::string(text) + "' too large");
    return CoefficientField(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(d));
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return d_; }
  std::uint64_t size() const { return size_; }
  bool is_prime_field() const { return d_ == 1; }

  /// Defining polynomial, lowest coefficient first, monic of degree d.
  /// Empty for prime fields.
  std::vector<std::uint32_t> modulus() const {
    return tables_ ? tables_->modulus : std::vector<std::uint32_t>{};
  }

  Coeff zero() const { return 0; }
  Coeff one() const { return 1; }

  Coeff from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Coeff>(r);
  }

  Coeff add(Coeff a, Coeff b) const {
    if (tables_) return tables_->add[a * size_ + b];
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Coeff>(s >= p_ ? s - p_ : s);
  }
  Coeff neg(Coeff a) const {
    if (tables_) return tables_->neg[a];
    return a == 0 ? 0 : p_ - a;
  }
  Coeff sub(Coeff a, Coeff b) const { return add(a, neg(b)); }
  Coeff mul(Coeff a, Coeff b) const {
    if (tables_) return tables_->mul[a * size_ + b];
    return static_cast<Coeff>((std::uint64_t{a} * b) % p_);
  }
  Coeff pow(Coeff a, std::uint64_t k) const {
    Coeff r = one();
    while (k) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }
  Coeff inv(Coeff a) const {
    if (a == 0) throw UsageError("division by zero in " + to_string());
    if (tables_) return tables_->inv[a];
    return pow(a, p_ - 2);
  }
  Coeff frobenius(Coeff a) const { return pow(a, p_); }

  /// "F4" style name.
  std::string to_string() const { return "F" + std::to_string(size_); }

  /// Decimal for prime fields, polynomial in `a` otherwise ("a^2+a+1").
  std::string format(Coeff c) const {
    if (is_prime_field()) return std::to_string(c);
    if (c == 0) return "0";
    std::string out;
    std::vector<std::uint32_t> digits = to_digits(c);
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (digits[i] == 0) continue;
      if (!out.empty()) out += "+";
      if (i == 0) {
        out += std::to_string(digits[i]);
        continue;
      }
      if (digits[i] != 1) out += std::to_string(digits[i]) + "*";
      out += "a";
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

  /// Inverse of format(); integers are reduced modulo p.
  Coeff parse_element(std::string_view text) const {
    std::string_view s = detail::trim(text);
    if (!s.empty() && s.front() == '(' && s.back() == ')') s = detail::trim(s.substr(1, s.size() - 2));
    if (s.empty()) throw UsageError("empty field element");
    Coeff acc = zero();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == '+') {
        acc = add(acc, parse_field_term(detail::trim(s.substr(start, i - start)), text));
        start = i + 1;
      }
    }
    return acc;
  }

  std::vector<Coeff> elements() const {
    std::vector<Coeff> all(size_);
    for (std::uint64_t i = 0; i < size_; ++i) all[i] = static_cast<Coeff>(i);
    return all;
  }

  friend bool operator==(const CoefficientField& a, const CoefficientField& b) {
    return a.p_ == b.p_ && a.d_ == b.d_;
  }

 private:
  struct Tables {
    std::vector<std::uint32_t> modulus;
    std::vector<Coeff> add, mul, neg, inv;
  };

  std::vector<std::uint32_t> to_digits(Coeff c) const {
    std::vector<std::uint32_t> digits(d_, 0);
    for (std::uint32_t i = 0; i < d_; ++i) {
      digits[i] = c % p_;
      c /= p_;
    }
    return digits;
  }
  Coeff from_digits(const std::vector<std::uint32_t>& digits) const {
    Coeff c = 0;
    for (std::size_t i = digits.size(); i-- > 0;) c = c * p_ + digits[i];
    return c;
  }

  Coeff parse_field_term(std::string_view term, std::string_view whole) const {
    if (term.empty()) throw UsageError("malformed field element '" + std::string(whole) + "'");
    Coeff factor = one();
    std::string_view rest = term;
    if (auto star = term.find('*'); star != std::string_view::npos) {
      factor = from_int(static_cast<std::int64_t>(detail::parse_uint(term.substr(0, star), "coefficient") % p_));
      rest = term.substr(star + 1);
    }
    if (rest.empty() || rest.front() != 'a') {
      return mul(factor, from_int(static_cast<std::int64_t>(detail::parse_uint(rest, "coefficient") % p_)));
    }
    if (is_prime_field()) throw UsageError("generator 'a' is not defined in prime field " + to_string());
    std::uint64_t k = 1;
    if (rest.size() > 1) {
      if (rest[1] != '^') throw UsageError("malformed field element '" + std::string(whole) + "'");
      k = detail::parse_uint(rest.substr(2), "exponent of a");
    }
    return mul(factor, pow(static_cast<Coeff>(p_), k));  // `a` is encoded as p
  }

  std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a,
                                      const std::vector<std::uint32_t>& m) const {
    // m monic
    const std::size_t dm = m.size() - 1;
    for (std::size_t i = a.size(); i-- > dm;) {
      std::uint32_t c = a[i] % p_;
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dm; ++j) {
        std::uint64_t t = (std::uint64_t{c} * m[j]) % p_;
        a[i - dm + j] = static_cast<std::uint32_t>((a[i - dm + j] + p_ - t) % p_);
      }
    }
    a.resize(std::min(a.size(), dm));
    return a;
  }

  bool irreducible(const std::vector<std::uint32_t>& f) const {
    const std::uint32_t d = static_cast<std::uint32_t>(f.size() - 1);
    for (std::uint32_t k = 1; 2 * k <= d; ++k) {
      std::uint64_t count = detail::checked_power(p_, k);
      for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<std::uint32_t> g(k + 1, 0);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < k; ++i) {
          g[i] = c % p_;
          c /= p_;
        }
        g[k] = 1;
        auto r = poly_mod(f, g);
        if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return false;
      }
    }
    return true;
  }

  std::shared_ptr<const Tables> build_tables() const {
    auto t = std::make_shared<Tables>();
    // First monic irreducible in increasing code order.
    for (std::uint64_t code = 0;; ++code) {
      std::vector<std::uint32_t> f(d_ + 1, 0);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < d_; ++i) {
        f[i] = c % p_;
        c /= p_;
      }
      f[d_] = 1;
      if (f[0] != 0 && irreducible(f)) {
        t->modulus = f;
        break;
      }
    }
    const std::uint64_t q = size_;
    t->add.resize(q * q);
    t->mul.resize(q * q);
    t->neg.resize(q);
    t->inv.assign(q, 0);
    for (Coeff a = 0; a < q; ++a) {
      auto da = to_digits(a);
      std::vector<std::uint32_t> dn(d_);
      for (std::uint32_t i = 0; i < d_; ++i) dn[i] = (p_ - da[i]) % p_;
      t->neg[a] = from_digits(dn);
      for (Coeff b = 0; b < q; ++b) {
        auto db = to_digits(b);
        std::vector<std::uint32_t> ds(d_);
        for (std::uint32_t i = 0; i < d_; ++i) ds[i] = (da[i] + db[i]) % p_;
        t->add[a * q + b] = from_digits(ds);
        std::vector<std::uint32_t> prod(2 * d_ - 1, 0);
        for (std::uint32_t i = 0; i < d_; ++i) {
          for (std::uint32_t j = 0; j < d_; ++j) {
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{da[i]} * db[j]) % p_);
          }
        }
        auto reduced = poly_mod(prod, t->modulus);
        reduced.resize(d_, 0);
        t->mul[a * q + b] = from_digits(reduced);
      }
    }
    for (Coeff a = 1; a < q; ++a) {
      for (Coeff b = 1; b < q; ++b) {
        if (t->mul[a * q + b] == 1) {
          t->inv[a] = b;
          break;
        }
      }
    }
    return t;
  }

  std::uint32_t p_;
  std::uint32_t d_;
  std::uint64_t size_ = 0;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace weilrad
