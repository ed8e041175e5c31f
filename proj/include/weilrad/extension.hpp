#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/error.hpp"
#include "weilrad/field.hpp"

namespace weilrad {

/// A modular purely inseparable extension k' = k(t_1, ..., t_r) with
/// t_i^{q_i} in k and q_i = p^{e_i}. The tensor square k' (x)_k k' is then
/// k'[x_1..x_r]/(x_i^{q_i}) with x_i = 1 (x) t_i - t_i (x) 1.
class ExtensionSpec {
 public:
  ExtensionSpec(std::uint32_t p, std::vector<std::uint32_t> exponents)
      : p_(p), exponents_(std::move(exponents)) {
    if (!detail::is_prime(p)) throw UsageError("p must be prime, got " + std::to_string(p));
    if (exponents_.empty()) throw UsageError("extension needs at least one exponent");
    degree_ = 1;
    for (std::uint32_t e : exponents_) {
      if (e < 1) throw UsageError("extension exponents must be >= 1");
      std::uint64_t q = detail::checked_power(p, e);
      if (q == 0 || degree_ > (std::uint64_t{1} << 62) / q) {
        throw UsageError("extension degree exceeds 2^62");
      }
      degree_ *= q;
    }
  }

  /// Parses "p=<prime>;e=<e1,e2,...>".
  static ExtensionSpec parse(std::string_view text) {
    std::string_view s = detail::trim(text);
    auto semi = s.find(';');
    if (semi == std::string_view::npos || s.substr(0, 2) != "p=" ||
        detail::trim(s.substr(semi + 1)).substr(0, 2) != "e=") {
      throw UsageError("extension must look like 'p=<prime>;e=<e1,...>', got '" +
                       std::string(text) + "'");
    }
    std::uint64_t p = detail::parse_uint(detail::trim(s.substr(2, semi - 2)), "p");
    std::string_view list = detail::trim(s.substr(semi + 1)).substr(2);
    std::vector<std::uint32_t> exps;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= list.size(); ++i) {
      if (i == list.size() || list[i] == ',') {
        std::uint64_t e = detail::parse_uint(detail::trim(list.substr(start, i - start)), "exponent");
        if (e > 64) throw UsageError("extension exponent too large");
        exps.push_back(static_cast<std::uint32_t>(e));
        start = i + 1;
      }
    }
    if (p > UINT32_MAX) throw UsageError("p too large");
    return ExtensionSpec(static_cast<std::uint32_t>(p), std::move(exps));
  }

  std::uint32_t p() const { return p_; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }
  std::size_t rank() const { return exponents_.size(); }
  std::uint64_t q(std::size_t i) const { return detail::checked_power(p_, exponents_.at(i)); }
  std::uint64_t degree() const { return degree_; }
  /// Exponent of the extension: max e_i.
  std::uint32_t extension_exponent() const {
    return *std::max_element(exponents_.begin(), exponents_.end());
  }
  bool is_primitive() const { return exponents_.size() == 1; }

  std::string to_string() const {
    std::string out = "p=" + std::to_string(p_) + ";e=";
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(exponents_[i]);
    }
    return out;
  }

  friend bool operator==(const ExtensionSpec& a, const ExtensionSpec& b) {
    return a.p_ == b.p_ && a.exponents_ == b.exponents_;
  }

 private:
  std::uint32_t p_;
  std::vector<std::uint32_t> exponents_;
  std::uint64_t degree_ = 1;
};

}  // namespace weilrad
