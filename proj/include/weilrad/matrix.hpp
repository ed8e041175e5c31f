#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/algebra.hpp"
#include "weilrad/error.hpp"

namespace weilrad {

/// Square matrix over a TruncatedAlgebra, row-major.
class AlgebraMatrix {
 public:
  AlgebraMatrix(std::size_t n, std::vector<AlgebraElement> entries) : n_(n), entries_(std::move(entries)) {
    if (n_ == 0 || entries_.size() != n_ * n_) throw UsageError("matrix needs n*n entries with n >= 1");
    for (const auto& e : entries_) {
      if (!(e.algebra() == entries_.front().algebra())) throw UsageError("matrix entries from different algebras");
    }
  }

  static AlgebraMatrix identity(const TruncatedAlgebra& A, std::size_t n) {
    std::vector<AlgebraElement> e(n * n, A.zero());
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = A.one();
    return AlgebraMatrix(n, std::move(e));
  }
  static AlgebraMatrix zero(const TruncatedAlgebra& A, std::size_t n) {
    return AlgebraMatrix(n, std::vector<AlgebraElement>(n * n, A.zero()));
  }
  static AlgebraMatrix diagonal(const std::vector<AlgebraElement>& d) {
    if (d.empty()) throw UsageError("empty diagonal");
    AlgebraMatrix m = zero(d.front().algebra(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.entries_[i * d.size() + i] = d[i];
    return m;
  }
  /// 2x2 convenience constructor.
  static AlgebraMatrix of(AlgebraElement a, AlgebraElement b, AlgebraElement c, AlgebraElement d) {
    return AlgebraMatrix(2, {std::move(a), std::move(b), std::move(c), std::move(d)});
  }

  std::size_t size() const { return n_; }
  const TruncatedAlgebra& algebra() const { return entries_.front().algebra(); }
  const AlgebraElement& at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<AlgebraElement>& entries() const { return entries_; }

  AlgebraMatrix with(std::size_t i, std::size_t j, AlgebraElement v) const {
    AlgebraMatrix m = *this;
    m.entries_.at(i * n_ + j) = std::move(v);
    return m;
  }

  friend AlgebraMatrix operator+(const AlgebraMatrix& a, const AlgebraMatrix& b) {
    check_shape(a, b);
    std::vector<AlgebraElement> e;
    e.reserve(a.entries_.size());
    for (std::size_t k = 0; k < a.entries_.size(); ++k) e.push_back(a.entries_[k] + b.entries_[k]);
    return AlgebraMatrix(a.n_, std::move(e));
  }
  friend AlgebraMatrix operator-(const AlgebraMatrix& a, const AlgebraMatrix& b) {
    check_shape(a, b);
    std::vector<AlgebraElement> e;
    e.reserve(a.entries_.size());
    for (std::size_t k = 0; k < a.entries_.size(); ++k) e.push_back(a.entries_[k] - b.entries_[k]);
    return AlgebraMatrix(a.n_, std::move(e));
  }
  friend AlgebraMatrix operator*(const AlgebraMatrix& a, const AlgebraMatrix& b) {
    check_shape(a, b);
    const std::size_t n = a.n_;
    std::vector<AlgebraElement> e(n * n, a.algebra().zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const AlgebraElement& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) e[i * n + j] = e[i * n + j] + aik * b.at(k, j);
      }
    }
    return AlgebraMatrix(n, std::move(e));
  }
  AlgebraMatrix scaled(const AlgebraElement& s) const {
    std::vector<AlgebraElement> e;
    e.reserve(entries_.size());
    for (const auto& x : entries_) e.push_back(s * x);
    return AlgebraMatrix(n_, std::move(e));
  }
  AlgebraMatrix transpose() const {
    std::vector<AlgebraElement> e = entries_;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) e[j * n_ + i] = at(i, j);
    }
    return AlgebraMatrix(n_, std::move(e));
  }
  AlgebraMatrix pow(std::uint64_t k) const {
    AlgebraMatrix result = identity(algebra(), n_);
    AlgebraMatrix base = *this;
    while (k) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Leibniz expansion over all permutations.
  AlgebraElement determinant() const {
    std::vector<std::size_t> perm(n_);
    std::iota(perm.begin(), perm.end(), 0);
    const auto& A = algebra();
    AlgebraElement det = A.zero();
    do {
      AlgebraElement term = A.one();
      for (std::size_t i = 0; i < n_ && !term.is_zero(); ++i) term = term * at(i, perm[i]);
      det = permutation_is_odd(perm) ? det - term : det + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
  }

  AlgebraMatrix minor_matrix(std::size_t row, std::size_t col) const {
    std::vector<AlgebraElement> e;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i != row && j != col) e.push_back(at(i, j));
      }
    }
    return AlgebraMatrix(n_ - 1, std::move(e));
  }

  AlgebraMatrix adjugate() const {
    const auto& A = algebra();
    if (n_ == 1) return identity(A, 1);
    std::vector<AlgebraElement> e(n_ * n_, A.zero());
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        AlgebraElement c = minor_matrix(i, j).determinant();
        e[j * n_ + i] = ((i + j) % 2) ? -c : c;
      }
    }
    return AlgebraMatrix(n_, std::move(e));
  }

  bool is_invertible() const { return determinant().is_unit(); }

  /// Adjugate / determinant for n <= 3, Gauss-Jordan elimination otherwise.
  AlgebraMatrix inverse() const {
    if (n_ <= 3) return inverse_by_adjugate();
    return inverse_by_elimination();
  }

  AlgebraMatrix inverse_by_adjugate() const {
    AlgebraElement det = determinant();
    if (!det.is_unit()) throw InvariantViolation("matrix is singular over the local ring");
    return adjugate().scaled(det.inverse());
  }

  /// Over a local ring an invertible matrix always has a unit pivot in each
  /// column of the remaining block.
  AlgebraMatrix inverse_by_elimination() const {
    const auto& A = algebra();
    AlgebraMatrix work = *this;
    AlgebraMatrix inv = identity(A, n_);
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t pivot = n_;
      for (std::size_t r = col; r < n_; ++r) {
        if (work.at(r, col).is_unit()) {
          pivot = r;
          break;
        }
      }
      if (pivot == n_) throw InvariantViolation("matrix is singular over the local ring");
      work.swap_rows(pivot, col);
      inv.swap_rows(pivot, col);
      AlgebraElement s = work.at(col, col).inverse();
      work.scale_row(col, s);
      inv.scale_row(col, s);
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == col || work.at(r, col).is_zero()) continue;
        AlgebraElement f = work.at(r, col);
        work.add_row_multiple(r, col, -f);
        inv.add_row_multiple(r, col, -f);
      }
    }
    return inv;
  }

  bool is_identity() const { return *this == identity(algebra(), n_); }

  /// Image in M_n(B / m^i).
  AlgebraMatrix truncate_degree(std::uint64_t i) const {
    std::vector<AlgebraElement> e;
    e.reserve(entries_.size());
    for (const auto& x : entries_) e.push_back(x.truncate_degree(i));
    return AlgebraMatrix(n_, std::move(e));
  }

  /// Rows separated by ';', entries by ','.
  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i) out += "; ";
      for (std::size_t j = 0; j < n_; ++j) {
        if (j) out += ", ";
        out += at(i, j).to_string();
      }
    }
    return out;
  }

  static AlgebraMatrix parse(const TruncatedAlgebra& A, std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i == text.size() || text[i] == ';') {
        rows.push_back(split_commas(text.substr(start, i - start)));
        start = i + 1;
      }
    }
    const std::size_t n = rows.size();
    std::vector<AlgebraElement> e;
    for (const auto& row : rows) {
      if (row.size() != n) throw UsageError("matrix text is not square: '" + std::string(text) + "'");
      for (auto cell : row) e.push_back(A.parse(cell));
    }
    return AlgebraMatrix(n, std::move(e));
  }

  friend bool operator==(const AlgebraMatrix& a, const AlgebraMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  static std::vector<std::string_view> split_commas(std::string_view row) {
    std::vector<std::string_view> cells;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= row.size(); ++i) {
      if (i < row.size() && row[i] == '(') ++depth;
      if (i < row.size() && row[i] == ')') --depth;
      if (i == row.size() || (row[i] == ',' && depth == 0)) {
        cells.push_back(detail::trim(row.substr(start, i - start)));
        start = i + 1;
      }
    }
    return cells;
  }
  static bool permutation_is_odd(const std::vector<std::size_t>& perm) {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
    }
    return inversions % 2;
  }
  static void check_shape(const AlgebraMatrix& a, const AlgebraMatrix& b) {
    if (a.n_ != b.n_) throw UsageError("matrix size mismatch");
    if (!(a.algebra() == b.algebra())) throw UsageError("matrices over different algebras");
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n_; ++j) std::swap(entries_[a * n_ + j], entries_[b * n_ + j]);
  }
  void scale_row(std::size_t r, const AlgebraElement& s) {
    for (std::size_t j = 0; j < n_; ++j) entries_[r * n_ + j] = s * entries_[r * n_ + j];
  }
  void add_row_multiple(std::size_t target, std::size_t source, const AlgebraElement& f) {
    for (std::size_t j = 0; j < n_; ++j) {
      entries_[target * n_ + j] = entries_[target * n_ + j] + f * entries_[source * n_ + j];
    }
  }

  std::size_t n_;
  std::vector<AlgebraElement> entries_;
};

}  // namespace weilrad
