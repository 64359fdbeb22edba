#pragma once
//
// Exact integer linear algebra: fraction-free elimination, determinants and
// Smith normal form over arbitrary-precision integers.
//

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "excol/error.hpp"

namespace excol {

using BigInt = boost::multiprecision::cpp_int;

/// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
      for (auto v : row) data_.emplace_back(v);
    }
  }

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols = 0) {
    IntMatrix m(rows.size(), rows.empty() ? cols : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != m.cols_) throw std::invalid_argument("IntMatrix: ragged rows");
      for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix p(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) p(i, j) += a(i, k) * b(k, j);
      }
    return p;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// Rank over the rationals by Bareiss fraction-free elimination.
inline std::size_t rational_rank(IntMatrix m) {
  std::size_t rank = 0;
  BigInt prev = 1;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(rank, pivot);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      for (std::size_t c = col + 1; c < m.cols(); ++c)
        m(r, c) = (m(rank, col) * m(r, c) - m(r, col) * m(rank, c)) / prev;
      m(r, col) = 0;
    }
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

inline BigInt determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      m.swap_rows(k, pivot);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

/// adj(m), so that m * adj(m) = det(m) * I.
inline IntMatrix adjugate(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("adjugate: matrix not square");
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = m(r, c);
        }
        ++mr;
      }
      BigInt cof = determinant(std::move(minor));
      adj(j, i) = ((i + j) % 2 == 0) ? cof : BigInt(-cof);
    }
  return adj;
}

/// left * m * right == diagonal, with left and right unimodular and the
/// nonzero diagonal entries non-negative, each dividing the next.
struct SmithForm {
  IntMatrix left;
  IntMatrix diagonal;
  IntMatrix right;
  std::size_t rank = 0;
};

inline SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithForm sf{IntMatrix::identity(rows), m, IntMatrix::identity(cols), 0};
  IntMatrix& d = sf.diagonal;
  IntMatrix& u = sf.left;
  IntMatrix& v = sf.right;

  auto add_row = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t c = 0; c < cols; ++c) d(dst, c) += f * d(src, c);
    for (std::size_t c = 0; c < rows; ++c) u(dst, c) += f * u(src, c);
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t r = 0; r < rows; ++r) d(r, dst) += f * d(r, src);
    for (std::size_t r = 0; r < cols; ++r) v(r, dst) += f * v(r, src);
  };

  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    bool found = false;
    std::size_t pr = t, pc = t;
    for (std::size_t r = t; r < rows; ++r)
      for (std::size_t c = t; c < cols; ++c)
        if (d(r, c) != 0 && (!found || abs(d(r, c)) < abs(d(pr, pc)))) {
          found = true;
          pr = r;
          pc = c;
        }
    if (!found) break;
    d.swap_rows(t, pr);
    u.swap_rows(t, pr);
    d.swap_cols(t, pc);
    v.swap_cols(t, pc);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (d(r, t) == 0) continue;
        BigInt q = d(r, t) / d(t, t);
        add_row(r, t, -q);
        if (d(r, t) != 0) {
          d.swap_rows(t, r);
          u.swap_rows(t, r);
          clean = false;
        }
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (d(t, c) == 0) continue;
        BigInt q = d(t, c) / d(t, t);
        add_col(c, t, -q);
        if (d(t, c) != 0) {
          d.swap_cols(t, c);
          v.swap_cols(t, c);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row and retry.
      for (std::size_t r = t + 1; r < rows && clean; ++r)
        for (std::size_t c = t + 1; c < cols; ++c)
          if (d(r, c) % d(t, t) != 0) {
            add_row(t, r, 1);
            clean = false;
            break;
          }
    }
    if (d(t, t) < 0) {
      for (std::size_t c = 0; c < cols; ++c) d(t, c) = -d(t, c);
      for (std::size_t c = 0; c < rows; ++c) u(t, c) = -u(t, c);
    }
    ++t;
  }
  sf.rank = t;
  return sf;
}

/// Z^cols modulo the row space of m, i.e. the cokernel of the transpose map.
struct CokernelBasis {
  std::size_t free_rank = 0;
  IntMatrix projection;  // free_rank x cols, surjective onto Z^free_rank
};

inline CokernelBasis cokernel_basis(const IntMatrix& m) {
  SmithForm sf = smith_normal_form(m.transpose());
  std::vector<BigInt> torsion;
  for (std::size_t i = 0; i < sf.rank; ++i)
    if (sf.diagonal(i, i) != 1) torsion.push_back(sf.diagonal(i, i));
  if (!torsion.empty()) {
    std::string msg = "cokernel has torsion:";
    for (const auto& t : torsion) msg += " Z/" + t.str();
    throw TorsionPresent(msg);
  }
  const std::size_t p = m.cols();
  CokernelBasis cb;
  cb.free_rank = p - sf.rank;
  cb.projection = IntMatrix(cb.free_rank, p);
  for (std::size_t i = 0; i < cb.free_rank; ++i)
    for (std::size_t c = 0; c < p; ++c) cb.projection(i, c) = sf.left(sf.rank + i, c);
  return cb;
}

/// Floor and ceiling of a rational number num/den, den != 0.
inline BigInt floor_div(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  BigInt r = num % den;
  if (r != 0 && ((r < 0) != (den < 0))) --q;
  return q;
}

inline BigInt ceil_div(const BigInt& num, const BigInt& den) { return -floor_div(-num, den); }

}  // namespace excol
