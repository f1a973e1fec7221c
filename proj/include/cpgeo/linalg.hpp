#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpgeo/field/scalar.hpp"

namespace cpgeo {

template <class S>
using Vec = std::vector<S>;

/// Dense row-major matrix over a scalar backend.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), d_(rows * cols, S(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }
  /// Matrix whose columns are the given vectors.
  static Matrix from_columns(const std::vector<Vec<S>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  S& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }

  Vec<S> row(std::size_t i) const { return Vec<S>(d_.begin() + i * c_, d_.begin() + (i + 1) * c_); }
  Vec<S> col(std::size_t j) const {
    Vec<S> v;
    v.reserve(r_);
    for (std::size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
    return v;
  }

  Matrix transposed() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product dimension mismatch");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const S& x = a(i, k);
        if (structurally_zero(x)) continue;
        for (std::size_t j = 0; j < b.c_; ++j) m(i, j) += x * b(k, j);
      }
    return m;
  }
  friend Vec<S> operator*(const Matrix& a, const Vec<S>& v) {
    if (a.c_ != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vec<S> out(a.r_, S(0));
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t j = 0; j < a.c_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] += b.d_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.d_.size(); ++i) a.d_[i] -= b.d_[i];
    return a;
  }
  Matrix scaled(const S& s) const {
    Matrix m = *this;
    for (auto& x : m.d_) x *= s;
    return m;
  }

  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

  template <class F>
  auto map(F&& f) const {
    using T = decltype(f(std::declval<const S&>()));
    Matrix<T> m(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
    return m;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<S> d_;
};

template <class S>
Vec<S> zero_vec(std::size_t n) {
  return Vec<S>(n, S(0));
}
template <class S>
Vec<S> unit_vec(std::size_t n, std::size_t i) {
  Vec<S> v(n, S(0));
  v[i] = S(1);
  return v;
}
template <class S>
Vec<S> operator+(Vec<S> a, const Vec<S>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
template <class S>
Vec<S> operator-(Vec<S> a, const Vec<S>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
template <class S>
Vec<S> operator-(Vec<S> a) {
  for (auto& x : a) x = -x;
  return a;
}
template <class S>
Vec<S> scale(const S& s, Vec<S> a) {
  for (auto& x : a) x = s * x;
  return a;
}
template <class S>
bool all_near_zero(const Vec<S>& v, double tol) {
  for (const auto& x : v)
    if (!near_zero(x, tol)) return false;
  return true;
}

/// Reduced row echelon form with deterministic pivoting.
///
/// Pivot rule: among the unused columns (only the first `pivot_cols`) and
/// remaining rows, take the best pivot class (nonzero constant over nonzero
/// field), then the smallest column, then (float only) the largest sampled
/// magnitude, then the smallest row.
template <class S>
struct RowReduced {
  Matrix<S> m;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col), row = elimination step
  std::vector<bool> is_pivot_col;
  std::size_t rank() const { return pivots.size(); }
};

template <class S>
RowReduced<S> row_reduce(Matrix<S> m, double tol, std::optional<std::size_t> pivot_cols = std::nullopt) {
  const std::size_t R = m.rows(), C = pivot_cols.value_or(m.cols());
  RowReduced<S> out;
  out.is_pivot_col.assign(m.cols(), false);
  std::size_t step = 0;
  while (step < R) {
    int best_class = 0;
    std::size_t br = 0, bc = 0;
    double best_strength = -1;
    for (std::size_t j = 0; j < C; ++j) {
      if (out.is_pivot_col[j]) continue;
      for (std::size_t i = step; i < R; ++i) {
        const int cls = pivot_class(m(i, j), tol);
        if (cls == 0) continue;
        const double st = pivot_strength(m(i, j));
        const bool better = cls > best_class || (cls == best_class && j == bc && st > best_strength * (1 + 1e-12));
        if (better) {
          best_class = cls;
          br = i;
          bc = j;
          best_strength = st;
        }
      }
    }
    if (best_class == 0) break;
    if (br != step)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(br, j), m(step, j));
    const S inv = S(1) / m(step, bc);
    for (std::size_t j = 0; j < m.cols(); ++j) m(step, j) = j == bc ? S(1) : m(step, j) * inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == step) continue;
      const S f = m(i, bc);
      if (structurally_zero(f)) continue;
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = j == bc ? S(0) : m(i, j) - f * m(step, j);
    }
    out.pivots.emplace_back(step, bc);
    out.is_pivot_col[bc] = true;
    ++step;
  }
  out.m = std::move(m);
  return out;
}

template <class S>
std::size_t rank(const Matrix<S>& m, double tol = 1e-9) {
  return row_reduce(m, tol).rank();
}

/// Kernel basis, one vector per free column in increasing column order.
template <class S>
std::vector<Vec<S>> kernel(const Matrix<S>& m, double tol = 1e-9) {
  const auto rr = row_reduce(m, tol);
  std::vector<Vec<S>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (rr.is_pivot_col[f]) continue;
    Vec<S> v(m.cols(), S(0));
    v[f] = S(1);
    for (auto [r, c] : rr.pivots) v[c] = -rr.m(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unique solution of M x = B (columns of B are right-hand sides). Extra
/// consistent rows are allowed; rank deficiency or inconsistency throws.
template <class S>
Matrix<S> solve(const Matrix<S>& M, const Matrix<S>& B, double tol = 1e-9) {
  const std::size_t n = M.cols();
  Matrix<S> aug(M.rows(), n + B.cols());
  for (std::size_t i = 0; i < M.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
    for (std::size_t j = 0; j < B.cols(); ++j) aug(i, n + j) = B(i, j);
  }
  const auto rr = row_reduce(std::move(aug), tol, n);
  if (rr.rank() < n) throw SingularSystem("linear system is singular (rank " + std::to_string(rr.rank()) + " < " + std::to_string(n) + ")");
  for (std::size_t i = rr.rank(); i < M.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j)
      if (!near_zero(rr.m(i, n + j), tol)) throw SingularSystem("linear system is inconsistent");
  Matrix<S> x(n, B.cols());
  for (auto [r, c] : rr.pivots)
    for (std::size_t j = 0; j < B.cols(); ++j) x(c, j) = rr.m(r, n + j);
  return x;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& m, double tol = 1e-9) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  try {
    return solve(m, Matrix<S>::identity(m.rows()), tol);
  } catch (const SingularSystem&) {
    throw SingularSystem("matrix is not invertible");
  }
}

/// Determinant by elimination with the same pivot preference (row choice only).
template <class S>
S determinant(Matrix<S> m, double tol = 1e-9) {
  const std::size_t n = m.rows();
  S det(1);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = n;
    int bc = 0;
    double bs = -1;
    for (std::size_t i = j; i < n; ++i) {
      const int c = pivot_class(m(i, j), tol);
      const double s = pivot_strength(m(i, j));
      if (c > bc || (c == bc && c > 0 && s > bs * (1 + 1e-12))) {
        bc = c;
        best = i;
        bs = s;
      }
    }
    if (bc == 0) return S(0);
    if (best != j) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(best, k), m(j, k));
      det = -det;
    }
    det *= m(j, j);
    const S inv = S(1) / m(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      const S f = m(i, j) * inv;
      for (std::size_t k = j; k < n; ++k) m(i, k) -= f * m(j, k);
    }
  }
  return det;
}

/// Whether every vector in `vs` lies in the span of `basis`.
template <class S>
bool in_span(const std::vector<Vec<S>>& basis, const std::vector<Vec<S>>& vs, std::size_t dim, double tol = 1e-9) {
  if (vs.empty()) return true;
  auto cols = basis;
  const std::size_t r0 = rank(Matrix<S>::from_columns(basis, dim), tol);
  cols.insert(cols.end(), vs.begin(), vs.end());
  return rank(Matrix<S>::from_columns(cols, dim), tol) == r0;
}

}  // namespace cpgeo
