#pragma once

// Small dense linear algebra over exact fields.

#include <utility>
#include <vector>

#include "biconic/poly.hpp"

namespace biconic {

template <class F>
using Matrix = std::vector<std::vector<F>>;

template <class F>
F determinant(Matrix<F> m) {
  const size_t n = m.size();
  F det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && is_zero(m[piv][col])) ++piv;
    if (piv == n) return F(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = F(-det);
    }
    det = F(det * m[col][col]);
    F inv = F(F(1) / m[col][col]);
    for (size_t r = col + 1; r < n; ++r) {
      if (is_zero(m[r][col])) continue;
      F factor = F(m[r][col] * inv);
      for (size_t c = col; c < n; ++c) m[r][c] = F(m[r][c] - factor * m[col][c]);
    }
  }
  return det;
}

/// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<size_t> row_reduce(Matrix<F>& m) {
  std::vector<size_t> pivots;
  if (m.empty()) return pivots;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && is_zero(m[piv][c])) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    F inv = F(F(1) / m[r][c]);
    for (size_t k = 0; k < cols; ++k) m[r][k] = F(m[r][k] * inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      F factor = m[i][c];
      for (size_t k = 0; k < cols; ++k) m[i][k] = F(m[i][k] - factor * m[r][k]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
size_t rank(Matrix<F> m) {
  return row_reduce(m).size();
}

/// Basis of the right kernel {v : m v = 0}.
template <class F>
std::vector<std::vector<F>> kernel(Matrix<F> m) {
  const size_t cols = m.empty() ? 0 : m[0].size();
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(cols, F(0));
    v[free] = F(1);
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F(-m[i][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
std::vector<F> mat_vec(const Matrix<F>& m, const std::vector<F>& v) {
  std::vector<F> out(m.size(), F(0));
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] = F(out[i] + m[i][j] * v[j]);
  return out;
}

/// Inverse of a square matrix; throws if singular.
template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
  const size_t n = m.size();
  Matrix<F> aug(n, std::vector<F>(2 * n, F(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = F(1);
  }
  auto piv = row_reduce(aug);
  require(piv.size() == n && piv.back() == n - 1, ErrorKind::InvalidArgument, "singular matrix");
  Matrix<F> inv(n, std::vector<F>(n, F(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

/// Sylvester resultant of a and b taken with declared formal degrees.
template <class F>
F sylvester_resultant(const Poly<F>& a, int deg_a, const Poly<F>& b, int deg_b) {
  require(a.degree() <= deg_a && b.degree() <= deg_b, ErrorKind::InvalidArgument,
          "sylvester_resultant: declared degree too small");
  const size_t n = static_cast<size_t>(deg_a + deg_b);
  if (n == 0) return F(1);
  Matrix<F> m(n, std::vector<F>(n, F(0)));
  for (int r = 0; r < deg_b; ++r)
    for (int i = 0; i <= deg_a; ++i)
      m[static_cast<size_t>(r)][static_cast<size_t>(r + i)] = a.coeff(deg_a - i);
  for (int r = 0; r < deg_a; ++r)
    for (int i = 0; i <= deg_b; ++i)
      m[static_cast<size_t>(deg_b + r)][static_cast<size_t>(r + i)] = b.coeff(deg_b - i);
  return determinant(std::move(m));
}

}  // namespace biconic
