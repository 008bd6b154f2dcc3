#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

#include "qflag/rational.hpp"

namespace qflag {

// Small dense matrices over an exact field (Rat or CRat) or plain arithmetic
// types. Exact elimination routines (rank/solve/kernel/inverse) are only
// meaningful for the exact fields; float-path numerics go through Eigen.
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;  // row-major

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a((size_t)r * c, T(0)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  T& operator()(int i, int j) { return a[(size_t)i * cols + j]; }
  const T& operator()(int i, int j) const { return a[(size_t)i * cols + j]; }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  Mat transposed() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
};

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  assert(x.cols == y.rows);
  Mat<T> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const T& v = x(i, k);
      if (v == T(0)) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) = z(i, j) + v * y(k, j);
    }
  return z;
}

template <class T>
Mat<T> operator+(const Mat<T>& x, const Mat<T>& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  Mat<T> z(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
  return z;
}

template <class T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y) {
  assert(x.rows == y.rows && x.cols == y.cols);
  Mat<T> z(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
  return z;
}

template <class T>
Mat<T> operator*(const T& s, const Mat<T>& x) {
  Mat<T> z(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = s * x.a[i];
  return z;
}

template <class T>
std::vector<T> operator*(const Mat<T>& x, const std::vector<T>& v) {
  assert((int)v.size() == x.cols);
  std::vector<T> w(x.rows, T(0));
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      if (!(x(i, j) == T(0))) w[i] = w[i] + x(i, j) * v[j];
  return w;
}

template <class T>
Mat<T> kron(const Mat<T>& x, const Mat<T>& y) {
  Mat<T> z(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x(i, j) == T(0)) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          z(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
    }
  return z;
}

// Row-reduce in place over an exact field; returns pivot column list.
template <class T>
std::vector<int> row_reduce(Mat<T>& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (!(m(i, c) == T(0))) { p = i; break; }
    if (p < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    T inv = T(1) / m(r, c);
    for (int j = c; j < m.cols; ++j) m(r, j) = inv * m(r, j);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == T(0)) continue;
      T f = m(i, c);
      for (int j = c; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
int rank(Mat<T> m) {
  return (int)row_reduce(m).size();
}

// Solve M x = b exactly; nullopt when inconsistent. Underdetermined systems
// return the particular solution with free variables set to zero.
template <class T>
std::optional<std::vector<T>> solve(const Mat<T>& m, const std::vector<T>& b) {
  assert((int)b.size() == m.rows);
  Mat<T> aug(m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = b[i];
  }
  auto piv = row_reduce(aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<T> x(m.cols, T(0));
  for (size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug((int)k, m.cols);
  return x;
}

// Basis of the kernel of M (as columns of the returned matrix).
template <class T>
Mat<T> kernel(const Mat<T>& m) {
  Mat<T> red = m;
  auto piv = row_reduce(red);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : piv) is_piv[c] = true;
  int nfree = m.cols - (int)piv.size();
  Mat<T> ker(m.cols, nfree);
  int col = 0;
  for (int c = 0; c < m.cols; ++c) {
    if (is_piv[c]) continue;
    ker(c, col) = T(1);
    for (size_t k = 0; k < piv.size(); ++k) ker(piv[k], col) = -red((int)k, c);
    ++col;
  }
  return ker;
}

template <class T>
Mat<T> inverse(const Mat<T>& m) {
  assert(m.rows == m.cols);
  int n = m.rows;
  Mat<T> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  auto piv = row_reduce(aug);
  if ((int)piv.size() != n || piv.back() != n - 1) throw std::domain_error("singular matrix");
  Mat<T> inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

}  // namespace qflag
