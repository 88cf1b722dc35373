#pragma once

// Dense exact linear algebra, in two flavors:
//   * FMat: matrices of finite-field element encodings, operated on through
//     a Field view (Gaussian elimination with deterministic pivoting).
//   * DMat<T>: matrices over an exact division ring type T (Rat, Cyclotomic,
//     Scalar) supporting T(0), T(1), +, -, *, /, ==.
// Pivoting is always "first nonzero in canonical order" so every result is
// reproducible.

#include <vector>

#include "hp1/error.hpp"
#include "hp1/fq.hpp"

namespace hp1 {

// --------------------------- finite field side ----------------------------

using FMat = std::vector<std::vector<unsigned>>;

inline FMat fmat_zero(size_t r, size_t c) {
  return FMat(r, std::vector<unsigned>(c, 0));
}

inline FMat fmat_identity(size_t n) {
  FMat m = fmat_zero(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline FMat fmat_transpose(const FMat& a) {
  if (a.empty()) return {};
  FMat r = fmat_zero(a[0].size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

inline FMat fmat_mul(const Field& F, const FMat& a, const FMat& b) {
  check(!a.empty() && !b.empty() && a[0].size() == b.size(),
        "matrix product shape mismatch");
  FMat r = fmat_zero(a.size(), b[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      unsigned aik = a[i][k];
      if (aik == 0) continue;
      for (size_t j = 0; j < b[0].size(); ++j)
        if (b[k][j]) r[i][j] = F.add(r[i][j], F.mul(aik, b[k][j]));
    }
  return r;
}

inline std::vector<unsigned> fmat_vec(const Field& F, const FMat& a,
                                      const std::vector<unsigned>& v) {
  check(!a.empty() && a[0].size() == v.size(), "matrix-vector shape mismatch");
  std::vector<unsigned> r(a.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j)
      if (a[i][j] && v[j]) r[i] = F.add(r[i], F.mul(a[i][j], v[j]));
  return r;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<size_t> fmat_rref(const Field& F, FMat& a) {
  std::vector<size_t> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size(), row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t sel = row;
    while (sel < rows && a[sel][col] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    unsigned inv = F.inv(a[row][col]);
    for (size_t j = col; j < cols; ++j) a[row][j] = F.mul(a[row][j], inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      unsigned f = a[i][col];
      for (size_t j = col; j < cols; ++j)
        a[i][j] = F.sub(a[i][j], F.mul(f, a[row][j]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline size_t fmat_rank(const Field& F, FMat a) { return fmat_rref(F, a).size(); }

// Basis of the right kernel {v : a v = 0}, as rows, in canonical order.
inline std::vector<std::vector<unsigned>> fmat_kernel(const Field& F, FMat a) {
  if (a.empty()) return {};
  size_t cols = a[0].size();
  auto pivots = fmat_rref(F, a);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<unsigned>> basis;
  for (size_t freec = 0; freec < cols; ++freec) {
    if (is_pivot[freec]) continue;
    std::vector<unsigned> v(cols, 0);
    v[freec] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = F.neg(a[r][freec]);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solve a x = b; returns false if inconsistent.  x gets the canonical
// solution with all free variables zero.
inline bool fmat_solve(const Field& F, FMat a, std::vector<unsigned> b,
                       std::vector<unsigned>& x) {
  check(a.size() == b.size(), "solve shape mismatch");
  size_t cols = a.empty() ? 0 : a[0].size();
  for (size_t i = 0; i < a.size(); ++i) a[i].push_back(b[i]);
  auto pivots = fmat_rref(F, a);
  x.assign(cols, 0);
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) return false;  // pivot in the constant column
    x[pivots[r]] = a[r][cols];
  }
  return true;
}

inline FMat fmat_inverse(const Field& F, const FMat& a) {
  size_t n = a.size();
  check(n > 0 && a[0].size() == n, "inverse needs a square matrix");
  FMat aug = a;
  for (size_t i = 0; i < n; ++i) {
    auto id = fmat_identity(n)[i];
    aug[i].insert(aug[i].end(), id.begin(), id.end());
  }
  auto pivots = fmat_rref(F, aug);
  check(pivots.size() == n && pivots.back() == n - 1, "matrix not invertible");
  FMat inv = fmat_zero(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

inline unsigned fmat_det(const Field& F, FMat a) {
  size_t n = a.size();
  check(n > 0 && a[0].size() == n, "determinant needs a square matrix");
  unsigned det = 1;
  for (size_t col = 0, row = 0; col < n; ++col, ++row) {
    size_t sel = row;
    while (sel < n && a[sel][col] == 0) ++sel;
    if (sel == n) return 0;
    if (sel != row) {
      std::swap(a[sel], a[row]);
      det = F.neg(det);
    }
    det = F.mul(det, a[row][col]);
    unsigned inv = F.inv(a[row][col]);
    for (size_t i = row + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      unsigned f = F.mul(a[i][col], inv);
      for (size_t j = col; j < n; ++j)
        a[i][j] = F.sub(a[i][j], F.mul(f, a[row][j]));
    }
  }
  return det;
}

// ------------------------- exact scalar-type side -------------------------

template <class T>
using DMat = std::vector<std::vector<T>>;

template <class T>
DMat<T> dmat_zero(size_t r, size_t c) {
  return DMat<T>(r, std::vector<T>(c, T(0)));
}

template <class T>
DMat<T> dmat_identity(size_t n) {
  DMat<T> m = dmat_zero<T>(n, n);
  for (size_t i = 0; i < n; ++i) m[i][i] = T(1);
  return m;
}

template <class T>
DMat<T> dmat_mul(const DMat<T>& a, const DMat<T>& b) {
  check(!a.empty() && !b.empty() && a[0].size() == b.size(),
        "matrix product shape mismatch");
  DMat<T> r = dmat_zero<T>(a.size(), b[0].size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k) {
      if (a[i][k] == T(0)) continue;
      for (size_t j = 0; j < b[0].size(); ++j) {
        if (b[k][j] == T(0)) continue;
        r[i][j] += a[i][k] * b[k][j];
      }
    }
  return r;
}

template <class T>
DMat<T> dmat_add(const DMat<T>& a, const DMat<T>& b) {
  check(a.size() == b.size() && (a.empty() || a[0].size() == b[0].size()),
        "matrix sum shape mismatch");
  DMat<T> r = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
  return r;
}

template <class T>
DMat<T> dmat_scale(const DMat<T>& a, const T& c) {
  DMat<T> r = a;
  for (auto& row : r)
    for (auto& x : row) x = x * c;
  return r;
}

template <class T>
std::vector<size_t> dmat_rref(DMat<T>& a) {
  std::vector<size_t> pivots;
  if (a.empty()) return pivots;
  size_t rows = a.size(), cols = a[0].size(), row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t sel = row;
    while (sel < rows && a[sel][col] == T(0)) ++sel;
    if (sel == rows) continue;
    std::swap(a[sel], a[row]);
    T inv = T(1) / a[row][col];
    for (size_t j = col; j < cols; ++j) a[row][j] = a[row][j] * inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == T(0)) continue;
      T f = a[i][col];
      for (size_t j = col; j < cols; ++j)
        a[i][j] = a[i][j] - f * a[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class T>
size_t dmat_rank(DMat<T> a) {
  return dmat_rref(a).size();
}

template <class T>
std::vector<std::vector<T>> dmat_kernel(DMat<T> a) {
  if (a.empty()) return {};
  size_t cols = a[0].size();
  auto pivots = dmat_rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (size_t freec = 0; freec < cols; ++freec) {
    if (is_pivot[freec]) continue;
    std::vector<T> v(cols, T(0));
    v[freec] = T(1);
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = T(0) - a[r][freec];
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
DMat<T> dmat_inverse(const DMat<T>& a) {
  size_t n = a.size();
  check(n > 0 && a[0].size() == n, "inverse needs a square matrix");
  DMat<T> aug = a;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i].push_back(i == j ? T(1) : T(0));
  }
  auto pivots = dmat_rref(aug);
  check(pivots.size() == n && pivots.back() == n - 1, "matrix not invertible");
  DMat<T> inv = dmat_zero<T>(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace hp1
