#pragma once

// Polynomials and polynomial/Laurent matrices over a finite field view.
// Everything here is exact: polynomial matrices are never silently
// truncated, and Smith forms are computed by Euclidean elimination over the
// polynomial ring.  Truncated power-series inverses state their precision
// explicitly.

#include <cstdint>
#include <vector>

#include "hp1/error.hpp"
#include "hp1/fq.hpp"

namespace hp1 {

// Coefficients ascending; the zero polynomial is the empty vector.
using FPoly = std::vector<unsigned>;

inline void fpoly_trim(FPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline bool fpoly_is_zero(const FPoly& p) {
  for (unsigned c : p)
    if (c) return false;
  return true;
}

inline int fpoly_deg(const FPoly& p) {
  for (size_t i = p.size(); i-- > 0;)
    if (p[i]) return static_cast<int>(i);
  return -1;
}

inline int fpoly_val(const FPoly& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i]) return static_cast<int>(i);
  return -1;  // zero polynomial
}

inline FPoly fpoly_add(const Field& F, const FPoly& a, const FPoly& b) {
  FPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  fpoly_trim(r);
  return r;
}

inline FPoly fpoly_sub(const Field& F, const FPoly& a, const FPoly& b) {
  FPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  fpoly_trim(r);
  return r;
}

inline FPoly fpoly_neg(const Field& F, const FPoly& a) {
  FPoly r = a;
  for (unsigned& c : r) c = F.neg(c);
  return r;
}

inline FPoly fpoly_mul(const Field& F, const FPoly& a, const FPoly& b) {
  if (fpoly_is_zero(a) || fpoly_is_zero(b)) return {};
  FPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j]) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  fpoly_trim(r);
  return r;
}

inline FPoly fpoly_scale(const Field& F, unsigned c, const FPoly& a) {
  if (c == 0) return {};
  FPoly r = a;
  for (unsigned& x : r) x = F.mul(c, x);
  return r;
}

// a * t^s (s >= 0)
inline FPoly fpoly_shift(const FPoly& a, unsigned s) {
  if (fpoly_is_zero(a)) return {};
  FPoly r(a.size() + s, 0);
  for (size_t i = 0; i < a.size(); ++i) r[i + s] = a[i];
  return r;
}

inline unsigned fpoly_coeff(const FPoly& p, size_t i) {
  return i < p.size() ? p[i] : 0;
}

inline unsigned fpoly_eval(const Field& F, const FPoly& p, unsigned x) {
  unsigned acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = F.add(F.mul(acc, x), p[i]);
  return acc;
}

inline std::pair<FPoly, FPoly> fpoly_divmod(const Field& F, FPoly num,
                                            const FPoly& den) {
  check(!fpoly_is_zero(den), "polynomial division by zero");
  FPoly d = den;
  fpoly_trim(d);
  fpoly_trim(num);
  FPoly quo;
  if (num.size() >= d.size()) quo.assign(num.size() - d.size() + 1, 0);
  unsigned linv = F.inv(d.back());
  while (num.size() >= d.size()) {
    unsigned c = F.mul(num.back(), linv);
    size_t shift = num.size() - d.size();
    quo[shift] = c;
    for (size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i]) num[shift + i] = F.sub(num[shift + i], F.mul(c, d[i]));
    num.pop_back();
    fpoly_trim(num);
  }
  return {std::move(quo), std::move(num)};
}

// Inverse of a unit power series (p(0) != 0) modulo t^prec.
inline FPoly fpoly_series_inverse(const Field& F, const FPoly& p,
                                  unsigned prec) {
  check(!p.empty() && p[0] != 0, "series inversion needs a unit");
  FPoly r(prec, 0);
  unsigned c0 = F.inv(p[0]);
  r[0] = c0;
  for (unsigned n = 1; n < prec; ++n) {
    unsigned s = 0;
    for (unsigned k = 1; k <= n; ++k)
      if (fpoly_coeff(p, k) && r[n - k])
        s = F.add(s, F.mul(fpoly_coeff(p, k), r[n - k]));
    r[n] = F.neg(F.mul(c0, s));
  }
  fpoly_trim(r);
  return r;
}

inline FPoly fpoly_trunc(const FPoly& p, unsigned prec) {
  FPoly r(p.begin(), p.begin() + std::min<size_t>(p.size(), prec));
  fpoly_trim(r);
  return r;
}

// ------------------------- polynomial matrices ----------------------------

// Square matrix of polynomials over the field, row-major.
struct PolyMat {
  unsigned n = 0;
  std::vector<FPoly> e;  // n*n entries

  FPoly& at(unsigned i, unsigned j) { return e[i * n + j]; }
  const FPoly& at(unsigned i, unsigned j) const { return e[i * n + j]; }
};

inline PolyMat pmat_zero(unsigned n) {
  PolyMat m;
  m.n = n;
  m.e.assign(size_t(n) * n, {});
  return m;
}

inline PolyMat pmat_identity(unsigned n) {
  PolyMat m = pmat_zero(n);
  for (unsigned i = 0; i < n; ++i) m.at(i, i) = {1};
  return m;
}

// diag(t^{mu_1}, ..., t^{mu_n}), mu_i >= 0.
inline PolyMat pmat_diag_tpow(const std::vector<int>& mu) {
  PolyMat m = pmat_zero(static_cast<unsigned>(mu.size()));
  for (unsigned i = 0; i < m.n; ++i) {
    check(mu[i] >= 0, "diagonal power must be nonnegative");
    m.at(i, i) = fpoly_shift({1}, static_cast<unsigned>(mu[i]));
  }
  return m;
}

inline PolyMat pmat_from_const(const Field& F, const std::vector<std::vector<unsigned>>& a) {
  PolyMat m = pmat_zero(static_cast<unsigned>(a.size()));
  (void)F;
  for (unsigned i = 0; i < m.n; ++i)
    for (unsigned j = 0; j < m.n; ++j)
      if (a[i][j]) m.at(i, j) = {a[i][j]};
  return m;
}

inline PolyMat pmat_mul(const Field& F, const PolyMat& a, const PolyMat& b) {
  check(a.n == b.n, "matrix product shape mismatch");
  PolyMat r = pmat_zero(a.n);
  for (unsigned i = 0; i < a.n; ++i)
    for (unsigned k = 0; k < a.n; ++k) {
      if (fpoly_is_zero(a.at(i, k))) continue;
      for (unsigned j = 0; j < a.n; ++j) {
        if (fpoly_is_zero(b.at(k, j))) continue;
        r.at(i, j) =
            fpoly_add(F, r.at(i, j), fpoly_mul(F, a.at(i, k), b.at(k, j)));
      }
    }
  return r;
}

inline PolyMat pmat_add(const Field& F, const PolyMat& a, const PolyMat& b) {
  check(a.n == b.n, "matrix sum shape mismatch");
  PolyMat r = pmat_zero(a.n);
  for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = fpoly_add(F, a.e[i], b.e[i]);
  return r;
}

inline bool pmat_equal(const PolyMat& a, const PolyMat& b) {
  if (a.n != b.n) return false;
  for (size_t i = 0; i < a.e.size(); ++i) {
    FPoly x = a.e[i], y = b.e[i];
    fpoly_trim(x);
    fpoly_trim(y);
    if (x != y) return false;
  }
  return true;
}

inline PolyMat pmat_transpose(const PolyMat& a) {
  PolyMat r = pmat_zero(a.n);
  for (unsigned i = 0; i < a.n; ++i)
    for (unsigned j = 0; j < a.n; ++j) r.at(i, j) = a.at(j, i);
  return r;
}

inline FPoly pmat_det(const Field& F, const PolyMat& a) {
  // cofactor expansion; fine for the small ranks used here
  if (a.n == 0) return {1};
  if (a.n == 1) return a.at(0, 0);
  FPoly det;
  for (unsigned j = 0; j < a.n; ++j) {
    if (fpoly_is_zero(a.at(0, j))) continue;
    PolyMat sub = pmat_zero(a.n - 1);
    for (unsigned r = 1; r < a.n; ++r) {
      unsigned cc = 0;
      for (unsigned c = 0; c < a.n; ++c) {
        if (c == j) continue;
        sub.at(r - 1, cc++) = a.at(r, c);
      }
    }
    FPoly term = fpoly_mul(F, a.at(0, j), pmat_det(F, sub));
    det = (j % 2 == 0) ? fpoly_add(F, det, term) : fpoly_sub(F, det, term);
  }
  return det;
}

inline PolyMat pmat_adjugate(const Field& F, const PolyMat& a) {
  PolyMat adj = pmat_zero(a.n);
  for (unsigned i = 0; i < a.n; ++i)
    for (unsigned j = 0; j < a.n; ++j) {
      PolyMat sub = pmat_zero(a.n - 1);
      unsigned rr = 0;
      for (unsigned r = 0; r < a.n; ++r) {
        if (r == i) continue;
        unsigned cc = 0;
        for (unsigned c = 0; c < a.n; ++c) {
          if (c == j) continue;
          sub.at(rr, cc++) = a.at(r, c);
        }
        ++rr;
      }
      FPoly cof = pmat_det(F, sub);
      if ((i + j) % 2) cof = fpoly_neg(F, cof);
      adj.at(j, i) = cof;  // transpose of the cofactor matrix
    }
  return adj;
}

// Exact Smith normal form over the polynomial ring.  Returns the elementary
// divisor polynomials d_1 | d_2 | ... | d_n (monic; zero matrix rows give
// zero divisors, which we reject since all inputs here are invertible over
// the Laurent field).
inline std::vector<FPoly> pmat_smith(const Field& F, PolyMat a) {
  unsigned n = a.n;
  std::vector<FPoly> divisors;
  for (unsigned top = 0; top < n; ++top) {
    // find the nonzero entry of least degree in the working block
    for (;;) {
      int best = -1;
      unsigned bi = 0, bj = 0;
      for (unsigned i = top; i < n; ++i)
        for (unsigned j = top; j < n; ++j) {
          int d = fpoly_deg(a.at(i, j));
          if (d < 0) continue;
          if (best < 0 || d < best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      check(best >= 0, "matrix is singular; no Smith form over the field of fractions");
      if (bi != top)
        for (unsigned j = 0; j < n; ++j) std::swap(a.at(bi, j), a.at(top, j));
      if (bj != top)
        for (unsigned i = 0; i < n; ++i) std::swap(a.at(i, bj), a.at(i, top));

      // try to clear the pivot row and column with exact division steps
      bool disturbed = false;
      for (unsigned i = top + 1; i < n; ++i) {
        if (fpoly_is_zero(a.at(i, top))) continue;
        auto [q, r] = fpoly_divmod(F, a.at(i, top), a.at(top, top));
        for (unsigned j = top; j < n; ++j)
          a.at(i, j) = fpoly_sub(F, a.at(i, j), fpoly_mul(F, q, a.at(top, j)));
        if (!fpoly_is_zero(r)) disturbed = true;  // smaller remainder appeared
      }
      for (unsigned j = top + 1; j < n; ++j) {
        if (fpoly_is_zero(a.at(top, j))) continue;
        auto [q, r] = fpoly_divmod(F, a.at(top, j), a.at(top, top));
        for (unsigned i = top; i < n; ++i)
          a.at(i, j) = fpoly_sub(F, a.at(i, j), fpoly_mul(F, q, a.at(i, top)));
        if (!fpoly_is_zero(r)) disturbed = true;
      }
      if (disturbed) continue;

      // pivot must divide every remaining entry; if not, absorb and retry
      bool divides_all = true;
      for (unsigned i = top + 1; i < n && divides_all; ++i)
        for (unsigned j = top + 1; j < n && divides_all; ++j) {
          auto [q, r] = fpoly_divmod(F, a.at(i, j), a.at(top, top));
          (void)q;
          if (!fpoly_is_zero(r)) {
            for (unsigned c = 0; c < n; ++c)
              a.at(top, c) = fpoly_add(F, a.at(top, c), a.at(i, c));
            divides_all = false;
          }
        }
      if (!divides_all) continue;
      break;
    }
    FPoly d = a.at(top, top);
    unsigned lead = d.empty() ? 1 : F.inv(d.back());
    d = fpoly_scale(F, lead, d);
    divisors.push_back(std::move(d));
  }
  return divisors;
}

// Elementary divisor exponents for a matrix whose Smith divisors are
// monomials t^k, reported as a weakly decreasing tuple (a dominant
// coweight).  Errors out if any divisor is non-monomial.
inline std::vector<int> pmat_divisor_type(const Field& F, const PolyMat& a) {
  auto divs = pmat_smith(F, a);
  std::vector<int> type;
  for (const FPoly& d : divs) {
    int v = fpoly_val(d);
    check(v >= 0 && fpoly_deg(d) == v,
          "elementary divisor is not a monomial power");
    type.push_back(v);
  }
  std::reverse(type.begin(), type.end());  // weakly decreasing
  return type;
}

// ----------------------------- Laurent matrices ----------------------------

// A matrix of Laurent polynomials: entries e[i*n+j] store coefficients of
// t^{vmin}, t^{vmin+1}, ... (ascending from the common valuation floor).
struct LaurentMat {
  unsigned n = 0;
  int vmin = 0;
  std::vector<FPoly> e;

  FPoly& at(unsigned i, unsigned j) { return e[i * n + j]; }
  const FPoly& at(unsigned i, unsigned j) const { return e[i * n + j]; }
};

inline LaurentMat lmat_from_poly(const PolyMat& p) {
  LaurentMat m;
  m.n = p.n;
  m.vmin = 0;
  m.e = p.e;
  return m;
}

// Inverse of a polynomial matrix with det = unit * t^v, exact up to (and
// excluding) t-degree `prec` in each entry.
inline LaurentMat lmat_inverse_trunc(const Field& F, const PolyMat& a,
                                     int prec) {
  FPoly det = pmat_det(F, a);
  int v = fpoly_val(det);
  check(v >= 0, "matrix is singular over the Laurent field");
  FPoly unit(det.begin() + v, det.end());
  PolyMat adj = pmat_adjugate(F, a);
  // a^{-1} = adj / det = adj * t^{-v} * unit^{-1}
  int need = prec + v;  // adjugate entries have valuation >= 0
  LaurentMat r;
  r.n = a.n;
  r.vmin = -v;
  r.e.resize(size_t(a.n) * a.n);
  if (need <= 0) return r;  // everything truncates away
  FPoly uinv = fpoly_series_inverse(F, unit, static_cast<unsigned>(need));
  for (size_t i = 0; i < r.e.size(); ++i)
    r.e[i] = fpoly_trunc(fpoly_mul(F, adj.e[i], uinv),
                         static_cast<unsigned>(need));
  return r;
}

// ------------------------- digit packing for BFS --------------------------

// Pack a polynomial matrix mod t^M over a field of size Q into a single
// 64-bit key (base-Q positional code, row-major, degree-major within entry).
inline uint64_t pmat_key(const PolyMat& a, unsigned M, unsigned Q) {
  uint64_t key = 0;
  for (size_t idx = a.e.size(); idx-- > 0;) {
    const FPoly& p = a.e[idx];
    for (unsigned d = M; d-- > 0;) {
      key = key * Q + fpoly_coeff(p, d);
    }
  }
  return key;
}

inline PolyMat pmat_unkey(uint64_t key, unsigned n, unsigned M, unsigned Q) {
  PolyMat a = pmat_zero(n);
  for (size_t idx = 0; idx < a.e.size(); ++idx) {
    FPoly p(M, 0);
    for (unsigned d = 0; d < M; ++d) {
      p[d] = static_cast<unsigned>(key % Q);
      key /= Q;
    }
    fpoly_trim(p);
    a.e[idx] = std::move(p);
  }
  return a;
}

inline bool pmat_key_fits(unsigned n, unsigned M, unsigned Q) {
  long double cap = 1.0L;
  for (unsigned i = 0; i < n * n * M; ++i) {
    cap *= Q;
    if (cap > 1.8e19L) return false;
  }
  return true;
}

inline PolyMat pmat_trunc(const PolyMat& a, unsigned M) {
  PolyMat r = a;
  for (auto& p : r.e) p = fpoly_trunc(p, M);
  return r;
}

}  // namespace hp1
