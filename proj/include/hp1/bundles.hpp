#pragma once

// Rank-n vector bundles on the projective line carrying trivializations at
// the two marked points 0 and infinity.  A bundle is presented by an
// invertible Laurent-polynomial transition matrix g(z); two presentations
// describe the same object exactly when g' = b g a where a is polynomial
// with a(0) = 1 and b is polynomial in 1/z with b(infinity) = 1.
//
// This header provides
//   * splitting_of       the exact factorization  g = minus . z^lam . plus
//                        with minus in GL(k[1/z]) and plus in GL(k[z]),
//   * BundleModel        the point space of each stratum as a twisted
//                        product of frame pairs, modifications at either
//                        marked point by loop group double cosets, the
//                        inversion pullback, and the induced involution of
//                        the double coset algebra,
//   * raw_window_census  a brute-force class count over all bounded-degree
//                        polynomial presentations, used as an independent
//                        cross-check on the stratum censuses.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hp1/loophecke.hpp"

namespace hp1 {

inline LMat lmat_transpose(const LMat& a) {
  return LMat{a.v, pmat_transpose(a.p)};
}

// Substitute z -> z0 / z for a nonzero scalar z0: the coefficient of z^d
// moves to degree -d and is scaled by z0^d.
inline LMat lmat_subst_inv(const Field& F, const LMat& a, unsigned z0) {
  check(z0 != 0, "substitution needs a nonzero scalar");
  const unsigned n = a.size();
  if (lmat_is_zero(a)) return lmat_normalize(a);
  const int dmax = lmat_max_degree(a);
  LMat r;
  r.v = -dmax;
  r.p = pmat_zero(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      FPoly e(static_cast<size_t>(dmax - a.v) + 1, 0);
      for (int d = a.v; d <= dmax; ++d) {
        unsigned c = lmat_digit(a, i, j, d);
        if (c) e[static_cast<size_t>(dmax - d)] = F.mul(c, F.pow(z0, d));
      }
      fpoly_trim(e);
      r.p.at(i, j) = e;
    }
  return lmat_normalize(r);
}

namespace detail {

// Incremental reduced row echelon insertion.  Returns true and extends the
// basis when v is independent of the rows already stored.
inline bool rref_insert(const Field& F, std::vector<std::vector<unsigned>>& rows,
                        std::vector<unsigned> v) {
  for (;;) {
    size_t p = v.size();
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i]) {
        p = i;
        break;
      }
    if (p == v.size()) return false;
    bool reduced = false;
    for (const auto& r : rows) {
      size_t rp = 0;
      while (rp < r.size() && r[rp] == 0) ++rp;
      if (rp == p) {
        unsigned f = v[p];
        for (size_t j = p; j < v.size(); ++j)
          v[j] = F.sub(v[j], F.mul(f, r[j]));
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      unsigned inv = F.inv(v[p]);
      for (size_t j = p; j < v.size(); ++j) v[j] = F.mul(inv, v[j]);
      for (auto& r : rows) {
        if (r[p] == 0) continue;
        unsigned f = r[p];
        for (size_t j = p; j < v.size(); ++j)
          r[j] = F.sub(r[j], F.mul(f, v[j]));
      }
      rows.push_back(std::move(v));
      return true;
    }
  }
}

struct SplitCore {
  std::vector<int> lam;
  LMat plus, minus;
};

// Factor h = plus . z^lam . minus with plus in GL(k[z]) and minus in
// GL(k[1/z]).  For each level d, the space of columns w in k[1/z]^n with
// h w in z^d k[z]^n is cut out by exact digit conditions; its image under
// "leading digit of h w at z^d" jumps exactly at the entries of the
// splitting type.  Greedily collecting columns with independent leading
// digits down the levels yields W with h W = plus . z^lam column by
// column, and the two factors are read off exactly.
inline SplitCore adapted_split_(const Field& F, const LMat& hin) {
  LMat h = lmat_normalize(hin);
  const unsigned n = h.size();
  check(n > 0, "splitting needs a nonempty matrix");
  LMat hinv = lmat_inverse(F, h);  // also certifies a unit determinant
  FPoly det = pmat_det(F, h.p);
  const int kdet = fpoly_val(det) + static_cast<int>(n) * h.v;
  const int dmax = lmat_max_degree(h);
  const int dmin = kdet - static_cast<int>(n - 1) * dmax;
  const int gv = h.v;
  const int iv = lmat_min_valuation(hinv);

  std::vector<int> lam;
  std::vector<std::vector<unsigned>> cols;
  std::vector<int> lov;
  std::vector<std::vector<unsigned>> red;

  for (int d = dmax; d >= dmin && lam.size() < n; --d) {
    const int lo = d + iv;
    if (lo > 0) continue;
    const unsigned unknowns = static_cast<unsigned>(1 - lo) * n;
    const int clo = gv + lo;
    std::vector<std::vector<unsigned>> basis;
    if (clo >= d) {
      basis.assign(unknowns, std::vector<unsigned>(unknowns, 0));
      for (unsigned t = 0; t < unknowns; ++t) basis[t][t] = 1;
    } else {
      FMat con = fmat_zero(static_cast<size_t>(d - clo) * n, unknowns);
      for (int e = clo; e < d; ++e)
        for (unsigned r = 0; r < n; ++r) {
          auto& row = con[static_cast<size_t>(e - clo) * n + r];
          for (int f = lo; f <= 0; ++f)
            for (unsigned i = 0; i < n; ++i)
              row[static_cast<size_t>(f - lo) * n + i] =
                  lmat_digit(h, r, i, e - f);
        }
      basis = fmat_kernel(F, con);
    }
    for (const auto& w : basis) {
      if (lam.size() == n) break;
      std::vector<unsigned> sig(n, 0);
      for (unsigned r = 0; r < n; ++r) {
        unsigned acc = 0;
        for (int f = lo; f <= 0; ++f)
          for (unsigned i = 0; i < n; ++i)
            acc = F.add(acc, F.mul(lmat_digit(h, r, i, d - f),
                                   w[static_cast<size_t>(f - lo) * n + i]));
        sig[r] = acc;
      }
      if (!rref_insert(F, red, sig)) continue;
      lam.push_back(d);
      cols.push_back(w);
      lov.push_back(lo);
    }
  }
  check(lam.size() == n, "splitting frame is incomplete");
  int tot = 0;
  for (int x : lam) tot += x;
  check(tot == kdet, "splitting type misses the determinant valuation");

  int wv = 0;
  for (int lo : lov) wv = std::min(wv, lo);
  PolyMat wp = pmat_zero(n);
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i) {
      FPoly e(static_cast<size_t>(1 - wv), 0);
      for (int f = lov[j]; f <= 0; ++f)
        e[static_cast<size_t>(f - wv)] =
            cols[j][static_cast<size_t>(f - lov[j]) * n + i];
      fpoly_trim(e);
      wp.at(i, j) = e;
    }
  LMat W = lmat_normalize(LMat{wv, wp});

  SplitCore out;
  out.lam = lam;
  std::vector<int> neg = lam;
  for (int& x : neg) x = -x;
  out.plus = lmat_normalize(lmat_mul(F, lmat_mul(F, h, W), lmat_tpow(neg)));
  out.minus = lmat_inverse(F, W);
  return out;
}

}  // namespace detail

// Exact two-sided splitting g = minus . z^lam . plus of an invertible
// Laurent-polynomial matrix, certified by re-multiplication.  The type lam
// is weakly decreasing; g0 and ginf are the invertible values of the two
// factors at the marked points.
struct Splitting {
  std::vector<int> lam;
  LMat minus, plus;
  FMat ginf, g0;
};

inline Splitting splitting_of(const Field& F, const LMat& g) {
  detail::SplitCore core = detail::adapted_split_(F, lmat_transpose(g));
  Splitting s;
  s.lam = core.lam;
  s.minus = lmat_transpose(core.minus);
  s.plus = lmat_transpose(core.plus);
  const unsigned n = g.size();
  check(coweight_dominant(s.lam), "splitting type must be weakly decreasing");
  check(s.plus.v >= 0, "polynomial factor has a pole at zero");
  check(lmat_max_degree(s.minus) <= 0,
        "opposite factor has a pole at infinity");
  LMat prod =
      lmat_mul(F, lmat_mul(F, s.minus, lmat_tpow(s.lam)), s.plus);
  check(lmat_equal(prod, g), "splitting failed to reproduce the matrix");
  s.g0 = fmat_zero(n, n);
  s.ginf = fmat_zero(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      s.g0[i][j] = lmat_digit(s.plus, i, j, 0);
      s.ginf[i][j] = lmat_digit(s.minus, i, j, 0);
    }
  fmat_inverse(F, s.g0);    // hard checks: both frame values are invertible
  fmat_inverse(F, s.ginf);
  return s;
}

// Basis label of the bundle point space: a stratum label together with a
// point of its twisted product of frame pairs.
struct BundleKey {
  std::vector<int> lam;
  unsigned pt = 0;

  bool operator<(const BundleKey& o) const {
    if (lam != o.lam) return lam < o.lam;
    return pt < o.pt;
  }
  bool operator==(const BundleKey& o) const {
    return lam == o.lam && pt == o.pt;
  }
};

// A finitely supported function on bundle points with exact coefficients.
struct VElement {
  std::map<BundleKey, Scalar> c;

  void add_to(const BundleKey& k, const Scalar& v) {
    auto it = c.find(k);
    if (it == c.end()) {
      if (!v.is_zero()) c.emplace(k, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) c.erase(it);
  }
  Scalar get(const BundleKey& k) const {
    auto it = c.find(k);
    return it == c.end() ? Scalar() : it->second;
  }
  bool operator==(const VElement& o) const { return c == o.c; }
};

// Bundles with trivializations at 0 and infinity, stratified by splitting
// type.  The points of the stratum of type lam are the orbits of frame
// pairs under the residual ambiguity of the splitting, which matches the
// same-sign twisted product of the parabolic datum of lam: storing
//   ( transpose-inverse of ginf , transpose of g0 )
// turns the ambiguity into right multiplication by (U x U) . diag(M).
class BundleModel {
 public:
  BundleModel(Field F, unsigned N, GroupKind kind, unsigned marked = 1)
      : F_(F), N_(N), kind_(kind), Gk_(F, N, kind), z0_(marked) {
    check(z0_ != 0, "the marked point must be a nonzero scalar");
  }

  const Field& field() const { return F_; }
  unsigned rank() const { return N_; }
  GroupKind kind() const { return kind_; }
  const Group& finite_group() const { return Gk_; }
  unsigned marked_point() const { return z0_; }

  struct Stratum {
    std::vector<int> lam;
    ParabolicDatum pd;
    TwistedProduct tp;
  };

  // For PGL the type is only defined up to a common shift; normalize so
  // the last entry vanishes.
  std::vector<int> stratum_label(const std::vector<int>& lam) const {
    std::vector<int> out = lam;
    if (kind_ == GroupKind::PGL) {
      int m = out.back();
      for (int& x : out) x -= m;
    }
    return out;
  }

  const Stratum& stratum(const std::vector<int>& lam_in) {
    std::vector<int> lam = stratum_label(lam_in);
    check(lam.size() == N_, "stratum label has the wrong rank");
    check(coweight_dominant(lam), "stratum label must be weakly decreasing");
    auto it = strata_.find(lam);
    if (it != strata_.end()) return it->second;
    Stratum& st = strata_[lam];  // node stays put; tp may point into it
    st.lam = lam;
    st.pd = parabolic_datum(Gk_, lam);
    st.tp = twisted_product(st.pd, true);
    return st;
  }

  BundleKey point_of(const LMat& g) {
    check(g.size() == N_, "presentation has the wrong rank");
    Splitting s = splitting_of(F_, g);
    std::vector<int> lam = stratum_label(s.lam);
    const Stratum& st = stratum(lam);
    unsigned a =
        Gk_.lookup(Group::flatten(fmat_inverse(F_, fmat_transpose(s.ginf))));
    unsigned b = Gk_.lookup(Group::flatten(fmat_transpose(s.g0)));
    return BundleKey{lam, st.tp.point(a, b)};
  }

  int degree_of(const BundleKey& k) const {
    int s = 0;
    for (int x : k.lam) s += x;
    if (kind_ == GroupKind::PGL)
      s = ((s % static_cast<int>(N_)) + static_cast<int>(N_)) %
          static_cast<int>(N_);
    return s;
  }

  // A presentation whose splitting has constant factors on the stored
  // canonical frame pair.
  LMat presentation_of(const BundleKey& k) {
    const Stratum& st = stratum(k.lam);
    auto [r1, r2] = st.tp.reps[k.pt];
    FMat minus0 = fmat_transpose(fmat_inverse(F_, Gk_.mat(r1)));
    FMat plus0 = fmat_transpose(Gk_.mat(r2));
    return lmat_mul(F_, lmat_mul(F_, lmat_const(F_, minus0), lmat_tpow(k.lam)),
                    lmat_const(F_, plus0));
  }

  BundleKey base_point() { return point_of(lmat_one(N_)); }

  // Modification of one bundle point by one double coset: the sum over its
  // right cosets of the re-split presentation.  Side 0 multiplies on the
  // right by the representative in z; side infinity multiplies on the left
  // by the inverse of the representative in 1/z.
  VElement act_coset(LoopModel& A, const HeckeKey& hk, const BundleKey& bk,
                     bool at_infinity) {
    check(A.rank() == N_ && A.kind() == kind_ &&
              A.field().size() == F_.size(),
          "incompatible double coset model");
    const auto& st = A.stratum(hk.mu);
    LMat g = presentation_of(bk);
    VElement out;
    for (unsigned rcid : st.dc_members[hk.idx]) {
      const LMat& x = st.rc_mat[rcid];
      LMat h = at_infinity
                   ? lmat_mul(F_, lmat_inverse(F_, lmat_subst_inv(F_, x, 1)), g)
                   : lmat_mul(F_, g, x);
      out.add_to(point_of(h), Scalar(1L));
    }
    return out;
  }

  VElement act(LoopModel& A, const HeckeElement& a, const VElement& v,
               bool at_infinity = false) {
    VElement out;
    for (const auto& [hk, ca] : a.c)
      for (const auto& [bk, cv] : v.c) {
        VElement w = act_coset(A, hk, bk, at_infinity);
        for (const auto& [k2, c2] : w.c) out.add_to(k2, ca * cv * c2);
      }
    return out;
  }

  // Pullback along the inversion through the marked point z0: substitute
  // z -> z0/z and invert.  Strata are preserved.
  VElement inv_star(const VElement& v) {
    VElement out;
    for (const auto& [k, cv] : v.c) {
      LMat g = presentation_of(k);
      out.add_to(point_of(lmat_inverse(F_, lmat_subst_inv(F_, g, z0_))), cv);
    }
    return out;
  }

  // Joint bases of the double coset algebra and the bundle points over all
  // strata inside the closed window below lambda.
  struct WindowBases {
    std::vector<HeckeKey> akeys;
    std::vector<BundleKey> vkeys;
    std::map<HeckeKey, unsigned> aindex;
    std::map<BundleKey, unsigned> vindex;
  };

  const WindowBases& bases(LoopModel& A, const std::vector<int>& window) {
    auto it = bases_.find(window);
    if (it != bases_.end()) return it->second;
    WindowBases B;
    for (const auto& mu : A.window_strata(window)) {
      unsigned dcs = A.census(mu);
      for (unsigned d = 0; d < dcs; ++d) B.akeys.push_back(HeckeKey{mu, d});
      const Stratum& st = stratum(mu);
      for (unsigned p = 0; p < st.tp.size(); ++p)
        B.vkeys.push_back(BundleKey{mu, p});
    }
    for (unsigned i = 0; i < B.akeys.size(); ++i) B.aindex[B.akeys[i]] = i;
    for (unsigned i = 0; i < B.vkeys.size(); ++i) B.vindex[B.vkeys[i]] = i;
    return bases_.emplace(window, std::move(B)).first->second;
  }

  // Matrix of a ->  a acting on the base point, columns over the double
  // coset basis of the window, rows over the bundle points.
  const DMat<Scalar>& act_matrix(LoopModel& A, const std::vector<int>& window,
                                 bool at_infinity) {
    auto key = std::make_pair(window, at_infinity);
    auto it = mats_.find(key);
    if (it != mats_.end()) return it->second;
    const WindowBases& B = bases(A, window);
    DMat<Scalar> m = dmat_zero<Scalar>(B.vkeys.size(), B.akeys.size());
    BundleKey base = base_point();
    for (unsigned j = 0; j < B.akeys.size(); ++j) {
      VElement col = act_coset(A, B.akeys[j], base, at_infinity);
      for (const auto& [bk, cv] : col.c) {
        auto f = B.vindex.find(bk);
        check(f != B.vindex.end(), "action leaves the declared window");
        m[f->second][j] = cv;
      }
    }
    return mats_.emplace(std::move(key), std::move(m)).first->second;
  }

  const DMat<Scalar>& act_matrix_inverse(LoopModel& A,
                                         const std::vector<int>& window,
                                         bool at_infinity) {
    auto key = std::make_pair(window, at_infinity);
    auto it = invs_.find(key);
    if (it != invs_.end()) return it->second;
    DMat<Scalar> inv = dmat_inverse(act_matrix(A, window, at_infinity));
    return invs_.emplace(std::move(key), std::move(inv)).first->second;
  }

  // The involution of the double coset algebra determined by
  //   involution(a) acting at zero on the base point
  //     = inv_star( a acting at zero on the base point ).
  // Given that the two actions commute and that the action matrix is
  // invertible on the window, this map is involutive for any marked
  // point and anti-multiplicative for the symmetric marked point 1.
  HeckeElement involution(LoopModel& A, const std::vector<int>& window,
                          const HeckeElement& a) {
    const WindowBases& B = bases(A, window);
    VElement d0;
    d0.add_to(base_point(), Scalar(1L));
    VElement w = inv_star(act(A, a, d0, false));
    const DMat<Scalar>& Minv = act_matrix_inverse(A, window, false);
    std::vector<Scalar> rhs(B.vkeys.size(), Scalar());
    for (const auto& [bk, cv] : w.c) {
      auto f = B.vindex.find(bk);
      check(f != B.vindex.end(), "involution image leaves the window");
      rhs[f->second] = cv;
    }
    HeckeElement out;
    for (unsigned i = 0; i < B.akeys.size(); ++i) {
      Scalar acc;
      for (unsigned j = 0; j < rhs.size(); ++j) {
        if (rhs[j].is_zero()) continue;
        acc = acc + Minv[i][j] * rhs[j];
      }
      if (!acc.is_zero()) out.c.emplace(B.akeys[i], acc);
    }
    return out;
  }

 private:
  Field F_;
  unsigned N_;
  GroupKind kind_;
  Group Gk_;
  unsigned z0_;
  std::map<std::vector<int>, Stratum> strata_;
  std::map<std::vector<int>, WindowBases> bases_;
  std::map<std::pair<std::vector<int>, bool>, DMat<Scalar>> mats_;
  std::map<std::pair<std::vector<int>, bool>, DMat<Scalar>> invs_;
};

// Brute-force census: enumerate all 2x2 polynomial presentations with
// entry degrees at most D and unit monomial determinant, merge them by
// breadth-first closure under the level-preserving moves that stay inside
// the degree window,
//     g  ->  g (1 + z^d v)     and     g  ->  (1 + z^-d v) g
// over nonzero nilpotent constant matrices v and 1 <= d <= D, and tally
// the classes by splitting type.  Types are computed from level-space
// dimension jumps only, independently of the canonical machinery above.
// If a class has presentations in the window that the window moves do not
// connect, the tally overcounts and the caller's comparison fails loudly.
inline std::map<std::vector<int>, uint64_t> raw_window_census(const Field& F,
                                                              unsigned D) {
  const unsigned n = 2;
  const unsigned q = static_cast<unsigned>(F.size());
  const unsigned width = D + 1;
  const unsigned digits = n * n * width;
  uint64_t total = 1;
  for (unsigned i = 0; i < digits; ++i) {
    check(total <= 200000000ull / q, "window census state space is too large");
    total *= q;
  }

  std::vector<FMat> nil;
  for (unsigned code = 1; code < q * q * q * q; ++code) {
    FMat m = fmat_zero(n, n);
    unsigned c = code;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        m[i][j] = c % q;
        c /= q;
      }
    FMat sq = fmat_mul(F, m, m);
    bool zero = true;
    for (unsigned i = 0; i < n && zero; ++i)
      for (unsigned j = 0; j < n && zero; ++j)
        if (sq[i][j]) zero = false;
    if (zero) nil.push_back(m);
  }

  // flat arithmetic tables keep the exhaustive passes cheap
  std::vector<unsigned> mulT(q * q), addT(q * q), subT(q * q);
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) {
      mulT[a * q + b] = F.mul(a, b);
      addT[a * q + b] = F.add(a, b);
      subT[a * q + b] = F.sub(a, b);
    }

  auto at = [&](const std::vector<uint8_t>& a, unsigned i, unsigned j,
                unsigned d) -> unsigned {
    return a[(i * n + j) * width + d];
  };
  auto code_of = [&](const std::vector<uint8_t>& a) {
    uint64_t c = 0;
    for (unsigned i = digits; i-- > 0;) c = c * q + a[i];
    return c;
  };
  auto det_is_unit_monomial = [&](const std::vector<uint8_t>& a) {
    unsigned nz = 0;
    for (unsigned e = 0; e <= 2 * D; ++e) {
      unsigned acc = 0;
      for (unsigned f = 0; f <= e && f <= D; ++f) {
        if (e - f > D) continue;
        acc = addT[acc * q + mulT[at(a, 0, 0, f) * q + at(a, 1, 1, e - f)]];
        acc = subT[acc * q + mulT[at(a, 0, 1, f) * q + at(a, 1, 0, e - f)]];
      }
      if (acc && ++nz > 1) return false;
    }
    return nz == 1;
  };
  auto split_type = [&](const std::vector<uint8_t>& a) {
    // the level spaces below read off the type of the factorization with
    // the polynomial factor on the left, which is the type of the
    // transpose in the convention used everywhere else; build transposed
    PolyMat p = pmat_zero(n);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        FPoly e(width, 0);
        for (unsigned d = 0; d < width; ++d) e[d] = at(a, i, j, d);
        fpoly_trim(e);
        p.at(j, i) = e;
      }
    LMat g = lmat_normalize(lmat_of(p));
    LMat ginv = lmat_inverse(F, g);
    FPoly det = pmat_det(F, g.p);
    const int kdet = fpoly_val(det) + static_cast<int>(n) * g.v;
    const int dmax = lmat_max_degree(g);
    const int dmin = kdet - static_cast<int>(n - 1) * dmax;
    const int iv = lmat_min_valuation(ginv);
    // dimension of { w in k[1/z]^n : g w in z^d k[z]^n } per level d
    auto level_dim = [&](int d) -> unsigned {
      const int lo = d + iv;
      if (lo > 0) return 0;
      const unsigned unknowns = static_cast<unsigned>(1 - lo) * n;
      const int clo = g.v + lo;
      if (clo >= d) return unknowns;
      FMat con = fmat_zero(static_cast<size_t>(d - clo) * n, unknowns);
      for (int e = clo; e < d; ++e)
        for (unsigned r = 0; r < n; ++r) {
          auto& row = con[static_cast<size_t>(e - clo) * n + r];
          for (int f = lo; f <= 0; ++f)
            for (unsigned i = 0; i < n; ++i)
              row[static_cast<size_t>(f - lo) * n + i] =
                  lmat_digit(g, r, i, e - f);
        }
      return unknowns - static_cast<unsigned>(fmat_rank(F, con));
    };
    std::vector<int> lam;
    unsigned kup = level_dim(dmax + 1);
    check(kup == 0, "level spaces start above the degree bound");
    unsigned prev_rank = 0;  // dim at level d+1 minus dim at level d+2
    unsigned kd1 = 0;        // dim at level d+1
    for (int d = dmax; d >= dmin && lam.size() < n; --d) {
      unsigned kd = level_dim(d);
      unsigned rd = kd - kd1;
      for (unsigned t = prev_rank; t < rd; ++t) lam.push_back(d);
      prev_rank = rd;
      kd1 = kd;
    }
    check(lam.size() == n, "level dimensions do not exhaust the rank");
    return lam;
  };

  std::vector<bool> seen(total, false);
  std::map<std::vector<int>, uint64_t> tally;
  std::vector<uint8_t> dig(digits, 0);
  std::vector<std::vector<uint8_t>> stack;
  std::vector<unsigned> t(width, 0);
  for (uint64_t code = 0; code < total; ++code) {
    if (!seen[code] && det_is_unit_monomial(dig)) {
      ++tally[split_type(dig)];
      seen[code] = true;
      stack.push_back(dig);
      while (!stack.empty()) {
        std::vector<uint8_t> cur = std::move(stack.back());
        stack.pop_back();
        for (const FMat& v : nil)
          for (unsigned d = 1; d <= D; ++d) {
            // right move: column mix shifted up by d
            {
              std::vector<uint8_t> cand = cur;
              bool ok = true;
              for (unsigned i = 0; i < n && ok; ++i)
                for (unsigned k = 0; k < n && ok; ++k) {
                  for (unsigned e = 0; e < width; ++e) {
                    unsigned acc = 0;
                    for (unsigned j = 0; j < n; ++j)
                      acc = addT[acc * q + mulT[at(cur, i, j, e) * q + v[j][k]]];
                    t[e] = acc;
                  }
                  for (unsigned e = width - d; e < width; ++e)
                    if (t[e]) ok = false;
                  if (!ok) break;
                  for (unsigned e = 0; e + d < width; ++e)
                    cand[(i * n + k) * width + e + d] = static_cast<uint8_t>(
                        addT[cand[(i * n + k) * width + e + d] * q + t[e]]);
                }
              if (ok) {
                uint64_t c2 = code_of(cand);
                if (!seen[c2]) {
                  seen[c2] = true;
                  stack.push_back(std::move(cand));
                }
              }
            }
            // left move: row mix shifted down by d
            {
              std::vector<uint8_t> cand = cur;
              bool ok = true;
              for (unsigned k = 0; k < n && ok; ++k)
                for (unsigned j = 0; j < n && ok; ++j) {
                  for (unsigned e = 0; e < width; ++e) {
                    unsigned acc = 0;
                    for (unsigned i = 0; i < n; ++i)
                      acc = addT[acc * q + mulT[v[k][i] * q + at(cur, i, j, e)]];
                    t[e] = acc;
                  }
                  for (unsigned e = 0; e < d; ++e)
                    if (t[e]) ok = false;
                  if (!ok) break;
                  for (unsigned e = d; e < width; ++e)
                    cand[(k * n + j) * width + e - d] = static_cast<uint8_t>(
                        addT[cand[(k * n + j) * width + e - d] * q + t[e]]);
                }
              if (ok) {
                uint64_t c2 = code_of(cand);
                if (!seen[c2]) {
                  seen[c2] = true;
                  stack.push_back(std::move(cand));
                }
              }
            }
          }
      }
    }
    // mixed-radix increment
    for (unsigned i = 0; i < digits; ++i) {
      if (++dig[i] < q) break;
      dig[i] = 0;
    }
  }
  return tally;
}

}  // namespace hp1
