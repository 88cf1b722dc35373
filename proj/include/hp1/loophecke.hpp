#pragma once

// Convolution algebra of double cosets of the principal congruence subgroup
// K_1 = ker(G(k[[t]]) -> G(k)) in the loop group G(k((t))), G = GL(N) or
// PGL(N), together with the filtration-by-valuation flags of loop group
// elements and the graded identification of each double coset stratum with
// a twisted product of finite flag varieties.
//
// Right cosets x K_1 are modeled exactly by the pair (lattice, frame): the
// lattice L = x O^N in canonical triangular Hermite form over O = k[[t]],
// and the basis of L/tL induced by the columns of x, an element of G(k).
// Double cosets are orbits of the left K_1-action on those pairs, found by
// saturating with congruence generators 1 + c t^d E_{ij}.  All matrices are
// exact Laurent polynomial matrices; the precision parameter M only sets
// the digit window of the published canonical representative matrices and
// is validated by an M -> M+1 stability check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hp1/error.hpp"
#include "hp1/fq.hpp"
#include "hp1/funspace.hpp"
#include "hp1/group.hpp"
#include "hp1/laurent.hpp"
#include "hp1/matrix.hpp"
#include "hp1/scalar.hpp"

namespace hp1 {

// --------------------------- exact Laurent matrices ------------------------

// t^{v} * p with p a polynomial matrix whose minimal entry valuation is 0
// (unless the matrix is zero).
struct LMat {
  int v = 0;
  PolyMat p;

  unsigned size() const { return p.n; }
};

inline bool lmat_is_zero(const LMat& a) {
  for (const FPoly& e : a.p.e)
    if (!fpoly_is_zero(e)) return false;
  return true;
}

inline LMat lmat_normalize(LMat a) {
  int minval = INT32_MAX;
  for (const FPoly& e : a.p.e) {
    int w = fpoly_val(e);
    if (w >= 0) minval = std::min(minval, w);
  }
  if (minval == INT32_MAX) return LMat{0, pmat_zero(a.p.n)};
  if (minval > 0) {
    for (FPoly& e : a.p.e)
      if (!fpoly_is_zero(e)) e.erase(e.begin(), e.begin() + minval);
    a.v += minval;
  }
  return a;
}

inline LMat lmat_of(const PolyMat& p, int v = 0) {
  return lmat_normalize(LMat{v, p});
}

inline LMat lmat_one(unsigned n) { return lmat_of(pmat_identity(n)); }

inline LMat lmat_const(const Field& F, const FMat& a) {
  return lmat_of(pmat_from_const(F, a));
}

inline LMat lmat_tpow(const std::vector<int>& mu) {
  int m = *std::min_element(mu.begin(), mu.end());
  std::vector<int> sh = mu;
  for (int& x : sh) x -= m;
  return LMat{m, pmat_diag_tpow(sh)};
}

inline LMat lmat_mul(const Field& F, const LMat& a, const LMat& b) {
  check(a.size() == b.size(), "Laurent matrix size mismatch");
  return lmat_normalize(LMat{a.v + b.v, pmat_mul(F, a.p, b.p)});
}

inline bool lmat_equal(const LMat& a, const LMat& b) {
  LMat x = lmat_normalize(a), y = lmat_normalize(b);
  if (lmat_is_zero(x) || lmat_is_zero(y))
    return lmat_is_zero(x) == lmat_is_zero(y);
  return x.v == y.v && pmat_equal(x.p, y.p);
}

// Inverse of a matrix whose determinant is a unit times a power of t; the
// result is again an exact Laurent matrix.
inline LMat lmat_inverse(const Field& F, const LMat& a) {
  FPoly det = pmat_det(F, a.p);
  int k = fpoly_val(det);
  check(k >= 0 && fpoly_deg(det) == k,
        "Laurent inverse requires a monomial determinant");
  unsigned cinv = F.inv(det[static_cast<size_t>(k)]);
  PolyMat adj = pmat_adjugate(F, a.p);
  for (FPoly& e : adj.e) e = fpoly_scale(F, cinv, e);
  // (t^v p)^{-1} = t^{-v-k} (adj(p) / c)
  return lmat_normalize(LMat{-a.v - k, adj});
}

// coefficient of t^d in entry (i, j)
inline unsigned lmat_digit(const LMat& a, unsigned i, unsigned j, int d) {
  int rel = d - a.v;
  if (rel < 0) return 0;
  return fpoly_coeff(a.p.at(i, j), static_cast<size_t>(rel));
}

inline int lmat_min_valuation(const LMat& a) {
  int best = INT32_MAX;
  for (const FPoly& e : a.p.e) {
    int w = fpoly_val(e);
    if (w >= 0) best = std::min(best, w);
  }
  return best == INT32_MAX ? 0 : best + a.v;
}

inline int lmat_max_degree(const LMat& a) {
  int best = INT32_MIN;
  for (const FPoly& e : a.p.e) {
    int d = fpoly_deg(e);
    if (d >= 0) best = std::max(best, d);
  }
  return best == INT32_MIN ? 0 : best + a.v;
}

inline LMat lmat_scale_tpow(const LMat& a, int m) {
  return LMat{a.v + m, a.p};
}

// ------------------------- lattice canonical forms -------------------------

// Canonical data of the right coset x K_1: the lattice L = x O^N in its
// canonical triangular basis t^{shift} H (H lower triangular, H[i][i] =
// t^{a_i}, H[i][j] for j < i a polynomial of degree < a_i), and the frame
// s in GL_N(k) expressing the columns of x in the H-basis modulo t L.
struct LatticeFrame {
  PolyMat H;
  std::vector<int> a;
  int shift = 0;
  FMat s;

  // elementary divisor exponents of L relative to O^N, weakly decreasing
  std::vector<int> type(const Field& F) const {
    std::vector<int> ty = pmat_divisor_type(F, H);
    for (int& x : ty) x += shift;
    return ty;
  }
};

// the exact matrix t^{shift} * H * s, a distinguished member of the coset
inline LMat lattice_frame_matrix(const Field& F, const LatticeFrame& lf) {
  return lmat_normalize(
      LMat{lf.shift, pmat_mul(F, lf.H, pmat_from_const(F, lf.s))});
}

inline LatticeFrame hnf_of(const Field& F, const LMat& xin) {
  const unsigned n = xin.size();
  check(n > 0, "empty matrix has no canonical form");
  LMat x = lmat_normalize(xin);
  check(!lmat_is_zero(x), "zero matrix has no canonical form");
  // keep negative valuation as an external shift, fold positive in
  int shift = 0;
  PolyMat w = x.p;
  if (x.v < 0) {
    shift = x.v;
  } else if (x.v > 0) {
    for (FPoly& e : w.e)
      if (!fpoly_is_zero(e)) e = fpoly_shift(e, static_cast<unsigned>(x.v));
  }

  // division-free triangularization by column operations over O
  PolyMat h = w;
  for (unsigned r = 0; r < n; ++r) {
    // pivot: minimal-valuation entry in row r among columns >= r
    int bestv = INT32_MAX;
    unsigned bestc = n;
    for (unsigned c = r; c < n; ++c) {
      int v = fpoly_val(h.at(r, c));
      if (v >= 0 && v < bestv) {
        bestv = v;
        bestc = c;
      }
    }
    check(bestc < n, "matrix is singular over the Laurent field");
    if (bestc != r)
      for (unsigned i = 0; i < n; ++i) std::swap(h.at(i, r), h.at(i, bestc));
    // clear the rest of row r: col_c := u * col_c - (w' t^{dv}) * col_r
    // where pivot = t^{bestv} u and entry = t^{bestv+dv} w', both exact
    FPoly piv = h.at(r, r);
    FPoly u(piv.begin() + bestv, piv.end());
    for (unsigned c = r + 1; c < n; ++c) {
      if (fpoly_is_zero(h.at(r, c))) continue;
      FPoly ent = h.at(r, c);
      int ev = fpoly_val(ent);
      FPoly wq = fpoly_shift(FPoly(ent.begin() + ev, ent.end()),
                             static_cast<unsigned>(ev - bestv));
      for (unsigned i = r; i < n; ++i) {
        FPoly t1 = fpoly_mul(F, u, h.at(i, c));
        FPoly t2 = fpoly_mul(F, wq, h.at(i, r));
        h.at(i, c) = fpoly_sub(F, t1, t2);
      }
      check(fpoly_is_zero(h.at(r, c)), "column elimination failed");
    }
  }

  LatticeFrame lf;
  lf.shift = shift;
  lf.a.resize(n);
  int amax = 0;
  for (unsigned i = 0; i < n; ++i) {
    lf.a[i] = fpoly_val(h.at(i, i));
    check(lf.a[i] >= 0, "triangular form has a singular diagonal");
    amax = std::max(amax, lf.a[i]);
  }

  // canonical columns, built right to left: column j is the unique element
  // of the column span with zero entries above row j, entry t^{a_j} at row
  // j, and the entries below reduced modulo t^{a_i} (i = row index).  The
  // working precision T tolerates one a_max truncation loss per reduction
  // step while keeping every digit below a_max exact.
  const unsigned T = (n + 2) * static_cast<unsigned>(amax + 1);
  PolyMat canon = pmat_zero(n);
  for (unsigned j = n; j-- > 0;) {
    // candidate column: (column j of h) * u_j^{-1}, truncated at t^T
    FPoly pivj = h.at(j, j);
    FPoly unitj(pivj.begin() + lf.a[j], pivj.end());
    FPoly yj = fpoly_series_inverse(F, unitj, T);
    std::vector<FPoly> cc(n);
    for (unsigned i = j; i < n; ++i)
      cc[i] = fpoly_trunc(fpoly_mul(F, h.at(i, j), yj), T);
    {
      FPoly want;
      want.resize(static_cast<size_t>(lf.a[j]) + 1, 0);
      want[static_cast<size_t>(lf.a[j])] = 1;
      check(cc[j] == want, "pivot normalization failed");
    }
    // reduce the tail modulo t^{a_i} using the later canonical columns,
    // whose row-i diagonal is exactly t^{a_i}
    for (unsigned i = j + 1; i < n; ++i) {
      if (fpoly_deg(cc[i]) >= lf.a[i]) {
        FPoly q(cc[i].begin() + lf.a[i], cc[i].end());
        for (unsigned l = i; l < n; ++l)
          cc[l] = fpoly_trunc(
              fpoly_sub(F, cc[l], fpoly_mul(F, q, canon.at(l, i))), T);
      }
      check(fpoly_deg(cc[i]) < lf.a[i], "canonical reduction failed");
    }
    for (unsigned i = j + 1; i < n; ++i) canon.at(i, j) = cc[i];
    FPoly diag;
    diag.resize(static_cast<size_t>(lf.a[j]) + 1, 0);
    diag[static_cast<size_t>(lf.a[j])] = 1;
    canon.at(j, j) = diag;
  }
  lf.H = canon;

  // frame: s = (H^{-1} w) evaluated at its constant digit, via the exact
  // adjugate: H^{-1} = adj(H) / t^{D}, D = sum of the diagonal exponents
  PolyMat adj = pmat_adjugate(F, lf.H);
  PolyMat prod = pmat_mul(F, adj, w);
  int D = 0;
  for (int ai : lf.a) D += ai;
  lf.s = fmat_zero(n, n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      const FPoly& e = prod.at(i, j);
      check(fpoly_is_zero(e) || fpoly_val(e) >= D,
            "frame entry is not regular");
      lf.s[i][j] = fpoly_coeff(e, static_cast<size_t>(D));
    }
  check(fmat_det(F, lf.s) != 0, "frame is singular");
  return lf;
}

// --------------------------- the double coset model ------------------------

struct HeckeKey {
  std::vector<int> mu;
  unsigned idx = 0;

  bool operator<(const HeckeKey& o) const {
    if (mu != o.mu) return mu < o.mu;
    return idx < o.idx;
  }
  bool operator==(const HeckeKey& o) const {
    return mu == o.mu && idx == o.idx;
  }
};

// A finitely supported function on the double coset space, with exact
// scalar coefficients.
struct HeckeElement {
  std::map<HeckeKey, Scalar> c;

  void add_to(const HeckeKey& k, const Scalar& v) {
    auto it = c.find(k);
    if (it == c.end()) {
      if (!v.is_zero()) c.emplace(k, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) c.erase(it);
  }
  Scalar get(const HeckeKey& k) const {
    auto it = c.find(k);
    return it == c.end() ? Scalar() : it->second;
  }
  // add_to never stores a zero coefficient, so map equality is canonical
  bool operator==(const HeckeElement& o) const { return c == o.c; }
};

class LoopModel {
 public:
  LoopModel(Field F, unsigned N, GroupKind kind, uint64_t node_budget = 4000000)
      : F_(F), N_(N), kind_(kind), Gk_(F, N, kind), budget_(node_budget) {}

  const Field& field() const { return F_; }
  unsigned rank() const { return N_; }
  GroupKind kind() const { return kind_; }
  const Group& finite_group() const { return Gk_; }

  // Normalized stratum label of a loop group element: for GL(N) the
  // elementary divisor type itself; for PGL(N) the type shifted so its
  // last entry is zero (central powers of t act trivially).
  std::vector<int> stratum_label(const std::vector<int>& type) const {
    std::vector<int> mu = type;
    if (kind_ == GroupKind::PGL) {
      int m = mu.back();
      for (int& x : mu) x -= m;
    }
    return mu;
  }

  struct Stratum {
    std::vector<int> mu;
    unsigned M = 0;  // digit window for canonical representatives
    std::vector<LatticeFrame> rc;   // right cosets (canonical pair data)
    std::vector<LMat> rc_mat;       // exact representative per right coset
    std::map<std::pair<uint64_t, uint64_t>, unsigned> rc_index;
    std::vector<unsigned> dc_of;    // right coset -> double coset
    std::vector<std::vector<unsigned>> dc_members;
    std::vector<PolyMat> dc_canon;  // minimal digit matrix per double coset
  };

  static unsigned default_precision(const std::vector<int>& mu) {
    return static_cast<unsigned>(mu.front()) + 2;
  }

  const Stratum& stratum(const std::vector<int>& mu_in, unsigned M = 0) {
    std::vector<int> mu = mu_in;
    check(!mu.empty() && mu.size() == N_, "stratum label has the wrong rank");
    check(coweight_dominant(mu), "stratum label must be weakly decreasing");
    if (kind_ == GroupKind::PGL)
      check(mu.back() == 0, "PGL stratum labels are normalized to end in 0");
    else
      check(mu.back() >= 0, "negative strata are not enumerated");
    if (M == 0) M = default_precision(mu);
    check(M >= static_cast<unsigned>(mu.front()) + 2,
          "digit window is too small for this stratum");
    auto key = std::make_pair(mu, M);
    auto it = strata_.find(key);
    if (it != strata_.end()) return it->second;
    Stratum st = build_stratum_(mu, M);
    return strata_.emplace(std::move(key), std::move(st)).first->second;
  }

  // Census of double cosets in the stratum, hard-checked during
  // construction against the twisted product of the parabolic datum.
  unsigned census(const std::vector<int>& mu, unsigned M = 0) {
    return static_cast<unsigned>(stratum(mu, M).dc_canon.size());
  }

  // Right-coset classification of an exact invertible Laurent matrix.
  // Returns nothing when the type falls outside the nonnegative cone
  // (after PGL normalization).
  struct CosetId {
    std::vector<int> mu;
    unsigned rc = 0;
    unsigned dc = 0;
    int degree = 0;  // valuation of det (GL) / its class mod N (PGL)
  };

  std::optional<CosetId> classify(const LMat& z) {
    LatticeFrame lf = hnf_of(F_, z);
    std::vector<int> ty = lf.type(F_);
    CosetId id;
    id.degree = 0;
    for (int x : ty) id.degree += x;
    if (kind_ == GroupKind::PGL) {
      int m = ty.back();
      lf = pgl_normalize_(lf, m);
      for (int& x : ty) x -= m;
      id.degree = ((id.degree % static_cast<int>(N_)) + static_cast<int>(N_)) %
                  static_cast<int>(N_);
    }
    if (ty.back() < 0) return std::nullopt;
    id.mu = ty;
    const Stratum& st = stratum(ty);
    auto nk = node_key_(lf, st.M);
    auto it = st.rc_index.find(nk);
    check(it != st.rc_index.end(), "coset classification missed the table");
    id.rc = it->second;
    id.dc = st.dc_of[it->second];
    return id;
  }

  // ----------------------------- convolution -------------------------------

  HeckeElement unit() {
    HeckeElement e;
    e.c.emplace(key_of_const(Gk_.identity()), Scalar(1L));
    return e;
  }

  // delta function of the double coset containing the constant matrix g;
  // returns (key, element)
  HeckeKey key_of_const(unsigned gid) {
    LMat z = lmat_const(F_, Gk_.mat(gid));
    auto id = classify(z);
    check(id.has_value(), "constant matrix failed to classify");
    return HeckeKey{id->mu, id->dc};
  }

  HeckeElement delta(const HeckeKey& k) {
    check(k.idx < census(k.mu), "double coset index out of range");
    HeckeElement e;
    e.c.emplace(k, Scalar(1L));
    return e;
  }

  // (f1 * f2)(g) = #{ x K_1 in supp f1-coset : x^{-1} g in f2-coset },
  // summed with coefficients and evaluated on canonical double coset
  // representatives.  Exact integer counts throughout.
  HeckeElement convolve(const HeckeElement& f1, const HeckeElement& f2) {
    HeckeElement out;
    for (const auto& [k1, v1] : f1.c) {
      const Stratum* s1 = &stratum(k1.mu);
      std::vector<LMat> xinv;
      xinv.reserve(s1->dc_members[k1.idx].size());
      for (unsigned rcid : s1->dc_members[k1.idx])
        xinv.push_back(lmat_inverse(F_, s1->rc_mat[rcid]));
      for (const auto& [k2, v2] : f2.c) {
        std::vector<int> lamsum(N_);
        for (unsigned i = 0; i < N_; ++i) lamsum[i] = k1.mu[i] + k2.mu[i];
        // mass conservation: summing the product over all right cosets
        // must give |C1| * |C2| as right-coset counts, which verifies that
        // no support escaped the candidate window
        uint64_t mass = 0;
        const uint64_t m1 = xinv.size();
        const uint64_t m2 = stratum(k2.mu).dc_members[k2.idx].size();
        for (const auto& nu : candidate_strata_(lamsum)) {
          const unsigned ndc = census(nu);
          for (unsigned d = 0; d < ndc; ++d) {
            LMat g = lmat_of(stratum(nu).dc_canon[d]);
            long hits = 0;
            for (const LMat& xi : xinv) {
              LMat z = lmat_mul(F_, xi, g);
              if (lmat_min_valuation(z) < 0 && kind_ == GroupKind::GL)
                continue;  // type would dip below zero
              auto id = classify(z);
              if (id.has_value() && id->mu == k2.mu && id->dc == k2.idx)
                ++hits;
            }
            if (hits) {
              mass += static_cast<uint64_t>(hits) *
                      stratum(nu).dc_members[d].size();
              out.add_to(HeckeKey{nu, d}, v1 * v2 * Scalar(hits));
            }
          }
        }
        check(mass == m1 * m2, "convolution mass check failed");
      }
    }
    return out;
  }

  // Convolution with a declared support window; overflow is an error.
  HeckeElement convolve_windowed(const HeckeElement& f1,
                                 const HeckeElement& f2,
                                 const std::vector<int>& window) {
    HeckeElement r = convolve(f1, f2);
    std::set<std::vector<int>> allowed;
    for (const auto& mu : window_strata(window)) allowed.insert(mu);
    for (const auto& [k, v] : r.c)
      check(allowed.count(k.mu) > 0,
            "convolution support overflows the declared window");
    return r;
  }

  // all stratum labels whose type lies in the closed window below lambda
  std::vector<std::vector<int>> window_strata(const std::vector<int>& lambda) {
    std::set<std::vector<int>> seen;
    for (const auto& mu : coweight_window(lambda)) {
      std::vector<int> lab = stratum_label(mu);
      if (lab.back() >= 0) seen.insert(lab);
    }
    return std::vector<std::vector<int>>(seen.begin(), seen.end());
  }

  // Verify that rebuilding a stratum with one more digit of precision
  // reproduces the census and extends the canonical representatives.
  void check_precision_stability(const std::vector<int>& mu) {
    const unsigned M = stratum(mu).M;
    const unsigned n1 = census(mu);
    const unsigned n2 = census(mu, M + 1);
    check(n1 == n2, "census changed under a precision increase");
    for (unsigned i = 0; i < n1; ++i)
      check(pmat_equal(stratum(mu).dc_canon[i],
                       pmat_trunc(stratum(mu, M + 1).dc_canon[i], M)),
            "canonical representative changed under a precision increase");
  }

 private:
  Field F_;
  unsigned N_;
  GroupKind kind_;
  Group Gk_;
  uint64_t budget_;
  std::map<std::pair<std::vector<int>, unsigned>, Stratum> strata_;

  // strip t^m (PGL normalization); the frame is untouched
  LatticeFrame pgl_normalize_(LatticeFrame lf, int m) const {
    if (m == 0) return lf;
    int inner = m - lf.shift;  // amount to remove from H itself
    lf.shift = 0;
    if (inner != 0) {
      for (FPoly& e : lf.H.e) {
        if (fpoly_is_zero(e)) continue;
        check(inner < 0 || fpoly_val(e) >= inner, "central twist strip failed");
        if (inner > 0)
          e.erase(e.begin(), e.begin() + inner);
        else
          e = fpoly_shift(e, static_cast<unsigned>(-inner));
      }
      for (int& ai : lf.a) ai -= inner;
    }
    return lf;
  }

  std::pair<uint64_t, uint64_t> node_key_(const LatticeFrame& lf,
                                          unsigned M) const {
    uint64_t hk = pmat_key(lf.H, M, static_cast<unsigned>(F_.size()));
    uint64_t sk = Gk_.lookup(Group::flatten(lf.s));
    return {hk, sk};
  }

  std::vector<std::vector<int>> candidate_strata_(
      const std::vector<int>& lamsum) {
    std::vector<std::vector<int>> out;
    int want = coweight_total(lamsum);
    std::set<std::vector<int>> seen;
    for (const auto& nu : coweight_window(lamsum)) {
      if (nu.back() < 0) continue;
      if (kind_ == GroupKind::GL) {
        if (coweight_total(nu) == want) out.push_back(nu);
      } else {
        if ((want - coweight_total(nu)) % static_cast<int>(N_) == 0) {
          std::vector<int> lab = stratum_label(nu);
          if (seen.insert(lab).second) out.push_back(lab);
        }
      }
    }
    return out;
  }

  // enumerate canonical lattice bases H with divisor type mu
  std::vector<PolyMat> lattices_of_type_(const std::vector<int>& mu) {
    int total = coweight_total(mu);
    std::vector<PolyMat> found;
    std::vector<int> a(N_, 0);
    enumerate_diag_(mu, total, 0, a, found);
    return found;
  }

  void enumerate_diag_(const std::vector<int>& mu, int remaining, unsigned pos,
                       std::vector<int>& a, std::vector<PolyMat>& out) {
    if (pos == N_) {
      if (remaining == 0) fill_subdiag_(mu, a, out);
      return;
    }
    // no diagonal exponent can exceed the largest divisor: t^{mu_1} O^N
    // is contained in the lattice, forcing t^{mu_1} e_i into the span
    for (int v = 0; v <= remaining && v <= mu.front(); ++v) {
      a[pos] = v;
      enumerate_diag_(mu, remaining - v, pos + 1, a, out);
    }
    a[pos] = 0;
  }

  void fill_subdiag_(const std::vector<int>& mu, const std::vector<int>& a,
                     std::vector<PolyMat>& out) {
    // positions (i, j) with j < i take polynomials of degree < a_i
    struct Slot {
      unsigned flat;
      unsigned deg;
    };
    std::vector<Slot> slots;
    uint64_t combos = 1;
    for (unsigned i = 0; i < N_; ++i)
      for (unsigned j = 0; j < i; ++j)
        for (int d = 0; d < a[i]; ++d) {
          slots.push_back({i * N_ + j, static_cast<unsigned>(d)});
          combos *= F_.size();
          check(combos <= budget_, "stratum lattice enumeration budget hit");
        }
    uint64_t q = F_.size();
    for (uint64_t code = 0;; ++code) {
      PolyMat H = pmat_zero(N_);
      for (unsigned i = 0; i < N_; ++i) {
        FPoly diag;
        diag.resize(static_cast<size_t>(a[i]) + 1, 0);
        diag[static_cast<size_t>(a[i])] = 1;
        H.at(i, i) = diag;
      }
      uint64_t c = code;
      for (const Slot& sl : slots) {
        unsigned digit = static_cast<unsigned>(c % q);
        c /= q;
        if (digit) {
          FPoly& e = H.e[sl.flat];
          if (e.size() <= sl.deg) e.resize(sl.deg + 1, 0);
          e[sl.deg] = digit;
        }
      }
      if (pmat_divisor_type(F_, H) == mu) out.push_back(H);
      if (code + 1 >= combos) break;
    }
  }

  Stratum build_stratum_(const std::vector<int>& mu, unsigned M) {
    Stratum st;
    st.mu = mu;
    st.M = M;
    check(pmat_key_fits(N_, M, static_cast<unsigned>(F_.size())),
          "digit window exceeds the 64-bit key capacity");

    std::vector<PolyMat> lats = lattices_of_type_(mu);
    uint64_t nodes = static_cast<uint64_t>(lats.size()) * Gk_.size();
    check(nodes > 0 && nodes <= budget_, "stratum node budget exceeded");

    for (const PolyMat& H : lats) {
      LatticeFrame lf;
      lf.H = H;
      lf.shift = 0;
      lf.a.resize(N_);
      for (unsigned i = 0; i < N_; ++i) lf.a[i] = fpoly_val(H.at(i, i));
      for (unsigned s = 0; s < Gk_.size(); ++s) {
        lf.s = Gk_.mat(s);
        unsigned idx = static_cast<unsigned>(st.rc.size());
        st.rc.push_back(lf);
        st.rc_mat.push_back(lattice_frame_matrix(F_, lf));
        auto ins = st.rc_index.emplace(node_key_(lf, M), idx);
        check(ins.second, "duplicate right coset node");
      }
    }

    // left K_1 orbit saturation with generators 1 + c t^d E_{ij}; depth
    // beyond mu_1 acts trivially on every lattice of this type
    int dmax = std::max(mu.front(), 1);
    std::vector<LMat> gens;
    for (int d = 1; d <= dmax; ++d)
      for (unsigned i = 0; i < N_; ++i)
        for (unsigned j = 0; j < N_; ++j)
          for (unsigned c = 1; c < F_.size(); ++c) {
            PolyMat g = pmat_identity(N_);
            FPoly& e = g.at(i, j);
            if (e.size() <= static_cast<size_t>(d)) e.resize(d + 1, 0);
            e[static_cast<size_t>(d)] = c;
            gens.push_back(lmat_of(g));
          }

    st.dc_of.assign(st.rc.size(), UINT32_MAX);
    for (unsigned seed = 0; seed < st.rc.size(); ++seed) {
      if (st.dc_of[seed] != UINT32_MAX) continue;
      unsigned dcid = static_cast<unsigned>(st.dc_members.size());
      std::vector<unsigned> stack{seed}, members{seed};
      st.dc_of[seed] = dcid;
      while (!stack.empty()) {
        unsigned cur = stack.back();
        stack.pop_back();
        for (const LMat& g : gens) {
          LMat z = lmat_mul(F_, g, st.rc_mat[cur]);
          LatticeFrame lf = hnf_of(F_, z);
          if (kind_ == GroupKind::PGL) {
            std::vector<int> ty = lf.type(F_);
            lf = pgl_normalize_(lf, ty.back());
          }
          auto it = st.rc_index.find(node_key_(lf, M));
          check(it != st.rc_index.end(), "orbit left the stratum");
          unsigned nxt = it->second;
          if (st.dc_of[nxt] == UINT32_MAX) {
            st.dc_of[nxt] = dcid;
            stack.push_back(nxt);
            members.push_back(nxt);
          } else {
            check(st.dc_of[nxt] == dcid, "orbit collision");
          }
        }
      }
      std::sort(members.begin(), members.end());
      st.dc_members.push_back(std::move(members));
    }

    // canonical representative: the digit-wise minimal member matrix of
    // the double coset within the window t^0 .. t^{M-1}, digits compared
    // in degree-major then row-major order
    for (const auto& members : st.dc_members) {
      std::vector<unsigned> best;
      bool have = false;
      for (unsigned rcid : members) {
        std::vector<unsigned> cand = coset_min_digits_(st.rc_mat[rcid], M);
        if (!have || cand < best) {
          best = std::move(cand);
          have = true;
        }
      }
      st.dc_canon.push_back(digits_to_pmat_(best, M));
    }

    // hard census check against the twisted product of the parabolic datum
    ParabolicDatum pd = parabolic_datum(Gk_, mu);
    TwistedProduct tp = twisted_product(pd, false);
    check(st.dc_canon.size() == tp.size(),
          "double coset census disagrees with the twisted product");
    return st;
  }

  // digit vector of x in the window [0, M), degree-major then row-major
  std::vector<unsigned> pmat_digits_(const LMat& x, unsigned M) const {
    std::vector<unsigned> v;
    v.reserve(static_cast<size_t>(M) * N_ * N_);
    for (unsigned d = 0; d < M; ++d)
      for (unsigned i = 0; i < N_; ++i)
        for (unsigned j = 0; j < N_; ++j)
          v.push_back(lmat_digit(x, i, j, static_cast<int>(d)));
    return v;
  }

  PolyMat digits_to_pmat_(const std::vector<unsigned>& v, unsigned M) const {
    PolyMat p = pmat_zero(N_);
    size_t pos = 0;
    for (unsigned d = 0; d < M; ++d)
      for (unsigned i = 0; i < N_; ++i)
        for (unsigned j = 0; j < N_; ++j) {
          unsigned digit = v[pos++];
          if (digit) {
            FPoly& e = p.at(i, j);
            if (e.size() <= d) e.resize(d + 1, 0);
            e[d] = digit;
          }
        }
    for (FPoly& e : p.e) fpoly_trim(e);
    return p;
  }

  // lexicographically minimal digit vector over the right coset
  // { x (1 + t Y) mod t^M }: an affine space over k, minimized by greedy
  // coset-leader reduction against the row-reduced difference basis
  std::vector<unsigned> coset_min_digits_(const LMat& x, unsigned M) const {
    std::vector<unsigned> base = pmat_digits_(x, M);
    std::vector<std::vector<unsigned>> basis;
    for (unsigned d = 1; d < M; ++d)
      for (unsigned i = 0; i < N_; ++i)
        for (unsigned j = 0; j < N_; ++j) {
          PolyMat E = pmat_zero(N_);
          FPoly e;
          e.resize(static_cast<size_t>(d) + 1, 0);
          e[d] = 1;
          E.at(i, j) = e;
          basis.push_back(pmat_digits_(lmat_mul(F_, x, lmat_of(E)), M));
        }
    const size_t len = base.size();
    std::vector<size_t> pivots;
    std::vector<std::vector<unsigned>> red;
    for (auto& row : basis) {
      for (size_t r = 0; r < red.size(); ++r) {
        unsigned c = row[pivots[r]];
        if (c)
          for (size_t p = 0; p < len; ++p)
            row[p] = F_.sub(row[p], F_.mul(c, red[r][p]));
      }
      size_t lead = len;
      for (size_t p = 0; p < len; ++p)
        if (row[p]) {
          lead = p;
          break;
        }
      if (lead == len) continue;
      unsigned inv = F_.inv(row[lead]);
      for (size_t p = 0; p < len; ++p) row[p] = F_.mul(inv, row[p]);
      for (size_t r = 0; r < red.size(); ++r) {
        unsigned c = red[r][lead];
        if (c)
          for (size_t p = 0; p < len; ++p)
            red[r][p] = F_.sub(red[r][p], F_.mul(c, row[p]));
      }
      red.push_back(std::move(row));
      pivots.push_back(lead);
    }
    for (size_t r = 0; r < red.size(); ++r) {
      unsigned c = base[pivots[r]];
      if (c)
        for (size_t p = 0; p < len; ++p)
          base[p] = F_.sub(base[p], F_.mul(c, red[r][p]));
    }
    return base;
  }
};

// ------------------------------ valuation flags ----------------------------

// The increasing flag E_i = { v in k^N : some lift s in O^N of v has
// kappa s in t^{-i} O^N }.  Jump positions and graded dimensions recover
// the elementary divisor type with a sign: jumps sit at i = -lambda_j.
struct ValuationFlag {
  int ilo = 0, ihi = 0;
  std::vector<int> jumps;      // i with E_i != E_{i-1}, ascending
  std::map<int, FMat> spaces;  // i -> RREF basis rows of E_i
  std::vector<int> type;       // recovered type, weakly decreasing

  const FMat& at(int i) const {
    auto it = spaces.find(i);
    check(it != spaces.end(), "flag space at this index was not computed");
    return it->second;
  }
  unsigned dim(int i) const {
    if (i < ilo) return 0;
    auto it = spaces.find(std::min(i, ihi));
    return it == spaces.end() ? 0u : static_cast<unsigned>(it->second.size());
  }
};

namespace detail {

// digit accessor for either an exact Laurent matrix or a truncation whose
// digits are valid only for absolute degrees below valid_below
struct DigitView {
  const LMat* exact = nullptr;
  const LaurentMat* trunc = nullptr;
  int vmin = 0;
  int valid_below = 0;

  unsigned digit(unsigned i, unsigned j, int d) const {
    check(d < valid_below, "insufficient digit precision for the flag");
    if (exact) return lmat_digit(*exact, i, j, d);
    int rel = d - trunc->vmin;
    if (rel < 0) return 0;
    return fpoly_coeff(trunc->at(i, j), static_cast<size_t>(rel));
  }
};

inline DigitView view_of(const LMat& x) {
  DigitView v;
  v.exact = &x;
  v.vmin = lmat_min_valuation(x);
  v.valid_below = INT32_MAX;
  return v;
}

inline DigitView view_of(const LaurentMat& x, int valid_below) {
  DigitView v;
  v.trunc = &x;
  v.vmin = x.vmin;
  v.valid_below = valid_below;
  return v;
}

// Membership system for E_i: unknowns are digits s^(0) .. s^(P-1) of the
// lift (P = -i - vmin; digits of s at degree >= P cannot reach degrees
// below -i), constraints force the digits of kappa s at positions in
// [vmin, -i) to vanish.  Returns the constraint matrix (rows) over the
// unknown digit coordinates; the flag space is the digit-0 projection of
// its kernel.
inline FMat flag_space(const Field& F, unsigned N, const DigitView& kap,
                       int i) {
  int P = -i - kap.vmin;
  if (P <= 0) return fmat_identity(N);
  std::vector<int> cpos;
  for (int p = kap.vmin; p < -i; ++p) cpos.push_back(p);
  FMat sys(cpos.size() * N,
           std::vector<unsigned>(static_cast<size_t>(P) * N, 0));
  for (size_t pi = 0; pi < cpos.size(); ++pi)
    for (unsigned r = 0; r < N; ++r)
      for (int d = 0; d < P; ++d)
        for (unsigned c = 0; c < N; ++c)
          sys[pi * N + r][static_cast<size_t>(d) * N + c] =
              kap.digit(r, c, cpos[pi] - d);
  FMat ker = fmat_kernel(F, sys);
  FMat proj;
  for (const auto& kv : ker)
    proj.push_back(std::vector<unsigned>(kv.begin(), kv.begin() + N));
  if (proj.empty()) return proj;
  fmat_rref(F, proj);
  while (!proj.empty()) {
    bool zero = true;
    for (unsigned c : proj.back()) zero = zero && c == 0;
    if (!zero) break;
    proj.pop_back();
  }
  return proj;
}

// A lift s in O^N of v with kappa s in t^{-i} O^N, as digit polynomials;
// empty when v is not in E_i.
inline std::vector<FPoly> flag_lift(const Field& F, unsigned N,
                                    const DigitView& kap, int i,
                                    const std::vector<unsigned>& v) {
  int P = -i - kap.vmin;
  if (P < 1) P = 1;
  std::vector<int> cpos;
  for (int p = kap.vmin; p < -i; ++p) cpos.push_back(p);
  // digit 0 of s is fixed to v; unknowns are digits 1..P-1
  size_t nunk = static_cast<size_t>(P - 1) * N;
  FMat sys(cpos.size() * N, std::vector<unsigned>(std::max<size_t>(nunk, 1), 0));
  std::vector<unsigned> rhs(cpos.size() * N, 0);
  for (size_t pi = 0; pi < cpos.size(); ++pi) {
    int p = cpos[pi];
    for (unsigned r = 0; r < N; ++r) {
      unsigned acc = 0;
      for (unsigned c = 0; c < N; ++c)
        acc = F.add(acc, F.mul(kap.digit(r, c, p), v[c]));
      rhs[pi * N + r] = F.neg(acc);
      for (int d = 1; d < P; ++d)
        for (unsigned c = 0; c < N; ++c)
          sys[pi * N + r][static_cast<size_t>(d - 1) * N + c] =
              kap.digit(r, c, p - d);
    }
  }
  std::vector<unsigned> sol;
  if (!fmat_solve(F, sys, rhs, sol)) return {};
  std::vector<FPoly> s(N);
  for (unsigned c = 0; c < N; ++c) {
    FPoly e;
    e.resize(static_cast<size_t>(P), 0);
    e[0] = v[c];
    for (int d = 1; d < P; ++d)
      e[static_cast<size_t>(d)] = sol[static_cast<size_t>(d - 1) * N + c];
    fpoly_trim(e);
    s[c] = e;
  }
  return s;
}

}  // namespace detail

inline ValuationFlag valuation_flag_ranged(const Field& F, unsigned N,
                                           const detail::DigitView& kap,
                                           int ilo, int ihi) {
  ValuationFlag fl;
  fl.ilo = ilo;
  fl.ihi = ihi;
  unsigned prev = 0;
  check(ilo <= ihi, "empty flag index range");
  for (int i = ilo; i <= ihi; ++i) {
    FMat sp = detail::flag_space(F, N, kap, i);
    unsigned d = static_cast<unsigned>(sp.size());
    check(d >= prev, "flag spaces failed to increase");
    if (d > prev && i > ilo) fl.jumps.push_back(i);
    fl.spaces.emplace(i, std::move(sp));
    prev = d;
  }
  check(fl.dim(ilo) == 0, "flag range does not start at zero");
  check(fl.dim(ihi) == N, "flag range does not reach the full space");
  for (int i = ihi; i > ilo; --i) {
    unsigned d = fl.dim(i) - fl.dim(i - 1);
    for (unsigned r = 0; r < d; ++r) fl.type.push_back(-i);
  }
  std::sort(fl.type.rbegin(), fl.type.rend());
  return fl;
}

inline ValuationFlag valuation_flag(const Field& F, const LMat& kappa) {
  // the jumps sit exactly at the negated elementary divisor exponents, so
  // the divisor type brackets the index range
  std::vector<int> ty = hnf_of(F, kappa).type(F);
  auto kap = detail::view_of(kappa);
  return valuation_flag_ranged(F, kappa.size(), kap, -ty.front() - 1,
                               -ty.back());
}

// The flag of kappa^{-1}, computed from a truncated inverse when the
// determinant is not monomial in t.
inline ValuationFlag covaluation_flag(const Field& F, const LMat& kappa) {
  FPoly det = pmat_det(F, kappa.p);
  if (fpoly_deg(det) == fpoly_val(det)) {
    LMat kinv = lmat_inverse(F, kappa);
    return valuation_flag(F, kinv);
  }
  LatticeFrame lf = hnf_of(F, kappa);
  std::vector<int> ty = lf.type(F);
  // the inverse has type -reverse(ty): digits needed up to -ty.back() + 1
  int depth = std::max(1, -ty.back() + 2);
  PolyMat folded = kappa.p;
  if (kappa.v > 0)
    for (FPoly& e : folded.e)
      if (!fpoly_is_zero(e)) e = fpoly_shift(e, static_cast<unsigned>(kappa.v));
  int foldv = std::min(kappa.v, 0);
  // (t^{foldv} folded)^{-1} = folded^{-1} t^{-foldv}
  LaurentMat inv = lmat_inverse_trunc(F, folded, depth + std::abs(foldv) + 1);
  inv.vmin -= foldv;
  auto kap = detail::view_of(inv, depth - foldv);
  return valuation_flag_ranged(F, kappa.size(), kap, ty.back() - 1,
                               ty.front());
}

// --------------------------- graded identification -------------------------

// The point of the twisted product G/U x_M G/U^- attached to a double
// coset representative kappa of stratum mu: a pair of adapted bases for
// the valuation flags of kappa and kappa^{-1}, matched gradedwise.
struct GradedPoint {
  unsigned g1 = 0;  // finite group element ids
  unsigned g2 = 0;
  unsigned point = 0;
};

namespace detail {

// columns adapted to the flag in the given jump order: each block of
// columns extends the span to the next flag space
inline FMat flag_adapted_columns(const Field& F, const ValuationFlag& fl,
                                 const std::vector<int>& jumps_in_order,
                                 unsigned N) {
  FMat cols = fmat_zero(N, N);
  FMat have;  // RREF rows spanning the columns placed so far
  unsigned placed = 0;
  for (int i : jumps_in_order) {
    for (const auto& cand : fl.at(i)) {
      std::vector<unsigned> red = cand;
      for (const auto& row : have) {
        size_t lead = 0;
        while (lead < row.size() && row[lead] == 0) ++lead;
        if (lead < row.size() && red[lead]) {
          unsigned f = F.mul(red[lead], F.inv(row[lead]));
          for (size_t p = 0; p < red.size(); ++p)
            red[p] = F.sub(red[p], F.mul(f, row[p]));
        }
      }
      bool zero = true;
      for (unsigned x : red) zero = zero && x == 0;
      if (zero) continue;
      for (unsigned r = 0; r < N; ++r) cols[r][placed] = cand[r];
      ++placed;
      have.push_back(cand);
      fmat_rref(F, have);
    }
  }
  check(placed == N, "adapted basis is incomplete");
  return cols;
}

}  // namespace detail

inline GradedPoint graded_point(const Field& F, const Group& Gk,
                                const TwistedProduct& tp,
                                const std::vector<int>& mu, const LMat& kappa) {
  const unsigned N = kappa.size();
  ValuationFlag E = valuation_flag(F, kappa);
  check(E.type == mu, "flag type disagrees with the stratum label");
  ValuationFlag Ep = covaluation_flag(F, kappa);

  // g1: column block for value v placed at the positions where mu = v,
  // spanning E_{-v} over the previous blocks (values descending)
  std::vector<int> ej;
  for (int v : mu)
    if (ej.empty() || ej.back() != -v) ej.push_back(-v);
  FMat g1cols = detail::flag_adapted_columns(F, E, ej, N);

  // g2: column col is the graded matching image of g1's column col: the
  // degree (-i) digit of kappa s for a lift s of that column at i = -v
  auto kapview = detail::view_of(kappa);
  FMat g2cols = fmat_zero(N, N);
  for (unsigned col = 0; col < N; ++col) {
    int v = mu[col];
    int i = -v;
    std::vector<unsigned> u(N);
    for (unsigned r = 0; r < N; ++r) u[r] = g1cols[r][col];
    auto lift = detail::flag_lift(F, N, kapview, i, u);
    check(!lift.empty(), "flag membership lift failed");
    std::vector<unsigned> w(N, 0);
    for (unsigned r = 0; r < N; ++r) {
      unsigned acc = 0;
      for (unsigned c = 0; c < N; ++c) {
        const FPoly& sc = lift[c];
        for (size_t d = 0; d < sc.size(); ++d)
          if (sc[d])
            acc = F.add(
                acc, F.mul(lmat_digit(kappa, r, c, -i - static_cast<int>(d)),
                           sc[d]));
      }
      w[r] = acc;
    }
    // membership check: w must lie in the opposite flag space at -i
    {
      FMat test = Ep.at(-i);
      size_t rk = test.size();
      test.push_back(w);
      check(fmat_rank(F, test) == rk,
            "graded matching image escaped the opposite flag");
    }
    for (unsigned r = 0; r < N; ++r) g2cols[r][col] = w[r];
  }
  check(fmat_det(F, g2cols) != 0, "matched basis is singular");

  GradedPoint gp;
  gp.g1 = Gk.lookup(Group::flatten(g1cols));
  gp.g2 = Gk.lookup(Group::flatten(g2cols));
  gp.point = tp.point(gp.g1, gp.g2);
  return gp;
}

// The full graded identification of a stratum: one twisted product point
// per double coset, hard-checked to be a bijection.
inline std::vector<unsigned> graded_isomorphism(LoopModel& model,
                                                const std::vector<int>& mu,
                                                const TwistedProduct& tp) {
  const auto& st = model.stratum(mu);
  const Field& F = model.field();
  std::vector<unsigned> img;
  std::set<unsigned> seen;
  for (const auto& members : st.dc_members) {
    const LMat& rep = st.rc_mat[members.front()];
    GradedPoint gp = graded_point(F, model.finite_group(), tp, mu, rep);
    check(seen.insert(gp.point).second,
          "graded identification is not injective");
    img.push_back(gp.point);
  }
  check(img.size() == tp.size(), "graded identification is not surjective");
  return img;
}

}  // namespace hp1
