#pragma once
// Cuspidal characters of the rank-two finite linear groups, computed by an
// independent oracle: decompose the module induced from a generic character
// of the unipotent subgroup, cut out its cuspidal part with the exact
// projector, split that part by class-sum eigenvalues of elliptic classes,
// and read character values off as traces.  Also: lifts of cuspidal data
// along base extension, and the scalar action of divisor operators on the
// cuspidal blocks of the trivial stratum.

#include <set>
#include <vector>

#include "divhecke.hpp"
#include "funspace.hpp"

namespace hp1 {

// ----------------------------------------------------------------------
// Cuspidal pairs
// ----------------------------------------------------------------------

// A character of the nonsplit rank-two torus that is not Frobenius-fixed,
// taken up to Frobenius conjugacy.  For the projective group the character
// must also kill the base units.
struct DLPair {
  unsigned q = 2;
  GroupKind kind = GroupKind::GL;
  unsigned index = 0;          // exponent on the chosen generator
  std::vector<Scalar> theta;   // value table over the level-two codes
};

inline std::vector<DLPair> cuspidal_pairs(const FieldTower& T, GroupKind kind) {
  Field F{&T, 1};
  Field F2{&T, 2};
  unsigned q = F.size();
  unsigned ord = F2.size() - 1;
  std::vector<DLPair> out;
  for (unsigned j = 1; j < ord; ++j) {
    if ((static_cast<uint64_t>(j) * q) % ord == j) continue;  // Frobenius-fixed
    if ((static_cast<uint64_t>(j) * q) % ord < j) continue;   // conjugate seen
    if (kind == GroupKind::PGL &&
        (static_cast<uint64_t>(j) * (q + 1)) % ord != 0)
      continue;  // must be trivial on the base units
    out.push_back(DLPair{q, kind, j, unit_character(T, 2, j)});
  }
  return out;
}

// ----------------------------------------------------------------------
// Lifts along base extension
// ----------------------------------------------------------------------

// The lifted character table at level 2a: theta composed with the norm.
inline std::vector<Scalar> lift_theta(const FieldTower& T, const DLPair& pair,
                                      unsigned a) {
  unsigned n = 2 * a;
  Field Fn{&T, n};
  std::vector<Scalar> out(Fn.size(), Scalar());
  for (unsigned y = 1; y < Fn.size(); ++y) out[y] = pair.theta[T.norm(n, 2, y)];
  return out;
}

// A lift stays cuspidal when its table is not fixed by the Frobenius of its
// own base, that is by y -> y^(q^a).
inline bool lift_cuspidal(const FieldTower& T, const DLPair& pair, unsigned a) {
  unsigned n = 2 * a;
  Field Fn{&T, n};
  std::vector<Scalar> th = lift_theta(T, pair, a);
  for (unsigned y = 1; y < Fn.size(); ++y) {
    unsigned yq = y;
    for (unsigned t = 0; t < a; ++t) yq = T.frobenius(n, yq);
    if (!(th[yq] == th[y])) return true;
  }
  return false;
}

// Value of the lifted (possibly virtual) character at a generator x of the
// degree-2a extension: the sum of the two Frobenius conjugates of theta at
// the norm of x, times the alternating sign of the lift order.  The sign
// pattern is forced by the geometry: the operator attached to a point of
// degree 2a acts on a cuspidal block through the 2a-th power of the dual
// Weyl element, whose square is minus the identity.
inline Scalar lift_value(const FieldTower& T, const DLPair& pair, unsigned a,
                         unsigned x) {
  unsigned n = 2 * a;
  check(T.minimal_level(n, x) == n,
        "the argument must generate the degree-2a extension");
  unsigned z = T.norm(n, 2, x);
  Scalar s = pair.theta[z] + pair.theta[T.frobenius(2, z)];
  return (a % 2 == 1) ? -s : s;
}

// ----------------------------------------------------------------------
// Exact column spans over the scalar field
// ----------------------------------------------------------------------

struct SpanBasis {
  DMat<Scalar> cols;            // m x d, columns independent
  std::vector<unsigned> pivots; // one pivot row per column
};

inline void span_absorb(SpanBasis& b, std::vector<Scalar> v) {
  size_t m = v.size();
  for (size_t j = 0; j < b.pivots.size(); ++j) {
    unsigned p = b.pivots[j];
    if (v[p] == Scalar()) continue;
    Scalar f = v[p] * b.cols[p][j].inverse();
    for (size_t r = 0; r < m; ++r) v[r] -= f * b.cols[r][j];
  }
  size_t p = 0;
  while (p < m && v[p] == Scalar()) ++p;
  if (p == m) return;
  if (b.cols.empty()) b.cols = dmat_zero<Scalar>(m, 0);
  for (size_t r = 0; r < m; ++r) b.cols[r].push_back(v[r]);
  b.pivots.push_back(static_cast<unsigned>(p));
}

// ----------------------------------------------------------------------
// The induced-module oracle
// ----------------------------------------------------------------------

struct CharacterSheet {
  DLPair pair;
  unsigned dim = 0;
  std::vector<Scalar> chi;  // one value per group element
};

class CuspidalOracle {
 public:
  CuspidalOracle(const FieldTower& T, GroupKind kind)
      : T_(&T), F_{&T, 1}, G_(F_, 2, kind) {
    q_ = F_.size();
    for (unsigned d = 2; d < q_; ++d)
      check(q_ % d != 0, "the oracle needs a prime base field");
    pairs_ = cuspidal_pairs(T, kind);
    build_module();
    build_cuspidal_span();
    split_blocks();
    extract_characters();
  }

  const Group& group() const { return G_; }
  const std::vector<DLPair>& pairs() const { return pairs_; }
  const std::vector<CharacterSheet>& sheets() const { return sheets_; }

  // The scalar by which the sum over a conjugacy class acts on one block;
  // hard error if the action is not scalar there.
  Scalar class_sum_scalar(const std::set<unsigned>& cls, size_t which) {
    DMat<Scalar> img = dmat_zero<Scalar>(ncosets_, span_.pivots.size());
    for (unsigned w : cls) {
      for (size_t j = 0; j < span_.pivots.size(); ++j) {
        std::vector<Scalar> col(ncosets_);
        for (unsigned r = 0; r < ncosets_; ++r) col[r] = span_.cols[r][j];
        std::vector<Scalar> out = apply_rho(w, col);
        for (unsigned r = 0; r < ncosets_; ++r) img[r][j] += out[r];
      }
    }
    DMat<Scalar> m = express(img);
    const DMat<Scalar>& Q = blocks_[which];
    DMat<Scalar> mq = dmat_mul(m, Q);
    Scalar tr;
    for (size_t r = 0; r < mq.size(); ++r) tr += mq[r][r];
    Scalar dimv(static_cast<long>(sheets_[which].dim));
    Scalar c = tr * dimv.inverse();
    for (size_t r = 0; r < mq.size(); ++r)
      for (size_t s = 0; s < mq.size(); ++s)
        check(mq[r][s] == c * Q[r][s], "class sum is not scalar on the block");
    return c;
  }

 private:
  // the left translation in induced-module coordinates: a monomial map
  std::vector<Scalar> apply_rho(unsigned h, const std::vector<Scalar>& v) {
    std::vector<Scalar> out(ncosets_, Scalar());
    for (unsigned c = 0; c < ncosets_; ++c) {
      if (v[c] == Scalar()) continue;
      // h * rep_c = rep_c' * u_s, and reading the translated function off
      // at rep_c' picks up the value at rep_c * u_{-s}, hence a +s phase
      unsigned g2 = G_.mul(h, reps_[c]);
      out[cindex_[g2]] += psi_pow(static_cast<long>(texp_[g2])) * v[c];
    }
    return out;
  }

  Scalar psi_pow(long t) { return Scalar::root_of_unity(q_, t); }

  void build_module() {
    unsigned n = G_.size();
    // the unipotent subgroup and the additive exponents of its entries
    std::vector<unsigned> uid(q_);
    for (unsigned t = 0; t < q_; ++t) {
      FMat u = fmat_identity(2);
      u[0][1] = F_.from_int(static_cast<long>(t));
      uid[t] = G_.lookup(Group::flatten(u));
    }
    cindex_.assign(n, n);
    texp_.assign(n, 0);
    for (unsigned g = 0; g < n; ++g) {
      if (cindex_[g] != n) continue;
      unsigned c = reps_.size();
      reps_.push_back(g);
      for (unsigned t = 0; t < q_; ++t) {
        unsigned x = G_.mul(g, uid[t]);
        check(cindex_[x] == n, "unipotent cosets must not overlap");
        cindex_[x] = c;
        texp_[x] = t;
      }
    }
    ncosets_ = reps_.size();
    check(ncosets_ * q_ == n, "unipotent cosets must tile the group");
  }

  void build_cuspidal_span() {
    LinearMap P = cuspidal_projector(G_);
    // coordinates of the projected basis vectors: the value of a twisted
    // function at a coset representative is its coordinate there
    for (unsigned c = 0; c < ncosets_; ++c) {
      std::vector<Scalar> col(ncosets_, Scalar());
      for (unsigned cc = 0; cc < ncosets_; ++cc) {
        Scalar acc;
        for (unsigned t = 0; t < q_; ++t) {
          unsigned x = 0;
          {
            FMat u = fmat_identity(2);
            u[0][1] = F_.from_int(static_cast<long>(t));
            x = G_.mul(reps_[c], G_.lookup(Group::flatten(u)));
          }
          const Scalar& pm = P.m[reps_[cc]][x];
          if (!(pm == Scalar())) acc += pm * psi_pow(-static_cast<long>(t));
        }
        col[cc] = acc;
      }
      span_absorb(span_, col);
    }
    unsigned expect = (q_ - 1) * static_cast<unsigned>(pairs_.size());
    check(span_.pivots.size() == expect,
          "the cuspidal part of the induced module has the wrong dimension");
    // the pivot square of the span basis, inverted once for all solves
    unsigned d = span_.pivots.size();
    DMat<Scalar> sq = dmat_zero<Scalar>(d, d);
    for (unsigned r = 0; r < d; ++r)
      for (unsigned j = 0; j < d; ++j) sq[r][j] = span_.cols[span_.pivots[r]][j];
    pivot_inv_ = dmat_inverse(sq);
  }

  // solve span * M = img exactly; hard error if img leaves the span
  DMat<Scalar> express(const DMat<Scalar>& img) {
    unsigned d = span_.pivots.size();
    unsigned k = img.empty() ? 0 : img[0].size();
    DMat<Scalar> rows = dmat_zero<Scalar>(d, k);
    for (unsigned r = 0; r < d; ++r)
      for (unsigned j = 0; j < k; ++j) rows[r][j] = img[span_.pivots[r]][j];
    DMat<Scalar> m = dmat_mul(pivot_inv_, rows);
    DMat<Scalar> back = dmat_mul(span_.cols, m);
    for (unsigned r = 0; r < ncosets_; ++r)
      for (unsigned j = 0; j < k; ++j)
        check(back[r][j] == img[r][j], "image leaves the cuspidal span");
    return m;
  }

  DMat<Scalar> span_matrix(unsigned h) {
    unsigned d = span_.pivots.size();
    DMat<Scalar> img = dmat_zero<Scalar>(ncosets_, d);
    for (unsigned j = 0; j < d; ++j) {
      std::vector<Scalar> col(ncosets_);
      for (unsigned r = 0; r < ncosets_; ++r) col[r] = span_.cols[r][j];
      std::vector<Scalar> out = apply_rho(h, col);
      for (unsigned r = 0; r < ncosets_; ++r) img[r][j] = out[r];
    }
    return express(img);
  }

  void split_blocks() {
    unsigned d = span_.pivots.size();
    if (pairs_.size() == 1) {
      blocks_.push_back(dmat_identity<Scalar>(d));
      return;
    }
    // find one elliptic class whose candidate eigenvalues separate pairs
    for (const auto& D : T_->divisors_of_degree(2)) {
      unsigned x = D.rep;
      unsigned cid = companion_id(G_, *T_, x);
      std::set<unsigned> cls = conjugacy_class_ids(G_, cid);
      std::vector<Scalar> cand;
      Scalar count(static_cast<long>(cls.size()));
      Scalar dims(static_cast<long>(q_ - 1));
      for (const DLPair& p : pairs_)
        cand.push_back(count * (-(p.theta[x] + p.theta[T_->frobenius(2, x)])) *
                       dims.inverse());
      bool distinct = true;
      for (size_t a = 0; a < cand.size() && distinct; ++a)
        for (size_t b = a + 1; b < cand.size(); ++b)
          if (cand[a] == cand[b]) {
            distinct = false;
            break;
          }
      if (!distinct) continue;
      // the class-sum matrix on the span, then one Lagrange idempotent per
      // candidate eigenvalue
      DMat<Scalar> img = dmat_zero<Scalar>(ncosets_, d);
      for (unsigned w : cls) {
        for (unsigned j = 0; j < d; ++j) {
          std::vector<Scalar> col(ncosets_);
          for (unsigned r = 0; r < ncosets_; ++r) col[r] = span_.cols[r][j];
          std::vector<Scalar> out = apply_rho(w, col);
          for (unsigned r = 0; r < ncosets_; ++r) img[r][j] += out[r];
        }
      }
      DMat<Scalar> m = express(img);
      DMat<Scalar> eye = dmat_identity<Scalar>(d);
      DMat<Scalar> total = dmat_zero<Scalar>(d, d);
      for (size_t a = 0; a < pairs_.size(); ++a) {
        DMat<Scalar> Q = eye;
        for (size_t b = 0; b < pairs_.size(); ++b) {
          if (b == a) continue;
          DMat<Scalar> f = m;
          for (unsigned r = 0; r < d; ++r) f[r][r] -= cand[b];
          Q = dmat_mul(Q, f);
          Scalar s = (cand[a] - cand[b]).inverse();
          for (unsigned r = 0; r < d; ++r)
            for (unsigned cc = 0; cc < d; ++cc) Q[r][cc] *= s;
        }
        // idempotent, eigen-relation, and rank checks
        DMat<Scalar> qq = dmat_mul(Q, Q);
        DMat<Scalar> mq = dmat_mul(m, Q);
        Scalar tr;
        for (unsigned r = 0; r < d; ++r) {
          tr += Q[r][r];
          for (unsigned cc = 0; cc < d; ++cc) {
            check(qq[r][cc] == Q[r][cc], "block cut is not idempotent");
            check(mq[r][cc] == cand[a] * Q[r][cc],
                  "block is not an eigenspace of the class sum");
            total[r][cc] += Q[r][cc];
          }
        }
        check(tr == Scalar(static_cast<long>(q_ - 1)),
              "block has the wrong dimension");
        blocks_.push_back(Q);
      }
      for (unsigned r = 0; r < d; ++r)
        for (unsigned cc = 0; cc < d; ++cc)
          check(total[r][cc] == eye[r][cc], "blocks do not fill the span");
      return;
    }
    check(false, "no elliptic class separates the cuspidal pairs");
  }

  void extract_characters() {
    for (size_t a = 0; a < pairs_.size(); ++a) {
      CharacterSheet sh;
      sh.pair = pairs_[a];
      sh.dim = q_ - 1;
      sh.chi.assign(G_.size(), Scalar());
      sheets_.push_back(std::move(sh));
    }
    unsigned d = span_.pivots.size();
    for (unsigned h = 0; h < G_.size(); ++h) {
      DMat<Scalar> m = span_matrix(h);
      for (size_t a = 0; a < pairs_.size(); ++a) {
        Scalar tr;
        for (unsigned r = 0; r < d; ++r)
          for (unsigned cc = 0; cc < d; ++cc) tr += m[r][cc] * blocks_[a][cc][r];
        sheets_[a].chi[h] = tr;
      }
    }
    for (const CharacterSheet& sh : sheets_)
      check(sh.chi[G_.identity()] == Scalar(static_cast<long>(sh.dim)),
            "character degree mismatch");
  }

  const FieldTower* T_;
  Field F_;
  Group G_;
  unsigned q_ = 2;
  std::vector<DLPair> pairs_;
  std::vector<unsigned> reps_;     // one representative per unipotent coset
  std::vector<unsigned> cindex_;   // group element -> coset index
  std::vector<unsigned> texp_;     // group element -> additive exponent
  unsigned ncosets_ = 0;
  SpanBasis span_;                 // basis of the cuspidal part
  DMat<Scalar> pivot_inv_;
  std::vector<DMat<Scalar>> blocks_;  // one idempotent per pair
  std::vector<CharacterSheet> sheets_;
};

// ----------------------------------------------------------------------
// Cuspidal blocks on the trivial stratum
// ----------------------------------------------------------------------

// The central projector of one cuspidal character acting on functions on
// the trivial stratum through the translation action by constants, and the
// extraction of the scalar by which a divisor operator acts on its image.
class CuspidalBlock {
 public:
  CuspidalBlock(BundleModel& V, LoopModel& A, const CharacterSheet& sheet)
      : V_(&V), sheet_(sheet) {
    const Group& G = V.finite_group();
    check(sheet.chi.size() == G.size(), "sheet belongs to another group");
    zero_.assign(V.rank(), 0);
    npts_ = V.stratum(zero_).tp.size();
    check(npts_ == G.size(), "the trivial stratum must match the group");
    // translation permutations of the trivial stratum
    std::vector<std::vector<unsigned>> perm(G.size(),
                                            std::vector<unsigned>(npts_));
    for (unsigned h = 0; h < G.size(); ++h) {
      HeckeElement a = A.delta(A.key_of_const(h));
      for (unsigned pt = 0; pt < npts_; ++pt) {
        VElement in;
        in.add_to(BundleKey{zero_, pt}, Scalar(1L));
        VElement out = V.act(A, a, in, false);
        check(out.c.size() == 1 && out.c.begin()->second == Scalar(1L) &&
                  out.c.begin()->first.lam == zero_,
              "constants must permute the trivial stratum");
        perm[h][pt] = out.c.begin()->first.pt;
      }
    }
    Scalar norm = Scalar(static_cast<long>(sheet.dim)) *
                  Scalar(static_cast<long>(G.size())).inverse();
    proj_.resize(npts_);
    for (unsigned pt = 0; pt < npts_; ++pt) {
      VElement p;
      for (unsigned h = 0; h < G.size(); ++h)
        p.add_to(BundleKey{zero_, perm[h][pt]}, norm * sheet.chi[G.inv(h)]);
      proj_[pt] = p;
    }
    // the block trace equals the square of the dimension
    Scalar tr;
    for (unsigned pt = 0; pt < npts_; ++pt) {
      auto it = proj_[pt].c.find(BundleKey{zero_, pt});
      if (it != proj_[pt].c.end()) tr += it->second;
    }
    block_trace_ = Scalar(static_cast<long>(sheet.dim) *
                          static_cast<long>(sheet.dim));
    check(tr == block_trace_, "projector trace must be the squared dimension");
  }

  const VElement& projection(unsigned pt) const { return proj_[pt]; }
  const Scalar& block_trace() const { return block_trace_; }

  VElement project(const VElement& v) const {
    VElement out;
    for (const auto& [k, c] : v.c) {
      check(k.lam == zero_, "projection lives on the trivial stratum");
      for (const auto& [kk, w] : proj_[k.pt].c) out.add_to(kk, c * w);
    }
    return out;
  }

  // The scalar by which the bare correspondence sum of the operator acts on
  // the block.  Either every image vanishes on the trivial stratum (the
  // scalar is zero and the image lives elsewhere), or every image lies
  // entirely on the trivial stratum and is an exact multiple of the
  // projection; mixing the two is a hard error.
  Scalar eta_raw(DivisorHecke& op) {
    std::vector<VElement> on(npts_);
    bool any_on = false, any_off = false;
    Scalar num;
    for (unsigned pt = 0; pt < npts_; ++pt) {
      VElement w = op.apply_raw(proj_[pt]);
      VElement w0;
      for (const auto& [k, c] : w.c) {
        if (k.lam == zero_)
          w0.add_to(k, c);
        else
          any_off = true;
      }
      if (!w0.c.empty()) any_on = true;
      auto it = w0.c.find(BundleKey{zero_, pt});
      if (it != w0.c.end()) num += it->second;
      on[pt] = std::move(w0);
    }
    check(!(any_on && any_off),
          "operator mixes the cuspidal block with other strata");
    Scalar eta = num * block_trace_.inverse();
    for (unsigned pt = 0; pt < npts_; ++pt)
      check(on[pt] == velement_scale(eta, proj_[pt]),
            "operator is not scalar on the cuspidal block");
    return eta;
  }

 private:
  BundleModel* V_;
  CharacterSheet sheet_;
  std::vector<int> zero_;
  unsigned npts_ = 0;
  std::vector<VElement> proj_;
  Scalar block_trace_;
};

}  // namespace hp1
