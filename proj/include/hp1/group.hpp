#pragma once

// Finite matrix groups GL(N) and PGL(N) over a tower level, with full
// element enumeration in lexicographic entry order; dominant coweights and
// their windows; parabolic data (P, U, M, and opposites); twisted product
// spaces (G x G)/(U x U^{+-})dM; and elliptic conjugacy classes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hp1/error.hpp"
#include "hp1/fq.hpp"
#include "hp1/matrix.hpp"

namespace hp1 {

// ------------------------------ coweights ---------------------------------

// Dominant (weakly decreasing) integer tuples.  The window order is the
// partial-sum order WITHOUT requiring equal totals; the strict order within
// one degree adds the equal-total condition.
inline bool coweight_dominant(const std::vector<int>& v) {
  for (size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] < v[i + 1]) return false;
  return true;
}

inline int coweight_total(const std::vector<int>& v) {
  return std::accumulate(v.begin(), v.end(), 0);
}

inline bool coweight_leq_weak(const std::vector<int>& mu,
                              const std::vector<int>& lam) {
  check(mu.size() == lam.size(), "coweight rank mismatch");
  int pm = 0, pl = 0;
  for (size_t i = 0; i < mu.size(); ++i) {
    pm += mu[i];
    pl += lam[i];
    if (pm > pl) return false;
  }
  return true;
}

inline bool coweight_leq_strict(const std::vector<int>& mu,
                                const std::vector<int>& lam) {
  return coweight_leq_weak(mu, lam) && coweight_total(mu) == coweight_total(lam);
}

// All nonnegative dominant mu <= lam in the window order, sorted
// lexicographically (deterministic basis order).
inline std::vector<std::vector<int>> coweight_window(const std::vector<int>& lam) {
  check(coweight_dominant(lam), "window needs a dominant coweight");
  for (int x : lam) check(x >= 0, "window needs a nonnegative coweight");
  size_t n = lam.size();
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  // enumerate weakly decreasing nonnegative tuples bounded by lam[0]
  auto rec = [&](auto&& self, size_t pos, int maxv) -> void {
    if (pos == n) {
      if (coweight_leq_weak(cur, lam)) out.push_back(cur);
      return;
    }
    for (int v = 0; v <= maxv; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v);
    }
  };
  rec(rec, 0, lam[0]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string coweight_str(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

// PGL representative: shift so the least entry is zero.
inline std::vector<int> coweight_pgl_rep(std::vector<int> v) {
  int m = *std::min_element(v.begin(), v.end());
  for (int& x : v) x -= m;
  return v;
}

// ------------------------------- groups -----------------------------------

enum class GroupKind { GL, PGL };

class Group {
 public:
  Group(Field F, unsigned N, GroupKind kind, uint64_t budget = 1000000)
      : F_(F), N_(N), kind_(kind) {
    uint64_t Q = F.size();
    uint64_t gl_order = 1;
    for (unsigned j = 0; j < N; ++j) {
      uint64_t f = 1;
      for (unsigned l = 0; l < N; ++l) f *= Q;  // q^N
      uint64_t sub = 1;
      for (unsigned l = 0; l < j; ++l) sub *= Q;  // q^j
      gl_order *= (f - sub);
    }
    uint64_t target = kind == GroupKind::PGL ? gl_order / (Q - 1) : gl_order;
    check(target <= budget, "group enumeration budget exceeded; order " +
                                std::to_string(target));

    uint64_t total = 1;
    for (unsigned i = 0; i < N * N; ++i) {
      total *= Q;
      check(total <= (uint64_t(1) << 40), "entry enumeration too large");
    }
    for (uint64_t code = 0; code < total; ++code) {
      std::vector<unsigned> flat(N * N);
      uint64_t c = code;
      for (size_t idx = 0; idx < flat.size(); ++idx) {
        flat[idx] = static_cast<unsigned>(c % Q);
        c /= Q;
      }
      // the code's low digits are the LAST entries in row-major order, so
      // reverse to make enumeration lexicographic on (e_00, e_01, ...)
      std::reverse(flat.begin(), flat.end());
      if (kind == GroupKind::PGL && !is_normalized_(flat)) continue;
      if (fmat_det(F_, unflatten(flat)) == 0) continue;
      index_.emplace(flat, static_cast<unsigned>(elems_.size()));
      elems_.push_back(std::move(flat));
    }
    check(elems_.size() == target, "group order mismatch against the formula");
    id_ = lookup(flatten(fmat_identity(N)));
  }

  const Field& field() const { return F_; }
  unsigned rank() const { return N_; }
  GroupKind kind() const { return kind_; }
  unsigned size() const { return static_cast<unsigned>(elems_.size()); }
  unsigned identity() const { return id_; }

  const std::vector<unsigned>& flat(unsigned id) const { return elems_[id]; }
  FMat mat(unsigned id) const { return unflatten(elems_[id]); }

  FMat unflatten(const std::vector<unsigned>& flat) const {
    FMat m(N_, std::vector<unsigned>(N_));
    for (unsigned i = 0; i < N_; ++i)
      for (unsigned j = 0; j < N_; ++j) m[i][j] = flat[i * N_ + j];
    return m;
  }
  static std::vector<unsigned> flatten(const FMat& m) {
    std::vector<unsigned> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    return flat;
  }

  // Scalar normalization for PGL: scale so the first nonzero entry of the
  // first column is 1.  Idempotent.
  std::vector<unsigned> normalize(std::vector<unsigned> flat) const {
    if (kind_ == GroupKind::GL) return flat;
    unsigned pivot = 0;
    for (unsigned i = 0; i < N_; ++i) {
      if (flat[i * N_] != 0) {
        pivot = flat[i * N_];
        break;
      }
    }
    check(pivot != 0, "singular matrix cannot be normalized");
    if (pivot == 1) return flat;
    unsigned s = F_.inv(pivot);
    for (unsigned& x : flat) x = F_.mul(s, x);
    return flat;
  }

  unsigned lookup(const std::vector<unsigned>& flat) const {
    auto it = index_.find(normalize(flat));
    check(it != index_.end(), "element not in the group");
    return it->second;
  }

  unsigned mul(unsigned a, unsigned b) const {
    return lookup(flatten(fmat_mul(F_, mat(a), mat(b))));
  }
  unsigned inv(unsigned a) const {
    return lookup(flatten(fmat_inverse(F_, mat(a))));
  }
  unsigned conj(unsigned g, unsigned x) const {  // g x g^{-1}
    return mul(mul(g, x), inv(g));
  }

 private:
  Field F_;
  unsigned N_;
  GroupKind kind_;
  std::vector<std::vector<unsigned>> elems_;
  std::map<std::vector<unsigned>, unsigned> index_;
  unsigned id_ = 0;

  bool is_normalized_(const std::vector<unsigned>& flat) const {
    for (unsigned i = 0; i < N_; ++i) {
      unsigned v = flat[i * N_];
      if (v != 0) return v == 1;
    }
    return false;  // singular anyway
  }
};

// ---------------------------- coset spaces --------------------------------

// The quotient G/H for a subgroup given by its element list (right
// translation orbits).  Cosets are numbered by their least element.
struct CosetSpace {
  const Group* G = nullptr;
  std::vector<unsigned> rep;        // coset -> least element id
  std::vector<uint32_t> coset_of;   // element id -> coset index

  unsigned size() const { return static_cast<unsigned>(rep.size()); }
};

inline CosetSpace coset_space(const Group& G, const std::vector<unsigned>& sub) {
  CosetSpace X;
  X.G = &G;
  X.coset_of.assign(G.size(), UINT32_MAX);
  for (unsigned g = 0; g < G.size(); ++g) {
    if (X.coset_of[g] != UINT32_MAX) continue;
    unsigned id = static_cast<unsigned>(X.rep.size());
    X.rep.push_back(g);
    for (unsigned h : sub) X.coset_of[G.mul(g, h)] = id;
    check(X.coset_of[g] == id, "subgroup list does not contain the identity");
  }
  return X;
}

// ---------------------------- parabolic data ------------------------------

struct ParabolicDatum {
  const Group* G = nullptr;
  std::vector<int> lambda;        // dominant
  std::vector<unsigned> blocks;   // multiplicities of distinct values
  std::vector<unsigned> P, U, M, Pm, Um;  // element lists (sorted ids)

  // Block id of a row/column index.
  std::vector<unsigned> block_of;

  bool in_upper(const FMat& m) const {
    for (unsigned i = 0; i < m.size(); ++i)
      for (unsigned j = 0; j < m.size(); ++j)
        if (block_of[i] > block_of[j] && m[i][j]) return false;
    return true;
  }
  bool in_lower(const FMat& m) const {
    for (unsigned i = 0; i < m.size(); ++i)
      for (unsigned j = 0; j < m.size(); ++j)
        if (block_of[i] < block_of[j] && m[i][j]) return false;
    return true;
  }
  bool in_levi(const FMat& m) const { return in_upper(m) && in_lower(m); }

  // Levi projection: zero out everything off the block diagonal.  Only
  // meaningful on P (resp. P^-).
  unsigned project(unsigned g) const {
    FMat m = G->mat(g);
    for (unsigned i = 0; i < m.size(); ++i)
      for (unsigned j = 0; j < m.size(); ++j)
        if (block_of[i] != block_of[j]) m[i][j] = 0;
    return G->lookup(Group::flatten(m));
  }
};

inline ParabolicDatum parabolic_datum(const Group& G, std::vector<int> lambda) {
  check(coweight_dominant(lambda), "parabolic datum needs a dominant coweight");
  check(lambda.size() == G.rank(), "coweight rank mismatch");
  ParabolicDatum D;
  D.G = &G;
  D.lambda = lambda;
  D.block_of.resize(G.rank());
  unsigned b = 0;
  for (unsigned i = 0; i < G.rank(); ++i) {
    if (i > 0 && lambda[i] != lambda[i - 1]) ++b;
    D.block_of[i] = b;
    if (D.blocks.size() <= b) D.blocks.push_back(0);
    D.blocks[b]++;
  }
  for (unsigned g = 0; g < G.size(); ++g) {
    FMat m = G.mat(g);
    bool up = D.in_upper(m), lo = D.in_lower(m);
    if (up) D.P.push_back(g);
    if (lo) D.Pm.push_back(g);
    if (up && lo) D.M.push_back(g);
    // unipotent radicals: block-triangular with identity block diagonal
    bool diag_id = true;
    for (unsigned i = 0; i < G.rank() && diag_id; ++i)
      for (unsigned j = 0; j < G.rank() && diag_id; ++j)
        if (D.block_of[i] == D.block_of[j] && m[i][j] != (i == j ? 1u : 0u))
          diag_id = false;
    if (up && diag_id) D.U.push_back(g);
    if (lo && diag_id) D.Um.push_back(g);
  }
  check(uint64_t(D.P.size()) == uint64_t(D.U.size()) * D.M.size(),
        "parabolic order identity |P| = |U||M| failed");
  check(D.U.size() == D.Um.size(), "opposite radicals differ in size");
  return D;
}

// -------------------------- twisted product spaces -------------------------

// Orbits of the right action of H = (U x U^{+-}) . diag(M) on G x G, with
// the least pair in each orbit as its canonical representative.
struct TwistedProduct {
  const ParabolicDatum* D = nullptr;
  bool same_sign = false;  // (+,+) if true, else (+,-)
  std::vector<std::pair<unsigned, unsigned>> reps;
  std::vector<uint32_t> point_of;  // g1 * |G| + g2 -> point id

  unsigned size() const { return static_cast<unsigned>(reps.size()); }
  unsigned point(unsigned g1, unsigned g2) const {
    return point_of[size_t(g1) * D->G->size() + g2];
  }
  // left action of (a, b)
  unsigned act(unsigned a, unsigned b, unsigned pt) const {
    const Group& G = *D->G;
    auto [g1, g2] = reps[pt];
    return point(G.mul(a, g1), G.mul(b, g2));
  }
};

inline TwistedProduct twisted_product(const ParabolicDatum& D, bool same_sign) {
  const Group& G = *D.G;
  TwistedProduct T;
  T.D = &D;
  T.same_sign = same_sign;
  size_t total = size_t(G.size()) * G.size();
  T.point_of.assign(total, UINT32_MAX);
  const std::vector<unsigned>& U2 = same_sign ? D.U : D.Um;
  for (size_t seed = 0; seed < total; ++seed) {
    if (T.point_of[seed] != UINT32_MAX) continue;
    unsigned id = static_cast<unsigned>(T.reps.size());
    unsigned s1 = static_cast<unsigned>(seed / G.size());
    unsigned s2 = static_cast<unsigned>(seed % G.size());
    T.reps.emplace_back(s1, s2);
    // closure under right multiplication by (u m, u' m)
    std::vector<std::pair<unsigned, unsigned>> stack{{s1, s2}};
    T.point_of[seed] = id;
    auto visit = [&](unsigned a, unsigned b) {
      size_t key = size_t(a) * G.size() + b;
      if (T.point_of[key] != UINT32_MAX) {
        check(T.point_of[key] == id, "orbit collision");
        return;
      }
      T.point_of[key] = id;
      stack.emplace_back(a, b);
    };
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      for (unsigned u : D.U) visit(G.mul(a, u), b);
      for (unsigned u : U2) visit(a, G.mul(b, u));
      for (unsigned m : D.M) visit(G.mul(a, m), G.mul(b, m));
    }
  }
  uint64_t expected = (uint64_t(G.size()) * G.size()) /
                      (uint64_t(D.U.size()) * U2.size() * D.M.size());
  check(T.reps.size() == expected, "twisted product census mismatch");
  return T;
}

// --------------------------- conjugacy classes ----------------------------

struct ConjClass {
  unsigned rep = 0;
  std::vector<unsigned> members;  // sorted ids
};

// Companion-matrix class of a degree-N element of the field tower.
inline ConjClass elliptic_class(const Group& G, const FieldTower& T,
                                unsigned level, unsigned x) {
  check(level == G.rank(), "elliptic class needs degree equal to the rank");
  check(&T == G.field().T && G.field().level == 1,
        "elliptic classes are built for groups over the base field");
  check(T.minimal_level(level, x) == level, "element lies in a proper subfield");
  auto mp = T.min_poly(level, x);  // monic, degree N, base-field coefficients
  unsigned N = G.rank();
  FMat comp = fmat_zero(N, N);
  const Field& F = G.field();
  for (unsigned i = 0; i + 1 < N; ++i) comp[i + 1][i] = 1;
  for (unsigned i = 0; i < N; ++i) comp[i][N - 1] = F.neg(mp[i]);
  ConjClass C;
  C.rep = G.lookup(Group::flatten(comp));
  std::vector<bool> seen(G.size(), false);
  for (unsigned g = 0; g < G.size(); ++g) {
    unsigned y = G.conj(g, C.rep);
    if (!seen[y]) {
      seen[y] = true;
      C.members.push_back(y);
    }
  }
  std::sort(C.members.begin(), C.members.end());
  return C;
}

}  // namespace hp1
