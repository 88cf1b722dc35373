#pragma once

// Finitely supported functions on finite sets (groups, coset spaces, twisted
// products) with values in the exact scalar ring; convolution on group
// functions; the intertwining correspondence between opposite coset spaces;
// and the projector onto the two-sidedly cuspidal part of Fn(G).

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hp1/error.hpp"
#include "hp1/group.hpp"
#include "hp1/matrix.hpp"
#include "hp1/scalar.hpp"

namespace hp1 {

// A handle naming the finite set a function lives on: object identity plus
// point count.
struct FnBase {
  const void* obj = nullptr;
  unsigned size = 0;
  friend bool operator==(const FnBase&, const FnBase&) = default;
};

inline FnBase base_of(const Group& G) { return {&G, G.size()}; }
inline FnBase base_of(const CosetSpace& X) { return {&X, X.size()}; }
inline FnBase base_of(const TwistedProduct& T) { return {&T, T.size()}; }

struct Fn {
  FnBase base;
  std::map<unsigned, Scalar> c;  // zero values pruned

  Scalar get(unsigned i) const {
    auto it = c.find(i);
    return it == c.end() ? Scalar(0) : it->second;
  }
  void add_to(unsigned i, const Scalar& v) {
    check(i < base.size, "point outside the base set");
    auto it = c.find(i);
    if (it == c.end()) {
      if (!v.is_zero()) c.emplace(i, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) c.erase(it);
  }
  void set(unsigned i, const Scalar& v) {
    check(i < base.size, "point outside the base set");
    if (v.is_zero())
      c.erase(i);
    else
      c.insert_or_assign(i, v);
  }
  friend bool operator==(const Fn&, const Fn&) = default;
};

inline Fn fn_zero(FnBase base) { return Fn{base, {}}; }

inline Fn fn_delta(FnBase base, unsigned i, const Scalar& v = Scalar(1)) {
  Fn f = fn_zero(base);
  f.set(i, v);
  return f;
}

inline Fn fn_add(const Fn& a, const Fn& b) {
  check(a.base == b.base, "function base mismatch");
  Fn r = a;
  for (const auto& [i, v] : b.c) r.add_to(i, v);
  return r;
}

inline Fn fn_scale(const Scalar& s, const Fn& a) {
  Fn r = fn_zero(a.base);
  if (s.is_zero()) return r;
  for (const auto& [i, v] : a.c) r.set(i, s * v);
  return r;
}

// Convolution with counting measure: (f1 * f2)(g) = sum_h f1(h) f2(h^{-1} g).
inline Fn convolve(const Group& G, const Fn& f1, const Fn& f2) {
  check(f1.base == base_of(G) && f2.base == base_of(G),
        "convolution needs two functions on the same group");
  Fn r = fn_zero(f1.base);
  for (const auto& [h, v1] : f1.c)
    for (const auto& [k, v2] : f2.c) r.add_to(G.mul(h, k), v1 * v2);
  return r;
}

// ------------------------------ linear maps --------------------------------

struct LinearMap {
  FnBase dom, cod;
  DMat<Scalar> m;  // cod.size rows, dom.size columns
};

inline LinearMap linmap_zero(FnBase dom, FnBase cod) {
  return LinearMap{dom, cod, dmat_zero<Scalar>(cod.size, dom.size)};
}

inline LinearMap linmap_identity(FnBase base) {
  return LinearMap{base, base, dmat_identity<Scalar>(base.size)};
}

inline Fn linmap_apply(const LinearMap& L, const Fn& f) {
  check(f.base == L.dom, "linear map domain mismatch");
  Fn r = fn_zero(L.cod);
  for (const auto& [j, v] : f.c)
    for (unsigned i = 0; i < L.cod.size; ++i) r.add_to(i, L.m[i][j] * v);
  return r;
}

inline LinearMap linmap_compose(const LinearMap& a, const LinearMap& b) {
  check(b.cod == a.dom, "linear map composition mismatch");
  return LinearMap{b.dom, a.cod, dmat_mul(a.m, b.m)};
}

inline size_t linmap_rank(const LinearMap& L) { return dmat_rank(L.m); }

// Row-major structured text export: one row per line, scalars spelled out.
inline std::string linmap_text(const LinearMap& L) {
  std::ostringstream os;
  os << L.cod.size << " x " << L.dom.size << "\n";
  for (unsigned i = 0; i < L.cod.size; ++i) {
    for (unsigned j = 0; j < L.dom.size; ++j) {
      if (j) os << " ";
      os << L.m[i][j].str();
    }
    os << "\n";
  }
  return os.str();
}

// ------------------------ intertwining correspondence ----------------------

// The correspondence map Fn(G/U^-) -> Fn(G/U) summing over the graph
// {(hU, hU^-)}: entry between cosets aU^- and gU counts h with hU = gU and
// hU^- = aU^-.  The coset spaces are returned alongside the matrix.
struct Correspondence {
  CosetSpace XU;   // codomain points G/U
  CosetSpace XUm;  // domain points G/U^-
  LinearMap map;
};

inline Correspondence radon(const ParabolicDatum& D) {
  const Group& G = *D.G;
  Correspondence R;
  if (D.blocks.size() == 1) {
    // degenerate datum: the whole group is one block and both coset spaces
    // collapse; the correspondence sum counts every element of the group
    R.XU = coset_space(G, D.P);
    R.XUm = coset_space(G, D.Pm);
    R.map = LinearMap{base_of(R.XUm), base_of(R.XU),
                      {{Scalar(long(G.size()))}}};
    return R;
  }
  R.XU = coset_space(G, D.U);
  R.XUm = coset_space(G, D.Um);
  R.map = linmap_zero(base_of(R.XUm), base_of(R.XU));
  for (unsigned h = 0; h < G.size(); ++h) {
    unsigned row = R.XU.coset_of[h];
    unsigned col = R.XUm.coset_of[h];
    R.map.m[row][col] = R.map.m[row][col] + Scalar(1);
  }
  return R;
}

// Permutation matrix of left translation by g on a coset space.
inline LinearMap left_translation(const Group& G, const CosetSpace& X,
                                  unsigned g) {
  LinearMap L = linmap_zero(base_of(X), base_of(X));
  for (unsigned c = 0; c < X.size(); ++c)
    L.m[X.coset_of[G.mul(g, X.rep[c])]][c] = Scalar(1);
  return L;
}

// Permutation matrix of the right translation xH -> xmH (m must normalize
// the subgroup defining X for this to be well defined).
inline LinearMap right_translation(const Group& G, const CosetSpace& X,
                                   unsigned m) {
  LinearMap L = linmap_zero(base_of(X), base_of(X));
  for (unsigned c = 0; c < X.size(); ++c)
    L.m[X.coset_of[G.mul(X.rep[c], m)]][c] = Scalar(1);
  return L;
}

// --------------------------- cuspidal projector ----------------------------

// Projector onto {f : sum_{u in U_P} f(g u h) = 0 for every proper standard
// parabolic P and all g, h}.  Checking the maximal parabolics suffices: for
// Q inside P the radical factors as U_Q = U_P (U_Q cap M_P), so the R_Q
// condition is a sum of R_P conditions over translated arguments.
//
// The complement is spanned by the indicator functions 1_{g U_P h}; it is
// the orthogonal complement of the cut-out subspace under the standard
// pairing, which is positive definite over the rationals, so the two spaces
// are genuinely complementary and the projector is defined over Q.
inline LinearMap cuspidal_projector(const Group& G) {
  unsigned n = G.size();
  if (G.rank() == 1) return linmap_identity(base_of(G));

  // rref-maintained basis of the span W of the constraint rows
  DMat<Rat> wbasis;
  std::vector<size_t> wpivot;  // pivot column of each basis row
  auto absorb = [&](std::vector<Rat> row) {
    for (size_t r = 0; r < wbasis.size(); ++r) {
      if (row[wpivot[r]] == 0) continue;
      Rat f = row[wpivot[r]];
      for (unsigned j = 0; j < n; ++j) row[j] -= f * wbasis[r][j];
    }
    size_t p = 0;
    while (p < n && row[p] == 0) ++p;
    if (p == n) return;
    Rat lead = row[p];
    for (unsigned j = 0; j < n; ++j) row[j] /= lead;
    for (size_t r = 0; r < wbasis.size(); ++r) {
      if (wbasis[r][p] == 0) continue;
      Rat f = wbasis[r][p];
      for (unsigned j = 0; j < n; ++j) wbasis[r][j] -= f * row[j];
    }
    wbasis.push_back(std::move(row));
    wpivot.push_back(p);
  };

  for (unsigned a = 1; a < G.rank(); ++a) {
    std::vector<int> lambda(G.rank(), 0);
    for (unsigned i = 0; i < a; ++i) lambda[i] = 1;
    ParabolicDatum D = parabolic_datum(G, lambda);
    CosetSpace XU = coset_space(G, D.U);
    // rows indexed by (gU, U h); entry at x is 1 iff x lies in g U h
    for (unsigned ci = 0; ci < XU.size(); ++ci) {
      unsigned g = XU.rep[ci];
      for (unsigned cj = 0; cj < XU.size(); ++cj) {
        unsigned hinv = XU.rep[cj];  // right cosets U h = (h^{-1} U)^{-1}
        std::vector<Rat> row(n, 0);
        for (unsigned u : D.U) row[G.mul(G.mul(g, u), G.inv(hinv))] = 1;
        absorb(std::move(row));
      }
    }
  }

  // V = W-perp: kernel of the matrix whose rows are the W basis
  DMat<Rat> vbasis = dmat_kernel(wbasis);
  check(vbasis.size() + wbasis.size() == n,
        "cuspidal subspace and its complement do not fill the space");

  // projector onto V along W: columns of [B_V | 0] [B_V | B_W]^{-1}
  DMat<Rat> basis = dmat_zero<Rat>(n, n);
  for (unsigned j = 0; j < vbasis.size(); ++j)
    for (unsigned i = 0; i < n; ++i) basis[i][j] = vbasis[j][i];
  for (unsigned j = 0; j < wbasis.size(); ++j)
    for (unsigned i = 0; i < n; ++i)
      basis[i][vbasis.size() + j] = wbasis[j][i];
  DMat<Rat> binv = dmat_inverse(basis);
  DMat<Rat> keep = dmat_zero<Rat>(n, n);
  for (unsigned j = 0; j < vbasis.size(); ++j)
    for (unsigned i = 0; i < n; ++i) keep[i][j] = vbasis[j][i];
  DMat<Rat> proj = dmat_mul(keep, binv);

  LinearMap P = linmap_zero(base_of(G), base_of(G));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j)
      if (proj[i][j] != 0) P.m[i][j] = Scalar(proj[i][j]);
  return P;
}

// Permutation matrices of the two translation actions on Fn(G):
// (L_g f)(x) = f(g^{-1} x) and (R_g f)(x) = f(x g).
inline LinearMap group_left_translation(const Group& G, unsigned g) {
  LinearMap L = linmap_zero(base_of(G), base_of(G));
  for (unsigned x = 0; x < G.size(); ++x) L.m[G.mul(g, x)][x] = Scalar(1);
  return L;
}

inline LinearMap group_right_translation(const Group& G, unsigned g) {
  LinearMap L = linmap_zero(base_of(G), base_of(G));
  unsigned gi = G.inv(g);
  for (unsigned x = 0; x < G.size(); ++x) L.m[G.mul(x, gi)][x] = Scalar(1);
  return L;
}

}  // namespace hp1
