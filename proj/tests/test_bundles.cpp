#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hp1/bundles.hpp"

using namespace hp1;

namespace {

// deterministic pseudo-random stream
struct Rng {
  unsigned x;
  explicit Rng(unsigned seed) : x(seed) {}
  unsigned next(unsigned mod) {
    x = x * 1103515245u + 12345u;
    return (x >> 8) % mod;
  }
};

FMat random_invertible(const Field& F, unsigned N, Rng& rng) {
  FMat c = fmat_zero(N, N);
  do {
    for (unsigned i = 0; i < N; ++i)
      for (unsigned j = 0; j < N; ++j)
        c[i][j] = rng.next(static_cast<unsigned>(F.size()));
  } while (fmat_det(F, c) == 0);
  return c;
}

// elementary matrix 1 + c z^d E_{ij} with i != j; d may be negative
LMat transvection(unsigned N, unsigned i, unsigned j, unsigned c, int d) {
  unsigned s = d < 0 ? static_cast<unsigned>(-d) : 0u;
  PolyMat p = pmat_zero(N);
  for (unsigned r = 0; r < N; ++r) {
    FPoly& e = p.at(r, r);
    e.assign(s + 1, 0);
    e[s] = 1;
  }
  FPoly& e = p.at(i, j);
  const unsigned dd = static_cast<unsigned>(d + static_cast<int>(s));
  if (e.size() < dd + 1) e.resize(dd + 1, 0);
  e[dd] = c;
  return lmat_normalize(LMat{-static_cast<int>(s), p});
}

// invertible Laurent matrix: constant * z^mu * mixed-degree transvections
LMat random_presentation(const Field& F, unsigned N, const std::vector<int>& mu,
                         unsigned moves, Rng& rng) {
  const unsigned q = static_cast<unsigned>(F.size());
  LMat g = lmat_mul(F, lmat_const(F, random_invertible(F, N, rng)),
                    lmat_tpow(mu));
  for (unsigned k = 0; k < moves; ++k) {
    unsigned i = rng.next(N);
    unsigned j = rng.next(N - 1);
    if (j >= i) ++j;
    int d = static_cast<int>(rng.next(5)) - 2;
    unsigned c = 1 + rng.next(q - 1);
    g = lmat_mul(F, g, transvection(N, i, j, c, d));
  }
  return g;
}

// product of transvections that is polynomial and 1 at z = 0
LMat random_plus_unipotent(const Field& F, unsigned N, unsigned moves,
                           Rng& rng) {
  const unsigned q = static_cast<unsigned>(F.size());
  LMat a = lmat_one(N);
  for (unsigned k = 0; k < moves; ++k) {
    unsigned i = rng.next(N);
    unsigned j = rng.next(N - 1);
    if (j >= i) ++j;
    a = lmat_mul(F, a,
                 transvection(N, i, j, 1 + rng.next(q - 1),
                              1 + static_cast<int>(rng.next(2))));
  }
  return a;
}

// product of transvections in 1/z that is 1 at z = infinity
LMat random_minus_unipotent(const Field& F, unsigned N, unsigned moves,
                            Rng& rng) {
  const unsigned q = static_cast<unsigned>(F.size());
  LMat b = lmat_one(N);
  for (unsigned k = 0; k < moves; ++k) {
    unsigned i = rng.next(N);
    unsigned j = rng.next(N - 1);
    if (j >= i) ++j;
    b = lmat_mul(F, b,
                 transvection(N, i, j, 1 + rng.next(q - 1),
                              -1 - static_cast<int>(rng.next(2))));
  }
  return b;
}

Scalar mass_of(const VElement& v) {
  Scalar m;
  for (const auto& [k, c] : v.c) m = m + c;
  return m;
}

}  // namespace

TEST_CASE("substituting z -> z0/z is an exact ring map and an involution") {
  FieldTower T(3);
  Field F{&T, 1};
  Rng rng(11);
  for (unsigned z0 = 1; z0 <= 2; ++z0) {
    for (unsigned trial = 0; trial < 8; ++trial) {
      LMat a = random_presentation(F, 2, {static_cast<int>(trial % 3) - 1, 0},
                                   3, rng);
      LMat b = random_presentation(F, 2, {0, 0}, 3, rng);
      REQUIRE(lmat_equal(lmat_subst_inv(F, lmat_subst_inv(F, a, z0), z0), a));
      REQUIRE(lmat_equal(lmat_subst_inv(F, lmat_mul(F, a, b), z0),
                         lmat_mul(F, lmat_subst_inv(F, a, z0),
                                  lmat_subst_inv(F, b, z0))));
    }
  }
}

TEST_CASE("two-sided splitting certifies on structured presentations") {
  FieldTower T(2);
  Field F{&T, 1};

  // diagonal powers split as themselves, sorted decreasingly
  Splitting s = splitting_of(F, lmat_tpow({0, 2, -1}));
  REQUIRE(s.lam == std::vector<int>({2, 0, -1}));

  // constants split with zero type and the two frames multiply back
  Rng rng(5);
  for (unsigned trial = 0; trial < 6; ++trial) {
    FMat c = random_invertible(F, 3, rng);
    Splitting sc = splitting_of(F, lmat_const(F, c));
    REQUIRE(sc.lam == std::vector<int>({0, 0, 0}));
    REQUIRE(fmat_mul(F, sc.ginf, sc.g0) == c);
  }

  // a triangular presentation that still splits diagonally
  PolyMat p = pmat_zero(2);
  p.at(0, 0) = {1};
  p.at(0, 1) = {0, 1};
  p.at(1, 1) = {0, 0, 1};
  Splitting st = splitting_of(F, lmat_of(p));
  REQUIRE(st.lam == std::vector<int>({2, 0}));

  // a nontrivial extension: the type is not the diagonal valuations
  PolyMat e = pmat_zero(2);
  e.at(0, 0) = {0, 0, 1};
  e.at(0, 1) = {0, 1};
  e.at(1, 1) = {1};
  Splitting se = splitting_of(F, LMat{-1, e});
  REQUIRE(se.lam == std::vector<int>({0, 0}));

  // the type is not invariant under transposition
  Splitting sf = splitting_of(F, lmat_of(pmat_transpose(p)));
  REQUIRE(sf.lam == std::vector<int>({1, 1}));
}

TEST_CASE("splitting invariants hold on random presentations") {
  Rng rng(23);
  for (unsigned q : {2u, 3u}) {
    FieldTower T(q);
    Field F{&T, 1};
    for (unsigned N : {2u, 3u}) {
      for (unsigned trial = 0; trial < 12; ++trial) {
        std::vector<int> mu(N);
        for (unsigned i = 0; i < N; ++i)
          mu[i] = static_cast<int>(rng.next(4)) - 1;
        LMat g = random_presentation(F, N, mu, 4, rng);
        Splitting s = splitting_of(F, g);
        REQUIRE(s.lam.front() <= lmat_max_degree(g));
        REQUIRE(s.lam.back() >= lmat_min_valuation(g));
      }
    }
  }
}

TEST_CASE("the class point is invariant under one-sided rescalings") {
  Rng rng(41);
  for (unsigned q : {2u, 3u}) {
    FieldTower T(q);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL);
    for (unsigned trial = 0; trial < 10; ++trial) {
      std::vector<int> mu = {static_cast<int>(rng.next(3)) - 1,
                             static_cast<int>(rng.next(2))};
      LMat g = random_presentation(F, 2, mu, 3, rng);
      BundleKey k = V.point_of(g);
      LMat a = random_plus_unipotent(F, 2, 4, rng);
      LMat b = random_minus_unipotent(F, 2, 4, rng);
      LMat h = lmat_mul(F, b, lmat_mul(F, g, a));
      REQUIRE(V.point_of(h) == k);
    }
  }
}

TEST_CASE("trivial-type classes are in bijection with the finite group") {
  for (auto [q, kind] : {std::pair<unsigned, GroupKind>{2u, GroupKind::GL},
                         {3u, GroupKind::GL},
                         {3u, GroupKind::PGL}}) {
    FieldTower T(q);
    Field F{&T, 1};
    BundleModel V(F, 2, kind);
    const Group& G = V.finite_group();
    std::set<unsigned> pts;
    for (unsigned gid = 0; gid < G.size(); ++gid) {
      BundleKey k = V.point_of(lmat_const(F, G.mat(gid)));
      REQUIRE(k.lam == std::vector<int>({0, 0}));
      pts.insert(k.pt);
    }
    REQUIRE(pts.size() == G.size());
    REQUIRE(V.stratum({0, 0}).tp.size() == G.size());
    REQUIRE(V.base_point() ==
            V.point_of(lmat_const(F, G.mat(G.identity()))));
  }
}

TEST_CASE("every stratum point round-trips through its presentation") {
  auto roundtrip = [](BundleModel& V, const std::vector<int>& lam) {
    const auto& st = V.stratum(lam);
    for (unsigned pt = 0; pt < st.tp.size(); ++pt) {
      BundleKey k{lam, pt};
      REQUIRE(V.point_of(V.presentation_of(k)) == k);
    }
  };
  {
    FieldTower T(2);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL);
    for (const std::vector<int>& lam :
         {std::vector<int>{1, 0}, {2, 0}, {1, 1}, {2, 1}, {0, -1}})
      roundtrip(V, lam);
  }
  {
    FieldTower T(3);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL);
    roundtrip(V, {1, 0});
    BundleModel W(F, 2, GroupKind::PGL);
    roundtrip(W, {1, 0});
    roundtrip(W, {2, 0});
  }
}

TEST_CASE("class degrees follow the type") {
  FieldTower T(3);
  Field F{&T, 1};
  BundleModel V(F, 2, GroupKind::GL);
  REQUIRE(V.degree_of(BundleKey{{2, 1}, 0}) == 3);
  REQUIRE(V.degree_of(BundleKey{{0, -1}, 0}) == -1);
  BundleModel W(F, 2, GroupKind::PGL);
  REQUIRE(W.degree_of(BundleKey{{1, 0}, 0}) == 1);
  REQUIRE(W.degree_of(BundleKey{{2, 0}, 0}) == 0);
}

TEST_CASE("the brute-force window census matches the parametrization") {
  auto compare = [](unsigned q, unsigned D) {
    FieldTower T(q);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL);
    std::map<std::vector<int>, uint64_t> expected;
    for (int l1 = 0; l1 <= static_cast<int>(D); ++l1)
      for (int l2 = 0; l2 <= l1; ++l2)
        expected[{l1, l2}] = V.stratum({l1, l2}).tp.size();
    REQUIRE(raw_window_census(F, D) == expected);
  };
  compare(2, 1);
  compare(2, 2);
  compare(2, 3);
  compare(3, 1);
  compare(3, 2);
}

TEST_CASE("the unit acts trivially and constants act by translation") {
  FieldTower T(2);
  Field F{&T, 1};
  BundleModel V(F, 2, GroupKind::GL);
  LoopModel A(F, 2, GroupKind::GL);
  const Group& G = V.finite_group();

  VElement d0;
  d0.add_to(V.base_point(), Scalar(1L));
  REQUIRE(V.act(A, A.unit(), d0) == d0);
  REQUIRE(V.act(A, A.unit(), d0, true) == d0);

  for (unsigned gid = 0; gid < G.size(); ++gid) {
    HeckeElement e = A.delta(A.key_of_const(gid));
    for (unsigned hid = 0; hid < G.size(); ++hid) {
      VElement v;
      v.add_to(V.point_of(lmat_const(F, G.mat(hid))), Scalar(1L));
      VElement expect;
      expect.add_to(
          V.point_of(lmat_const(F, G.mat(G.mul(hid, gid)))), Scalar(1L));
      REQUIRE(V.act(A, e, v) == expect);
    }
  }
}

TEST_CASE("iterated actions compose through the convolution product") {
  FieldTower T(2);
  Field F{&T, 1};
  BundleModel V(F, 2, GroupKind::GL);
  LoopModel A(F, 2, GroupKind::GL);
  VElement d0;
  d0.add_to(V.base_point(), Scalar(1L));

  const unsigned ndc = static_cast<unsigned>(A.census({1, 0}));
  REQUIRE(ndc == 9);
  for (unsigned i = 0; i < ndc; ++i) {
    HeckeElement a = A.delta(HeckeKey{{1, 0}, i});
    // mass equals the number of right cosets acted with
    VElement va = V.act(A, a, d0);
    REQUIRE(mass_of(va) ==
            Scalar(static_cast<long>(A.stratum({1, 0}).dc_members[i].size())));
    for (unsigned j = 0; j < ndc; ++j) {
      HeckeElement b = A.delta(HeckeKey{{1, 0}, j});
      HeckeElement ba = A.convolve(b, a);
      REQUIRE(V.act(A, a, V.act(A, b, d0)) == V.act(A, ba, d0));
      REQUIRE(V.act(A, a, V.act(A, b, d0, true), true) ==
              V.act(A, ba, d0, true));
    }
  }
}

TEST_CASE("the actions at the two marked points commute") {
  FieldTower T(2);
  Field F{&T, 1};
  BundleModel V(F, 2, GroupKind::GL);
  LoopModel A(F, 2, GroupKind::GL);
  VElement d0;
  d0.add_to(V.base_point(), Scalar(1L));

  std::vector<HeckeElement> els;
  for (unsigned i = 0; i < A.census({1, 0}); ++i)
    els.push_back(A.delta(HeckeKey{{1, 0}, i}));
  els.push_back(A.delta(A.key_of_const(2 % V.finite_group().size())));
  for (const HeckeElement& a : els)
    for (const HeckeElement& b : els)
      REQUIRE(V.act(A, a, V.act(A, b, d0, true)) ==
              V.act(A, b, V.act(A, a, d0), true));
}

TEST_CASE("action matrices on a window are square and invertible") {
  {
    FieldTower T(2);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL);
    LoopModel A(F, 2, GroupKind::GL);
    const auto& B = V.bases(A, {2, 0});
    REQUIRE(B.akeys.size() == 30);
    REQUIRE(B.vkeys.size() == 30);
    REQUIRE_NOTHROW(V.act_matrix_inverse(A, {2, 0}, false));
    REQUIRE_NOTHROW(V.act_matrix_inverse(A, {2, 0}, true));
  }
  {
    FieldTower T(3);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::PGL);
    LoopModel A(F, 2, GroupKind::PGL);
    const auto& B = V.bases(A, {2, 0});
    REQUIRE(B.akeys.size() == 88);
    REQUIRE(B.vkeys.size() == 88);
    REQUIRE_NOTHROW(V.act_matrix_inverse(A, {2, 0}, false));
    REQUIRE_NOTHROW(V.act_matrix_inverse(A, {2, 0}, true));
  }
}

TEST_CASE("pullback along the inversion preserves strata and squares to one") {
  Rng rng(77);
  for (auto [q, z0] : {std::pair<unsigned, unsigned>{2u, 1u}, {3u, 1u},
                       {3u, 2u}}) {
    FieldTower T(q);
    Field F{&T, 1};
    BundleModel V(F, 2, GroupKind::GL, z0);
    for (unsigned trial = 0; trial < 8; ++trial) {
      std::vector<int> mu = {static_cast<int>(rng.next(3)) - 1,
                             static_cast<int>(rng.next(2))};
      VElement v;
      v.add_to(V.point_of(random_presentation(F, 2, mu, 3, rng)),
               Scalar(1L));
      VElement w = V.inv_star(v);
      REQUIRE(w.c.begin()->first.lam == v.c.begin()->first.lam);
      REQUIRE(V.inv_star(w) == v);
    }
  }
}

TEST_CASE("the algebra involution inverts constants and fixes the unit") {
  for (auto [q, kind] : {std::pair<unsigned, GroupKind>{2u, GroupKind::GL},
                         {3u, GroupKind::PGL}}) {
    FieldTower T(q);
    Field F{&T, 1};
    BundleModel V(F, 2, kind);
    LoopModel A(F, 2, kind);
    const Group& G = V.finite_group();
    REQUIRE(V.involution(A, {0, 0}, A.unit()) == A.unit());
    for (unsigned gid = 0; gid < G.size(); ++gid) {
      HeckeElement lhs =
          V.involution(A, {0, 0}, A.delta(A.key_of_const(gid)));
      REQUIRE(lhs == A.delta(A.key_of_const(G.inv(gid))));
    }
  }
}

TEST_CASE("the algebra involution is involutive and anti-multiplicative") {
  FieldTower T(2);
  Field F{&T, 1};
  BundleModel V(F, 2, GroupKind::GL);
  LoopModel A(F, 2, GroupKind::GL);
  const std::vector<int> win = {2, 0};

  std::vector<HeckeElement> els;
  for (unsigned i = 0; i < A.census({1, 0}); ++i)
    els.push_back(A.delta(HeckeKey{{1, 0}, i}));

  for (const HeckeElement& a : els)
    REQUIRE(V.involution(A, win, V.involution(A, win, a)) == a);

  for (const HeckeElement& a : els)
    for (const HeckeElement& b : els) {
      HeckeElement lhs = V.involution(A, win, A.convolve(a, b));
      HeckeElement rhs = A.convolve(V.involution(A, win, b),
                                    V.involution(A, win, a));
      REQUIRE(lhs == rhs);
    }
}
