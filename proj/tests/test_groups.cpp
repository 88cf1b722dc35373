#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "hp1/fq.hpp"
#include "hp1/group.hpp"

using namespace hp1;

TEST_CASE("coweight orders and windows") {
  REQUIRE(coweight_dominant({2, 1, 0}));
  REQUIRE_FALSE(coweight_dominant({1, 2}));

  REQUIRE(coweight_leq_weak({1, 1}, {2, 0}));
  REQUIRE_FALSE(coweight_leq_weak({2, 1}, {2, 0}));
  REQUIRE(coweight_leq_weak({0, 0}, {2, 0}));
  REQUIRE(coweight_leq_strict({1, 1}, {2, 0}));
  REQUIRE_FALSE(coweight_leq_strict({1, 0}, {2, 0}));
  REQUIRE(coweight_leq_strict({1, 1, 0}, {2, 0, 0}));

  REQUIRE(coweight_window({2, 0}) ==
          std::vector<std::vector<int>>{{0, 0}, {1, 0}, {1, 1}, {2, 0}});
  REQUIRE(coweight_window({1, 0, 0}) ==
          std::vector<std::vector<int>>{{0, 0, 0}, {1, 0, 0}});
  REQUIRE(coweight_window({1, 1, 0}) ==
          std::vector<std::vector<int>>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}});

  REQUIRE(coweight_pgl_rep({3, 1}) == std::vector<int>{2, 0});
  REQUIRE(coweight_pgl_rep({0, -2}) == std::vector<int>{2, 0});
}

TEST_CASE("group enumeration and arithmetic") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1}, F4{&T2, 2};

  SECTION("orders match the product formula") {
    REQUIRE(Group(F2, 2, GroupKind::GL).size() == 6);
    REQUIRE(Group(F3, 2, GroupKind::GL).size() == 48);
    REQUIRE(Group(F3, 2, GroupKind::PGL).size() == 24);
    REQUIRE(Group(F4, 2, GroupKind::GL).size() == 180);
    REQUIRE(Group(F2, 3, GroupKind::GL).size() == 168);
    REQUIRE(Group(F2, 3, GroupKind::PGL).size() == 168);
  }

  SECTION("enumeration budget produces a named error") {
    REQUIRE_THROWS_WITH(Group(F3, 2, GroupKind::GL, 40),
                        Catch::Matchers::ContainsSubstring("48"));
  }

  SECTION("elements come in lexicographic entry order") {
    Group G(F2, 2, GroupKind::GL);
    REQUIRE(G.flat(0) == std::vector<unsigned>{0, 1, 1, 0});
    REQUIRE(G.flat(G.size() - 1) == std::vector<unsigned>{1, 1, 1, 0});
    for (unsigned i = 0; i + 1 < G.size(); ++i)
      REQUIRE(G.flat(i) < G.flat(i + 1));
  }

  SECTION("group axioms hold exhaustively in GL(2, F3)") {
    Group G(F3, 2, GroupKind::GL);
    unsigned e = G.identity();
    for (unsigned a = 0; a < G.size(); ++a) {
      REQUIRE(G.mul(a, G.inv(a)) == e);
      REQUIRE(G.mul(e, a) == a);
      REQUIRE(G.mul(a, e) == a);
    }
    // associativity spot checks
    REQUIRE(G.mul(G.mul(3, 17), 40) == G.mul(3, G.mul(17, 40)));
    REQUIRE(G.mul(G.mul(45, 2), 31) == G.mul(45, G.mul(2, 31)));
  }

  SECTION("projective normalization is idempotent and merges scalars") {
    Group P(F3, 2, GroupKind::PGL);
    Group G(F3, 2, GroupKind::GL);
    for (unsigned g = 0; g < G.size(); ++g) {
      auto n1 = P.normalize(G.flat(g));
      REQUIRE(P.normalize(n1) == n1);
      // scaling by 2 does not change the class
      auto scaled = G.flat(g);
      for (unsigned& x : scaled) x = F3.mul(2, x);
      REQUIRE(P.normalize(scaled) == n1);
    }
    // normalize(gh) = normalize(normalize(g) normalize(h)) via id arithmetic
    for (unsigned a = 0; a < P.size(); ++a)
      for (unsigned b = 0; b < P.size(); ++b) {
        auto prod = fmat_mul(F3, P.mat(a), P.mat(b));
        REQUIRE(P.lookup(Group::flatten(prod)) == P.mul(a, b));
      }
  }
}

TEST_CASE("parabolic subgroups and Levi projections") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1};

  SECTION("Borel of GL(2, F3)") {
    Group G(F3, 2, GroupKind::GL);
    ParabolicDatum D = parabolic_datum(G, {1, 0});
    REQUIRE(D.blocks == std::vector<unsigned>{1, 1});
    REQUIRE(D.U.size() == 3);
    REQUIRE(D.Um.size() == 3);
    REQUIRE(D.M.size() == 4);
    REQUIRE(D.P.size() == 12);
    REQUIRE(D.Pm.size() == 12);
    // Levi projection is a homomorphism on P
    for (unsigned p1 : D.P)
      for (unsigned p2 : D.P)
        REQUIRE(D.project(G.mul(p1, p2)) ==
                G.mul(D.project(p1), D.project(p2)));
    // decomposition P = U M: each p factors as u * m with u in U, m in M
    for (unsigned p : D.P) {
      unsigned m = D.project(p);
      unsigned u = G.mul(p, G.inv(m));
      REQUIRE(std::binary_search(D.U.begin(), D.U.end(), u));
    }
  }

  SECTION("maximal parabolic of GL(3, F2) with blocks (1, 2)") {
    Group G(F2, 3, GroupKind::GL);
    ParabolicDatum D = parabolic_datum(G, {1, 0, 0});
    REQUIRE(D.blocks == std::vector<unsigned>{1, 2});
    REQUIRE(D.U.size() == 4);
    REQUIRE(D.M.size() == 6);
    REQUIRE(D.P.size() == 24);
    REQUIRE(G.size() / D.P.size() == 7);
  }

  SECTION("degenerate datum with a single block") {
    Group G(F2, 2, GroupKind::GL);
    ParabolicDatum D = parabolic_datum(G, {0, 0});
    REQUIRE(D.blocks == std::vector<unsigned>{2});
    REQUIRE(D.U.size() == 1);
    REQUIRE(D.P.size() == G.size());
    REQUIRE(D.M.size() == G.size());
  }

  SECTION("projective Borel") {
    Group P(F3, 2, GroupKind::PGL);
    ParabolicDatum D = parabolic_datum(P, {1, 0});
    REQUIRE(D.U.size() == 3);
    REQUIRE(D.M.size() == 2);   // diagonal torus mod scalars
    REQUIRE(D.P.size() == 6);
  }
}

TEST_CASE("twisted product spaces") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1};

  SECTION("point counts for the Borel") {
    Group G2(F2, 2, GroupKind::GL);
    ParabolicDatum D2 = parabolic_datum(G2, {1, 0});
    REQUIRE(twisted_product(D2, false).size() == 9);
    REQUIRE(twisted_product(D2, true).size() == 9);

    Group G3(F3, 2, GroupKind::GL);
    ParabolicDatum D3 = parabolic_datum(G3, {1, 0});
    REQUIRE(twisted_product(D3, false).size() == 64);
    REQUIRE(twisted_product(D3, true).size() == 64);
  }

  SECTION("left action is a well-defined group action") {
    Group G(F3, 2, GroupKind::GL);
    ParabolicDatum D = parabolic_datum(G, {1, 0});
    TwistedProduct T = twisted_product(D, false);
    unsigned pt = T.point(5, 11);
    REQUIRE(T.act(G.identity(), G.identity(), pt) == pt);
    for (unsigned a : {3u, 19u})
      for (unsigned b : {7u, 23u})
        for (unsigned c : {2u, 29u})
          for (unsigned d : {13u, 41u})
            REQUIRE(T.act(a, b, T.act(c, d, pt)) ==
                    T.act(G.mul(a, c), G.mul(b, d), pt));
  }

  SECTION("stabilizer of the base point") {
    for (unsigned q : {2u, 3u}) {
      FieldTower T(q);
      Field F{&T, 1};
      Group G(F, 2, GroupKind::GL);
      ParabolicDatum D = parabolic_datum(G, {1, 0});
      TwistedProduct TP = twisted_product(D, false);
      unsigned base = TP.point(G.identity(), G.identity());
      std::set<std::pair<unsigned, unsigned>> stab;
      for (unsigned a = 0; a < G.size(); ++a)
        for (unsigned b = 0; b < G.size(); ++b)
          if (TP.act(a, b, base) == base) stab.insert({a, b});
      std::set<std::pair<unsigned, unsigned>> want;
      for (unsigned p : D.P)
        for (unsigned pm : D.Pm)
          if (D.project(p) == D.project(pm)) want.insert({p, pm});
      REQUIRE(stab == want);
    }
  }

  SECTION("canonical representatives are the least pairs of their orbits") {
    Group G(F2, 2, GroupKind::GL);
    ParabolicDatum D = parabolic_datum(G, {1, 0});
    TwistedProduct T = twisted_product(D, false);
    for (unsigned pt = 0; pt < T.size(); ++pt) {
      auto [g1, g2] = T.reps[pt];
      for (unsigned a = 0; a < G.size(); ++a)
        for (unsigned b = 0; b < G.size(); ++b)
          if (T.point(a, b) == pt)
            REQUIRE(std::make_pair(g1, g2) <= std::make_pair(a, b));
    }
  }
}

TEST_CASE("elliptic conjugacy classes from companion matrices") {
  SECTION("GL(2, F2): the element of order 3") {
    FieldTower T(2);
    Field F{&T, 1};
    Group G(F, 2, GroupKind::GL);
    auto divs = T.divisors_of_degree(2);
    REQUIRE(divs.size() == 1);
    ConjClass C = elliptic_class(G, T, 2, T.embed(2, 2, divs[0].rep));
    REQUIRE(C.members.size() == 2);  // (q^2 - q) = 2
    // closure under conjugation
    for (unsigned g = 0; g < G.size(); ++g)
      for (unsigned y : C.members)
        REQUIRE(std::binary_search(C.members.begin(), C.members.end(),
                                   G.conj(g, y)));
  }

  SECTION("GL(2, F3): all three quadratic orbits") {
    FieldTower T(3);
    Field F{&T, 1};
    Group G(F, 2, GroupKind::GL);
    auto divs = T.divisors_of_degree(2);
    REQUIRE(divs.size() == 3);
    std::set<unsigned> reps;
    for (const auto& dv : divs) {
      ConjClass C = elliptic_class(G, T, 2, dv.rep);
      REQUIRE(C.members.size() == 6);  // q^2 - q
      reps.insert(C.rep);
      // trace and determinant of the representative match the orbit data
      FMat m = G.mat(C.rep);
      unsigned tr = F.add(m[0][0], m[1][1]);
      unsigned det = fmat_det(F, m);
      REQUIRE(tr == T.trace(2, 1, dv.rep));
      REQUIRE(det == T.norm(2, 1, dv.rep));
    }
    REQUIRE(reps.size() == 3);  // distinct orbits give distinct classes
  }

  SECTION("GL(3, F2): a cubic class") {
    FieldTower T(2);
    Field F{&T, 1};
    Group G(F, 3, GroupKind::GL);
    auto divs = T.divisors_of_degree(3);
    REQUIRE(divs.size() == 2);
    ConjClass C = elliptic_class(G, T, 3, divs[0].rep);
    REQUIRE(C.members.size() == (8 - 2) * (8 - 4));  // 24
  }

  SECTION("subfield elements are rejected") {
    FieldTower T(3);
    Field F{&T, 1};
    Group G(F, 2, GroupKind::GL);
    REQUIRE_THROWS_AS(elliptic_class(G, T, 2, T.embed(1, 2, 2)), CheckError);
  }
}
