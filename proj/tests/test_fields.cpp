#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "hp1/fq.hpp"

using namespace hp1;

namespace {

using Poly = std::vector<unsigned>;

// Evaluate a base-field polynomial at a level-i element.
unsigned eval_at(const FieldTower& F, unsigned i, const Poly& p, unsigned x) {
  unsigned acc = 0;
  for (size_t d = p.size(); d-- > 0;)
    acc = F.add(i, F.mul(i, acc, x), F.embed(1, i, p[d]));
  return acc;
}

// Norm as the literal product of Galois conjugates over k_j.
unsigned norm_brute(const FieldTower& F, unsigned i, unsigned j, unsigned x) {
  unsigned acc = 1, c = x;
  for (unsigned l = 0; l < i / j; ++l) {
    acc = F.mul(i, acc, c);
    for (unsigned s = 0; s < j; ++s) c = F.frobenius(i, c);
  }
  return F.restrict_code(i, j, acc);
}

}  // namespace

TEST_CASE("defining polynomials are the least irreducibles") {
  FieldTower F2(2), F3(3), F5(5);
  CHECK(F2.modulus(1) == Poly{0, 1});
  CHECK(F2.modulus(2) == Poly{1, 1, 1});
  CHECK(F2.modulus(3) == Poly{1, 1, 0, 1});
  CHECK(F2.modulus(4) == Poly{1, 1, 0, 0, 1});
  CHECK(F3.modulus(1) == Poly{0, 1});
  CHECK(F3.modulus(2) == Poly{1, 0, 1});
  CHECK(F3.modulus(3) == Poly{1, 2, 0, 1});
  CHECK(F5.modulus(2) == Poly{2, 0, 1});
  CHECK_THROWS_AS(FieldTower(4), CheckError);
  CHECK_THROWS_AS(FieldTower(6), CheckError);
}

TEST_CASE("generators are primitive and norm-compatible") {
  for (unsigned q : {2u, 3u}) {
    FieldTower F(q);
    for (unsigned i : {1u, 2u, 3u, 4u, 6u, 8u}) {
      unsigned g = F.generator(i);
      unsigned ord = F.order(i);
      CHECK(F.pow(i, g, ord) == 1u);
      for (unsigned r = 2; r <= ord; ++r)
        if (ord % r == 0) {
          CHECK(F.pow(i, g, ord / r) != 1u);
          break;
        }
      for (unsigned j = 1; j < i; ++j)
        if (i % j == 0) CHECK(F.norm(i, j, g) == F.generator(j));
    }
  }
  FieldTower F5(5);
  CHECK(F5.generator(1) == 2u);
  CHECK(F5.pow(2, F5.generator(2), 24) == 1u);
}

TEST_CASE("norm against the brute-force conjugate product") {
  // Spec-level worked value: in F_9 = F_3[u]/(u^2+1) the class u has
  // norm u * u^3 = u^4 = 1 down to F_3.  u is the encoding 3.
  FieldTower F3(3);
  CHECK(F3.mul(2, 3, 3) == F3.neg(2, 1));  // u^2 = -1
  CHECK(F3.norm(2, 1, 3) == 1u);

  for (unsigned q : {2u, 3u}) {
    FieldTower F(q);
    for (unsigned i : {2u, 3u, 4u}) {
      for (unsigned j = 1; j <= i; ++j) {
        if (i % j != 0) continue;
        for (unsigned x = 1; x < F.size(i); ++x)
          REQUIRE(F.norm(i, j, x) == norm_brute(F, i, j, x));
      }
    }
    // transitivity across the tower
    for (unsigned x = 1; x < F.size(4); ++x)
      REQUIRE(F.norm(4, 1, x) == F.norm(2, 1, F.norm(4, 2, x)));
    // surjectivity onto the subfield units
    std::set<unsigned> image;
    for (unsigned x = 1; x < F.size(4); ++x) image.insert(F.norm(4, 2, x));
    CHECK(image.size() == F.order(2));
  }
}

TEST_CASE("frobenius is a field automorphism fixing the base") {
  FieldTower F(3);
  for (unsigned x = 0; x < 3; ++x) CHECK(F.frobenius(1, x) == x);
  for (unsigned i : {2u, 3u}) {
    for (unsigned x = 0; x < F.size(i); ++x) {
      for (unsigned y = 0; y < F.size(i); ++y) {
        REQUIRE(F.frobenius(i, F.add(i, x, y)) ==
                F.add(i, F.frobenius(i, x), F.frobenius(i, y)));
      }
      REQUIRE(F.frobenius(i, F.mul(i, x, x)) ==
              F.mul(i, F.frobenius(i, x), F.frobenius(i, x)));
    }
    for (unsigned c = 0; c < 3; ++c)
      CHECK(F.frobenius(i, F.embed(1, i, c)) == F.embed(1, i, c));
  }
}

TEST_CASE("embeddings are commuting field maps") {
  for (unsigned q : {2u, 3u}) {
    FieldTower F(q);
    for (unsigned x = 0; x < F.size(2); ++x) {
      REQUIRE(F.embed(2, 8, x) == F.embed(4, 8, F.embed(2, 4, x)));
      if (x) REQUIRE(F.restrict_code(8, 2, F.embed(2, 8, x)) == x);
    }
    for (unsigned x = 0; x < F.size(4); ++x)
      for (unsigned y = 0; y < F.size(4); ++y) {
        REQUIRE(F.embed(4, 8, F.add(4, x, y)) ==
                F.add(8, F.embed(4, 8, x), F.embed(4, 8, y)));
        REQUIRE(F.embed(4, 8, F.mul(4, x, y)) ==
                F.mul(8, F.embed(4, 8, x), F.embed(4, 8, y)));
      }
    // Frobenius^4 fixes exactly the image of k_4 inside k_8.
    unsigned fixed = 0;
    for (unsigned x = 0; x < F.size(8); ++x) {
      unsigned c = x;
      for (int l = 0; l < 4; ++l) c = F.frobenius(8, c);
      if (c == x) {
        ++fixed;
        if (x) REQUIRE(F.minimal_level(8, x) <= 4u);
      }
    }
    CHECK(fixed == F.size(4));
  }
}

TEST_CASE("table multiplication agrees with polynomial multiplication") {
  FieldTower F2(2), F5(5);
  for (unsigned x = 0; x < F2.size(4); ++x)
    for (unsigned y = 0; y < F2.size(4); ++y)
      REQUIRE(F2.mul(4, x, y) == F2.mul_direct(4, x, y));
  for (unsigned x = 0; x < F5.size(2); ++x)
    for (unsigned y = 0; y < F5.size(2); ++y)
      REQUIRE(F5.mul(2, x, y) == F5.mul_direct(2, x, y));
  FieldTower F3(3);
  for (unsigned x = 1; x < F3.size(8); x += 101)
    for (unsigned y = 1; y < F3.size(8); y += 97)
      REQUIRE(F3.mul(8, x, y) == F3.mul_direct(8, x, y));
}

TEST_CASE("minimal polynomials and frobenius orbits") {
  FieldTower F2(2);
  unsigned g4 = F2.generator(4);
  auto mp = F2.min_poly(4, g4);
  CHECK(mp.size() == 5u);  // degree 4
  CHECK(eval_at(F2, 4, mp, g4) == 0u);
  auto orb = F2.orbit_of(4, g4);
  CHECK(orb.degree == 4u);
  CHECK(F2.orbit_elements(orb, 4).size() == 4u);

  FieldTower F3(3);
  unsigned e = F3.embed(2, 4, F3.generator(2));
  auto orb2 = F3.orbit_of(4, e);
  CHECK(orb2.degree == 2u);
  CHECK(orb2.rep == std::min(F3.generator(2), F3.frobenius(2, F3.generator(2))));
  CHECK(F3.minimal_level(4, e) == 2u);
  CHECK(F3.min_poly(4, e) == F3.min_poly(2, F3.generator(2)));

  // Orbit representative is minimal and the orbit is Frobenius-closed.
  for (unsigned x = 1; x < F3.size(4); ++x) {
    auto d = F3.orbit_of(4, x);
    auto els = F3.orbit_elements(d, d.degree);
    for (unsigned y : els) REQUIRE(y >= d.rep);
    std::set<unsigned> s(els.begin(), els.end());
    CHECK(s.size() == d.degree);
    for (unsigned y : els) CHECK(s.count(F3.frobenius(d.degree, y)));
  }
}

TEST_CASE("divisor censuses by degree") {
  FieldTower F2(2), F3(3), F5(5);
  CHECK(F2.divisors_of_degree(1).size() == 1u);
  CHECK(F2.divisors_of_degree(2).size() == 1u);
  CHECK(F2.divisors_of_degree(3).size() == 2u);
  CHECK(F2.divisors_of_degree(4).size() == 3u);
  CHECK(F3.divisors_of_degree(1).size() == 2u);
  CHECK(F3.divisors_of_degree(2).size() == 3u);
  CHECK(F3.divisors_of_degree(3).size() == 8u);
  CHECK(F3.divisors_of_degree(4).size() == 18u);
  CHECK(F5.divisors_of_degree(1).size() == 4u);
  CHECK(F5.divisors_of_degree(2).size() == 10u);
  for (auto d : F3.divisors_of_degree(3)) {
    CHECK(d.degree == 3u);
    CHECK(F3.minimal_level(3, d.rep) == 3u);
  }
}
