#include <catch2/catch_amalgamated.hpp>

#include "hp1/fq.hpp"
#include "hp1/laurent.hpp"
#include "hp1/matrix.hpp"
#include "hp1/scalar.hpp"

using namespace hp1;

namespace {

// All invertible n x n matrices over F, by brute force.
std::vector<FMat> all_invertible(const Field& F, unsigned n) {
  std::vector<FMat> out;
  uint64_t total = 1;
  for (unsigned i = 0; i < n * n; ++i) total *= F.size();
  for (uint64_t code = 0; code < total; ++code) {
    FMat m = fmat_zero(n, n);
    uint64_t c = code;
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j) {
        m[i][j] = static_cast<unsigned>(c % F.size());
        c /= F.size();
      }
    if (fmat_det(F, m) != 0) out.push_back(m);
  }
  return out;
}

PolyMat pmat_from_strings(const Field& F, unsigned n,
                          const std::vector<std::vector<std::vector<unsigned>>>& rows) {
  PolyMat m = pmat_zero(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) {
      m.at(i, j) = rows[i][j];
      fpoly_trim(m.at(i, j));
    }
  return m;
}

// Check a * b == t^{shift} * I  truncated below degree prec, where b is the
// polynomial part of a Laurent matrix with valuation floor -shift.
void require_laurent_inverse(const Field& F, const PolyMat& a,
                             const LaurentMat& binv, int prec) {
  REQUIRE(binv.vmin <= 0);
  PolyMat bs = pmat_zero(a.n);
  bs.e = binv.e;
  PolyMat prod = pmat_mul(F, a, bs);
  unsigned cutoff = static_cast<unsigned>(prec - binv.vmin);
  prod = pmat_trunc(prod, cutoff);
  PolyMat want = pmat_diag_tpow(std::vector<int>(a.n, -binv.vmin));
  want = pmat_trunc(want, cutoff);
  REQUIRE(pmat_equal(prod, want));
}

}  // namespace

TEST_CASE("finite field row reduction, inverse, determinant") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1}, F4{&T2, 2};

  SECTION("every invertible matrix over F2 and F3 inverts exactly") {
    for (const Field& F : {F2, F3}) {
      auto mats = all_invertible(F, 2);
      size_t q = F.size();
      REQUIRE(mats.size() == (q * q - 1) * (q * q - q));
      for (const FMat& m : mats) {
        FMat inv = fmat_inverse(F, m);
        REQUIRE(fmat_mul(F, m, inv) == fmat_identity(2));
        REQUIRE(fmat_mul(F, inv, m) == fmat_identity(2));
      }
    }
  }

  SECTION("arithmetic in the quartic view F4") {
    unsigned g = F4.generator();
    // g^2 = g + 1 in F4, so det of [[g,1],[1,g]] is g^2 - 1 = g
    FMat m{{g, 1}, {1, g}};
    REQUIRE(fmat_det(F4, m) == F4.sub(F4.mul(g, g), 1));
    REQUIRE(fmat_det(F4, m) != 0);
    FMat inv = fmat_inverse(F4, m);
    REQUIRE(fmat_mul(F4, m, inv) == fmat_identity(2));
  }

  SECTION("rank, kernel and solve over F3") {
    // rows: (1,2,0,1), (2,1,1,0), (0,0,1,2); row3 = independent; rank 3
    FMat a{{1, 2, 0, 1}, {2, 1, 1, 0}, {0, 0, 1, 2}};
    REQUIRE(fmat_rank(F3, a) == 3);
    auto ker = fmat_kernel(F3, a);
    REQUIRE(ker.size() == 1);
    for (const auto& v : ker)
      REQUIRE(fmat_vec(F3, a, v) == std::vector<unsigned>{0, 0, 0});
    std::vector<unsigned> x;
    REQUIRE(fmat_solve(F3, a, {1, 1, 1}, x));
    REQUIRE(fmat_vec(F3, a, x) == std::vector<unsigned>{1, 1, 1});
    // an inconsistent system: duplicate row with different right side
    FMat b{{1, 2, 0, 1}, {1, 2, 0, 1}};
    REQUIRE_FALSE(fmat_solve(F3, b, {1, 2}, x));
  }

  SECTION("singular matrix refuses to invert") {
    FMat s{{1, 2}, {2, 1}};  // det = 1 - 4 = 0 over F3
    REQUIRE(fmat_det(F3, s) == 0);
    REQUIRE_THROWS_AS(fmat_inverse(F3, s), CheckError);
  }
}

TEST_CASE("dense rational and scalar matrices") {
  SECTION("rational inverse with a classic integer example") {
    DMat<Rat> a{{1, 2, 3}, {0, 1, 4}, {5, 6, 0}};
    DMat<Rat> inv = dmat_inverse(a);
    DMat<Rat> want{{-24, 18, 5}, {20, -15, -4}, {-5, 4, 1}};
    REQUIRE(inv == want);
    REQUIRE(dmat_mul(a, inv) == dmat_identity<Rat>(3));
  }

  SECTION("rank over the ring with a formal square root") {
    Scalar s = Scalar::sqrt_q(3);
    DMat<Scalar> a{{Scalar(1), s}, {s, Scalar(3)}};
    REQUIRE(dmat_rank(a) == 1);
    auto ker = dmat_kernel(a);
    REQUIRE(ker.size() == 1);
    // kernel vector (x, y) satisfies x + s y = 0
    REQUIRE((ker[0][0] + s * ker[0][1]).is_zero());
    DMat<Scalar> b{{Scalar(1), s}, {s, Scalar(2)}};
    REQUIRE(dmat_rank(b) == 2);
    REQUIRE(dmat_mul(b, dmat_inverse(b)) == dmat_identity<Scalar>(2));
  }
}

TEST_CASE("polynomial arithmetic over finite fields") {
  FieldTower T3(3);
  Field F{&T3, 1};

  SECTION("division with remainder") {
    FPoly num{1, 2, 0, 1}, den{2, 1};
    auto [q, r] = fpoly_divmod(F, num, den);
    REQUIRE(fpoly_deg(r) < fpoly_deg(den));
    FPoly back = fpoly_add(F, fpoly_mul(F, q, den), r);
    fpoly_trim(back);
    REQUIRE(back == num);
  }

  SECTION("series inverse") {
    FPoly u{1, 2, 1};  // 1 + 2t + t^2
    FPoly inv = fpoly_series_inverse(F, u, 6);
    FPoly prod = fpoly_trunc(fpoly_mul(F, u, inv), 6);
    REQUIRE(prod == FPoly{1});
    REQUIRE_THROWS_AS(fpoly_series_inverse(F, FPoly{0, 1}, 4), CheckError);
  }

  SECTION("evaluation") {
    FPoly p{1, 0, 2};  // 1 + 2t^2
    REQUIRE(fpoly_eval(F, p, 0) == 1);
    REQUIRE(fpoly_eval(F, p, 1) == 0);   // 1 + 2 = 0 mod 3
    REQUIRE(fpoly_eval(F, p, 2) == 0);   // 1 + 2*4 = 9 = 0 mod 3
  }
}

TEST_CASE("polynomial matrix determinant and adjugate") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1};

  SECTION("adjugate times matrix is det times identity") {
    PolyMat a = pmat_from_strings(
        F3, 3,
        {{{1, 1}, {0, 2}, {1}}, {{2}, {1, 0, 1}, {0, 1}}, {{0}, {1}, {1, 2}}});
    FPoly det = pmat_det(F3, a);
    REQUIRE_FALSE(fpoly_is_zero(det));
    PolyMat adj = pmat_adjugate(F3, a);
    PolyMat prod = pmat_mul(F3, adj, a);
    PolyMat want = pmat_zero(3);
    for (unsigned i = 0; i < 3; ++i) want.at(i, i) = det;
    REQUIRE(pmat_equal(prod, want));
    prod = pmat_mul(F3, a, adj);
    REQUIRE(pmat_equal(prod, want));
  }

  SECTION("determinant is multiplicative") {
    PolyMat a = pmat_from_strings(F2, 2, {{{1, 1}, {0, 1}}, {{1}, {1, 0, 1}}});
    PolyMat b = pmat_from_strings(F2, 2, {{{0, 1}, {1}}, {{1, 1}, {0, 0, 1}}});
    FPoly lhs = pmat_det(F2, pmat_mul(F2, a, b));
    FPoly rhs = fpoly_mul(F2, pmat_det(F2, a), pmat_det(F2, b));
    fpoly_trim(rhs);
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("elementary divisors over the polynomial ring") {
  FieldTower T2(2), T3(3);
  Field F2{&T2, 1}, F3{&T3, 1};

  SECTION("diagonal monomial matrices") {
    REQUIRE(pmat_divisor_type(F2, pmat_diag_tpow({2, 1})) ==
            std::vector<int>{2, 1});
    REQUIRE(pmat_divisor_type(F3, pmat_diag_tpow({0, 0, 0})) ==
            std::vector<int>{0, 0, 0});
    // permuted diagonal sorts into weakly decreasing order
    PolyMat p = pmat_zero(3);
    p.at(0, 0) = FPoly{0, 1};           // t
    p.at(1, 1) = FPoly{0, 0, 0, 1};     // t^3
    p.at(2, 2) = FPoly{0, 0, 1};        // t^2
    REQUIRE(pmat_divisor_type(F3, p) == std::vector<int>{3, 2, 1});
  }

  SECTION("off-diagonal entries can merge divisors") {
    // [[t, 1], [0, t]] has divisors 1, t^2 -> type (2, 0)
    PolyMat a = pmat_from_strings(F2, 2, {{{0, 1}, {1}}, {{0}, {0, 1}}});
    REQUIRE(pmat_divisor_type(F2, a) == std::vector<int>{2, 0});
    // [[t^2 + t, t], [t, t]] has divisors t, t^2 -> type (2, 1)
    PolyMat b =
        pmat_from_strings(F2, 2, {{{0, 1, 1}, {0, 1}}, {{0, 1}, {0, 1}}});
    REQUIRE(pmat_divisor_type(F2, b) == std::vector<int>{2, 1});
  }

  SECTION("type is invariant under unimodular row and column moves") {
    PolyMat a = pmat_diag_tpow({3, 1, 0});
    PolyMat u = pmat_from_strings(
        F3, 3, {{{1}, {0, 2}, {1, 1}}, {{0}, {1}, {0, 0, 2}}, {{0}, {0}, {1}}});
    PolyMat v = pmat_from_strings(
        F3, 3, {{{1}, {0}, {0}}, {{0, 1, 1}, {1}, {0}}, {{2}, {0, 2}, {1}}});
    PolyMat m = pmat_mul(F3, u, pmat_mul(F3, a, v));
    REQUIRE(pmat_divisor_type(F3, m) == std::vector<int>{3, 1, 0});
  }

  SECTION("divisibility chain and determinant match") {
    PolyMat a = pmat_from_strings(
        F2, 3,
        {{{0, 1}, {1}, {0}}, {{0}, {0, 0, 1}, {1, 1}}, {{0, 1}, {0}, {0, 1, 1}}});
    auto divs = pmat_smith(F2, a);
    REQUIRE(divs.size() == 3);
    for (size_t i = 0; i + 1 < divs.size(); ++i) {
      auto [q, r] = fpoly_divmod(F2, divs[i + 1], divs[i]);
      (void)q;
      REQUIRE(fpoly_is_zero(r));
    }
    FPoly prod{1};
    for (const auto& d : divs) prod = fpoly_mul(F2, prod, d);
    fpoly_trim(prod);
    FPoly det = pmat_det(F2, a);
    // both sides monic over F2, so plain equality
    REQUIRE(prod == det);
  }

  SECTION("non-monomial divisors are rejected by the type extractor") {
    PolyMat a = pmat_zero(2);
    a.at(0, 0) = FPoly{1, 1};  // t + 1
    a.at(1, 1) = FPoly{0, 1};  // t
    REQUIRE_THROWS_AS(pmat_divisor_type(F2, a), CheckError);
  }
}

TEST_CASE("truncated Laurent inverses") {
  FieldTower T3(3);
  Field F{&T3, 1};

  SECTION("unimodular matrix inverts to its adjugate") {
    // det = (1)(1 + t^3) - t * t^2 = 1
    PolyMat a = pmat_from_strings(F, 2, {{{1}, {0, 1}}, {{0, 0, 1}, {1, 0, 0, 1}}});
    REQUIRE(pmat_det(F, a) == FPoly{1});
    LaurentMat inv = lmat_inverse_trunc(F, a, 7);
    REQUIRE(inv.vmin == 0);
    require_laurent_inverse(F, a, inv, 7);
  }

  SECTION("matrix with monomial determinant gets negative valuations") {
    PolyMat a = pmat_from_strings(
        F, 2, {{{0, 0, 1}, {0, 0, 0, 2}}, {{0}, {0, 0, 1, 1}}});
    // det = t^2 * (t^2)(1 + t) = t^4 + t^5
    LaurentMat inv = lmat_inverse_trunc(F, a, 4);
    REQUIRE(inv.vmin == -4);
    require_laurent_inverse(F, a, inv, 4);
  }

  SECTION("identity-plus-nilpotent series") {
    PolyMat a = pmat_from_strings(
        F, 3,
        {{{1}, {0, 2}, {0, 1, 1}}, {{0, 1}, {1}, {0, 2}}, {{0, 0, 1}, {0, 1}, {1}}});
    LaurentMat inv = lmat_inverse_trunc(F, a, 5);
    require_laurent_inverse(F, a, inv, 5);
  }

  SECTION("singular matrices are rejected") {
    PolyMat a = pmat_zero(2);
    a.at(0, 0) = FPoly{0, 1};
    REQUIRE_THROWS_AS(lmat_inverse_trunc(F, a, 3), CheckError);
  }
}

TEST_CASE("digit packing round trip") {
  FieldTower T5(5);
  Field F{&T5, 1};
  REQUIRE(pmat_key_fits(2, 3, 5));
  REQUIRE(pmat_key_fits(3, 4, 2));
  REQUIRE_FALSE(pmat_key_fits(3, 4, 5));

  PolyMat a = pmat_zero(2);
  a.at(0, 0) = FPoly{3, 0, 1};
  a.at(0, 1) = FPoly{0, 4};
  a.at(1, 0) = FPoly{2};
  a.at(1, 1) = FPoly{1, 1, 2};
  uint64_t key = pmat_key(a, 3, 5);
  PolyMat back = pmat_unkey(key, 2, 3, 5);
  REQUIRE(pmat_equal(back, pmat_trunc(a, 3)));

  // keys order matrices by their top digits; the zero matrix is key 0
  REQUIRE(pmat_key(pmat_zero(2), 3, 5) == 0);
  // truncation beyond M drops digits and changes the key accordingly
  PolyMat c = a;
  c.at(1, 1) = FPoly{1, 1};
  REQUIRE(pmat_key(c, 2, 5) == pmat_key(a, 2, 5));
}
