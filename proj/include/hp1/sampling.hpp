#pragma once
// Deterministic sampling of loop-group elements for randomized property
// suites.  A tiny fixed-constant linear congruential generator keeps runs
// reproducible across platforms; the element builders produce integral
// matrices (invertible constant term times elementary polynomial factors),
// congruence elements (trivial constant term), and two-sided products
// u * t^lambda * u' whose elementary-divisor type is the sorted exponent
// vector by construction.

#include <cstdint>
#include <vector>

#include "loophecke.hpp"

namespace hp1 {

struct SampleRng {
  uint32_t x;
  explicit SampleRng(uint32_t seed) : x(seed) {}
  unsigned next(unsigned mod) {
    x = x * 1103515245u + 12345u;
    return (x >> 8) % mod;
  }
};

// Random element of the integral loop group: an invertible constant matrix
// times a product of elementary factors 1 + v * t^d * E_{ij}.
inline LMat random_integral_element(const Field& F, unsigned N, unsigned depth,
                                    SampleRng& rng) {
  const unsigned q = static_cast<unsigned>(F.size());
  FMat c = fmat_zero(N, N);
  do {
    for (unsigned i = 0; i < N; ++i)
      for (unsigned j = 0; j < N; ++j) c[i][j] = rng.next(q);
  } while (fmat_det(F, c) == 0);
  LMat m = lmat_const(F, c);
  for (unsigned k = 0; k < 2 * N; ++k) {
    unsigned i = rng.next(N), j = rng.next(N);
    unsigned d = 1 + rng.next(depth);
    unsigned v = 1 + rng.next(q - 1);
    PolyMat g = pmat_identity(N);
    FPoly& e = g.at(i, j);
    e.resize(d + 1, 0);
    e[d] = v;
    m = lmat_mul(F, m, lmat_of(g));
  }
  return m;
}

// Random element of the congruence kernel (identity constant term).
inline LMat random_congruence_element(const Field& F, unsigned N,
                                      unsigned depth, SampleRng& rng) {
  const unsigned q = static_cast<unsigned>(F.size());
  LMat m = lmat_one(N);
  for (unsigned k = 0; k < 2 * N + 1; ++k) {
    unsigned i = rng.next(N), j = rng.next(N);
    unsigned d = 1 + rng.next(depth);
    unsigned v = 1 + rng.next(q - 1);
    PolyMat g = pmat_identity(N);
    FPoly& e = g.at(i, j);
    e.resize(d + 1, 0);
    e[d] = v;
    m = lmat_mul(F, m, lmat_of(g));
  }
  return m;
}

// u * t^lambda * u' with integral u, u'.  The multiset of exponents is the
// elementary-divisor type of the result.
inline LMat random_two_sided(const Field& F, unsigned N,
                             const std::vector<int>& lam, unsigned depth,
                             SampleRng& rng) {
  LMat u = random_integral_element(F, N, depth, rng);
  LMat v = random_integral_element(F, N, depth, rng);
  return lmat_mul(F, lmat_mul(F, u, lmat_tpow(lam)), v);
}

// Random exponent vector with entries in [-bound, bound].
inline std::vector<int> random_exponents(unsigned N, int bound,
                                         SampleRng& rng) {
  std::vector<int> lam(N);
  for (unsigned i = 0; i < N; ++i)
    lam[i] = static_cast<int>(rng.next(2 * bound + 1)) - bound;
  return lam;
}

}  // namespace hp1
