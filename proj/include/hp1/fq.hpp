#pragma once

// Finite field tower k = F_q ⊂ k_2 ⊂ k_3 ⊂ ... for prime q.  Level i is the
// field with q^i elements, modeled as F_q[X]/(f_i) with f_i the
// lexicographically least monic irreducible of degree i (coefficients
// compared from the highest degree down, 0 < 1 < ... < q-1).  Elements are
// encoded as integers in [0, q^i): the base-q digits are the coefficients of
// the residue polynomial in ascending degree.
//
// Each level carries exp/log tables for a distinguished generator g_i of
// k_i^x.  Generators are chosen norm-compatibly: g_i is the least primitive
// element (in encoding order) whose (q^i-1)/(q^j-1) power has the same
// minimal polynomial as g_j for every proper divisor j of i.  The embedding
// k_j -> k_i is then the power map g_j^t -> g_i^{t(q^i-1)/(q^j-1)}, which
// makes all embedding triangles commute by exponent arithmetic alone.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hp1/error.hpp"

namespace hp1 {

class FieldTower {
 public:
  explicit FieldTower(unsigned q) : q_(q) {
    check(q >= 2, "field size must be at least 2");
    for (unsigned d = 2; d * d <= q; ++d)
      check(q % d != 0, "field tower base must be prime");
  }

  unsigned q() const { return q_; }

  // q^i, building the level on demand.
  unsigned size(unsigned i) const {
    ensure_level(i);
    return level_(i).size;
  }
  unsigned order(unsigned i) const { return size(i) - 1; }

  // --- arithmetic on encodings at level i ---

  unsigned add(unsigned i, unsigned a, unsigned b) const {
    ensure_level(i);
    unsigned r = 0, place = 1;
    for (unsigned d = 0; d < i; ++d) {
      unsigned s = (a % q_ + b % q_) % q_;
      r += s * place;
      place *= q_;
      a /= q_;
      b /= q_;
    }
    return r;
  }

  unsigned neg(unsigned i, unsigned a) const {
    ensure_level(i);
    unsigned r = 0, place = 1;
    for (unsigned d = 0; d < i; ++d) {
      unsigned s = (q_ - a % q_) % q_;
      r += s * place;
      place *= q_;
      a /= q_;
    }
    return r;
  }

  unsigned sub(unsigned i, unsigned a, unsigned b) const {
    return add(i, a, neg(i, b));
  }

  unsigned mul(unsigned i, unsigned a, unsigned b) const {
    ensure_level(i);
    if (a == 0 || b == 0) return 0;
    const Level& L = level_(i);
    return L.exp[(static_cast<uint64_t>(L.log[a]) + L.log[b]) % L.ord];
  }

  unsigned inv(unsigned i, unsigned a) const {
    ensure_level(i);
    check(a != 0, "inverse of zero field element");
    const Level& L = level_(i);
    return L.exp[(L.ord - L.log[a]) % L.ord];
  }

  unsigned pow(unsigned i, unsigned a, long e) const {
    ensure_level(i);
    if (a == 0) {
      check(e > 0, "zero to a nonpositive power");
      return 0;
    }
    const Level& L = level_(i);
    long t = (static_cast<long>(L.log[a]) * (e % static_cast<long>(L.ord))) %
             static_cast<long>(L.ord);
    if (t < 0) t += L.ord;
    return L.exp[t];
  }

  // Constant n mod q, valid at every level.
  unsigned from_int(long n) const {
    long r = n % static_cast<long>(q_);
    if (r < 0) r += q_;
    return static_cast<unsigned>(r);
  }

  // Independent product (polynomial multiplication mod f_i, no tables);
  // used to build the tables and kept public as a cross-check oracle.
  unsigned mul_direct(unsigned i, unsigned a, unsigned b) const {
    ensure_level(i);
    return encode_(polymul_mod_(decode_(i, a), decode_(i, b), level_(i).modulus));
  }

  unsigned generator(unsigned i) const {
    ensure_level(i);
    return level_(i).gen;
  }

  // Defining polynomial, coefficients ascending, length i+1, leading 1.
  const std::vector<unsigned>& modulus(unsigned i) const {
    ensure_level(i);
    return level_(i).modulus;
  }

  long dlog(unsigned i, unsigned x) const {
    ensure_level(i);
    check(x != 0, "discrete log of zero");
    return level_(i).log[x];
  }

  unsigned from_dlog(unsigned i, long t) const {
    ensure_level(i);
    const Level& L = level_(i);
    long r = t % static_cast<long>(L.ord);
    if (r < 0) r += L.ord;
    return L.exp[r];
  }

  // --- tower structure ---

  unsigned embed(unsigned j, unsigned i, unsigned x) const {
    check(i % j == 0, "embedding requires divisible degrees");
    ensure_level(i);
    ensure_level(j);
    if (x == 0) return 0;
    uint64_t stride = (uint64_t(order(i))) / order(j);
    return from_dlog(i, static_cast<long>(dlog(j, x) * stride % order(i)));
  }

  // Inverse of embed: re-encode an element of k_i lying in the image of k_j.
  unsigned restrict_code(unsigned i, unsigned j, unsigned x) const {
    check(i % j == 0, "restriction requires divisible degrees");
    if (x == 0) return 0;
    uint64_t stride = (uint64_t(order(i))) / order(j);
    uint64_t t = static_cast<uint64_t>(dlog(i, x));
    check(t % stride == 0, "element does not lie in the requested subfield");
    return from_dlog(j, static_cast<long>(t / stride));
  }

  // Norm from k_i to k_j (j | i): product of the Galois conjugates over k_j,
  // returned as a k_j encoding.
  unsigned norm(unsigned i, unsigned j, unsigned x) const {
    check(i % j == 0, "norm requires divisible degrees");
    check(x != 0, "norm of zero");
    long t = dlog(i, x) % static_cast<long>(order(j));
    return from_dlog(j, t);
  }

  unsigned frobenius(unsigned i, unsigned x) const {
    if (x == 0) return 0;
    return pow(i, x, static_cast<long>(q_));
  }

  // Trace from k_i to k_j (j | i): sum of the Galois conjugates over k_j.
  unsigned trace(unsigned i, unsigned j, unsigned x) const {
    check(i % j == 0, "trace requires divisible degrees");
    unsigned acc = 0, c = x;
    for (unsigned l = 0; l < i / j; ++l) {
      acc = add(i, acc, c);
      for (unsigned s = 0; s < j; ++s) c = frobenius(i, c);
    }
    return restrict_code(i, j, acc);
  }

  // Least d | i with x in (the image of) k_d.
  unsigned minimal_level(unsigned i, unsigned x) const {
    ensure_level(i);
    if (x == 0 || x == 1) return 1;
    uint64_t t = static_cast<uint64_t>(dlog(i, x));
    for (unsigned d = 1; d <= i; ++d) {
      if (i % d != 0) continue;
      uint64_t stride = uint64_t(order(i)) / (ipow_(q_, d) - 1);
      if (t % stride == 0) return d;
    }
    fail("minimal level search failed");
  }

  // Minimal polynomial of x over F_q: prod_{l < d} (X - x^{q^l}) with
  // d = minimal_level.  Coefficients ascending, all in [0, q), monic.
  std::vector<unsigned> min_poly(unsigned i, unsigned x) const {
    unsigned d = (x == 0) ? 1 : minimal_level(i, x);
    std::vector<unsigned> p{1};  // polynomial 1, coefficients in k_i encodings
    unsigned c = x;
    for (unsigned l = 0; l < (x == 0 ? 1u : d); ++l) {
      // multiply p by (X - c)
      std::vector<unsigned> np(p.size() + 1, 0);
      for (size_t a = 0; a < p.size(); ++a) {
        np[a + 1] = add(i, np[a + 1], p[a]);
        np[a] = add(i, np[a], mul(i, neg(i, c), p[a]));
      }
      p = std::move(np);
      c = frobenius(i, c);
    }
    std::vector<unsigned> out(p.size());
    for (size_t a = 0; a < p.size(); ++a) {
      check(p[a] < q_, "minimal polynomial coefficient outside the base field");
      out[a] = p[a];
    }
    return out;
  }

  // --- Frobenius orbits (closed points of the multiplicative group) ---

  struct Divisor {
    unsigned degree;  // orbit size
    unsigned rep;     // least orbit element, encoded at level = degree
    friend bool operator==(const Divisor&, const Divisor&) = default;
    friend auto operator<=>(const Divisor&, const Divisor&) = default;
  };

  Divisor orbit_of(unsigned i, unsigned x) const {
    check(x != 0, "orbit of zero");
    unsigned d = minimal_level(i, x);
    unsigned y = restrict_code(i, d, x);
    unsigned best = y, c = y;
    for (unsigned l = 1; l < d; ++l) {
      c = frobenius(d, c);
      best = std::min(best, c);
    }
    return Divisor{d, best};
  }

  std::vector<unsigned> orbit_elements(const Divisor& dv, unsigned i) const {
    check(i % dv.degree == 0, "orbit does not live at the requested level");
    std::vector<unsigned> out;
    unsigned c = embed(dv.degree, i, dv.rep);
    for (unsigned l = 0; l < dv.degree; ++l) {
      out.push_back(c);
      c = frobenius(i, c);
    }
    return out;
  }

  // All degree-d orbits, ordered by representative encoding.
  std::vector<Divisor> divisors_of_degree(unsigned d) const {
    ensure_level(d);
    std::vector<Divisor> out;
    for (unsigned x = 1; x < size(d); ++x) {
      if (minimal_level(d, x) != d) continue;
      bool least = true;
      unsigned c = x;
      for (unsigned l = 1; l < d && least; ++l) {
        c = frobenius(d, c);
        if (c < x) least = false;
      }
      if (least) out.push_back(Divisor{d, x});
    }
    return out;
  }

 private:
  struct Level {
    unsigned deg = 0;
    unsigned size = 0;
    unsigned ord = 0;  // size - 1
    std::vector<unsigned> modulus;
    unsigned gen = 0;
    std::vector<unsigned> exp;  // exp[t] = encoding of gen^t, t in [0, ord)
    std::vector<unsigned> log;  // log[exp[t]] = t; log[0] unused
  };

  unsigned q_;
  mutable std::map<unsigned, Level> levels_;

  static uint64_t ipow_(unsigned b, unsigned e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
  }

  const Level& level_(unsigned i) const { return levels_.at(i); }

  std::vector<unsigned> decode_(unsigned i, unsigned a) const {
    std::vector<unsigned> c(i, 0);
    for (unsigned d = 0; d < i; ++d) {
      c[d] = a % q_;
      a /= q_;
    }
    return c;
  }

  unsigned encode_(const std::vector<unsigned>& c) const {
    unsigned r = 0;
    for (size_t d = c.size(); d-- > 0;) r = r * q_ + c[d];
    return r;
  }

  // Dense polynomial helpers over F_q (coefficients as plain residues).
  std::vector<unsigned> polymul_mod_(const std::vector<unsigned>& a,
                                     const std::vector<unsigned>& b,
                                     const std::vector<unsigned>& mod) const {
    std::vector<unsigned> r(a.size() + b.size() - 1, 0);
    for (size_t x = 0; x < a.size(); ++x) {
      if (a[x] == 0) continue;
      for (size_t y = 0; y < b.size(); ++y)
        r[x + y] = (r[x + y] + a[x] * b[y]) % q_;
    }
    // reduce mod the monic polynomial `mod`
    size_t n = mod.size() - 1;
    for (size_t d = r.size(); d-- > n;) {
      unsigned c = r[d];
      if (c == 0) continue;
      r[d] = 0;
      for (size_t l = 0; l < n; ++l)
        r[d - n + l] = (r[d - n + l] + c * (q_ - mod[l] % q_)) % q_;
    }
    r.resize(n, 0);
    while (r.size() < n) r.push_back(0);
    return r;
  }

  std::vector<unsigned> polypow_mod_(std::vector<unsigned> base, uint64_t e,
                                     const std::vector<unsigned>& mod) const {
    std::vector<unsigned> acc{1};
    while (e > 0) {
      if (e & 1) acc = polymul_mod_(acc, base, mod);
      base = polymul_mod_(base, base, mod);
      e >>= 1;
    }
    return acc;
  }

  bool poly_is_x_(const std::vector<unsigned>& p) const {
    if (p.size() < 2 || p[1] != 1) return false;
    if (p[0] != 0) return false;
    for (size_t l = 2; l < p.size(); ++l)
      if (p[l] != 0) return false;
    return true;
  }

  static std::vector<unsigned> prime_factors_(uint64_t n) {
    std::vector<unsigned> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
      if (n % d) continue;
      out.push_back(static_cast<unsigned>(d));
      while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(static_cast<unsigned>(n));
    return out;
  }

  // Multiplicative order check without tables: c^(ord/r) != 1 for all prime
  // r | ord, using polynomial arithmetic mod f_i.
  bool is_primitive_(unsigned i, unsigned c,
                     const std::vector<unsigned>& factors) const {
    const Level& L = level_(i);
    for (unsigned r : factors) {
      auto p = polypow_mod_(decode_(i, c), L.ord / r, L.modulus);
      if (encode_(p) == 1) return false;
    }
    return true;
  }

  void ensure_level(unsigned i) const {
    check(i >= 1, "field level must be positive");
    if (levels_.count(i)) return;
    for (unsigned j = 1; j < i; ++j)
      if (i % j == 0) ensure_level(j);

    Level L;
    L.deg = i;
    uint64_t sz = ipow_(q_, i);
    check(sz <= (1u << 28), "field level too large to tabulate");
    L.size = static_cast<unsigned>(sz);
    L.ord = L.size - 1;

    // Defining polynomial: least monic irreducible of degree i.  The
    // encoding order coincides with lexicographic order on coefficient
    // tuples read from the highest degree down.
    for (unsigned code = 0;; ++code) {
      check(code < L.size, "no irreducible polynomial found");
      std::vector<unsigned> f = decode_(i, code);
      f.push_back(1);
      if (!irreducible_(i, f)) continue;
      L.modulus = std::move(f);
      break;
    }

    // Generator: least primitive element whose norms down the tower hit
    // generators with matching minimal polynomials.
    levels_.emplace(i, std::move(L));
    Level& lv = levels_.at(i);
    auto factors = prime_factors_(lv.ord);
    unsigned gen = 0;
    for (unsigned c = 1; c < lv.size; ++c) {
      if (lv.ord > 1 && c == 1) continue;
      if (!is_primitive_(i, c, factors)) continue;
      if (!norm_compatible_(i, c)) continue;
      gen = c;
      break;
    }
    check(gen != 0 || lv.ord == 0, "no compatible generator found");
    if (lv.ord == 0) fail("degenerate field level");
    lv.gen = gen;

    lv.exp.assign(lv.ord, 0);
    lv.log.assign(lv.size, 0);
    std::vector<unsigned> p{1};
    for (unsigned t = 0; t < lv.ord; ++t) {
      unsigned code = encode_(p);
      lv.exp[t] = code;
      check(t == 0 || code != 1, "generator order is too small");
      lv.log[code] = t;
      p = polymul_mod_(p, decode_(i, gen), lv.modulus);
    }
    check(encode_(p) == 1, "generator order mismatch");
  }

  bool irreducible_(unsigned i, const std::vector<unsigned>& f) const {
    if (i == 1) return true;
    std::vector<unsigned> x{0, 1};
    // f must divide X^(q^i) - X ...
    auto p = polypow_mod_(x, ipow_(q_, i), f);
    if (!poly_is_x_(p)) return false;
    // ... and share no factor with X^(q^(i/r)) - X for any prime r | i.
    for (unsigned r : prime_factors_(i)) {
      auto s = polypow_mod_(x, ipow_(q_, i / r), f);
      if (s.size() < 2) s.resize(2, 0);
      s[1] = (s[1] + q_ - 1) % q_;  // subtract X
      if (gcd_degree_(s, f) > 0) return false;
    }
    return true;
  }

  unsigned digit_inv_(unsigned u) const {
    for (unsigned v = 1; v < q_; ++v)
      if (u * v % q_ == 1) return v;
    fail("digit has no inverse");
  }

  // Degree of gcd(a, b) over F_q; the zero polynomial acts as absorbing.
  unsigned gcd_degree_(std::vector<unsigned> a, std::vector<unsigned> b) const {
    auto trim = [](std::vector<unsigned>& v) {
      while (!v.empty() && v.back() == 0) v.pop_back();
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
      unsigned linv = digit_inv_(b.back());
      while (a.size() >= b.size()) {
        unsigned c = a.back() * linv % q_;
        size_t shift = a.size() - b.size();
        for (size_t l = 0; l < b.size(); ++l)
          a[shift + l] = (a[shift + l] + c * (q_ - b[l]) ) % q_;
        trim(a);
        check(a.size() < shift + b.size(), "polynomial gcd failed to reduce");
      }
      std::swap(a, b);
    }
    check(!a.empty(), "gcd of two zero polynomials");
    return static_cast<unsigned>(a.size()) - 1;
  }

  // Conway-style condition: for each proper divisor j of i, the power
  // c^((q^i-1)/(q^j-1)) must have the same minimal polynomial as the level-j
  // generator.
  bool norm_compatible_(unsigned i, unsigned c) const {
    const Level& lv = level_(i);
    for (unsigned j = 1; j < i; ++j) {
      if (i % j != 0) continue;
      uint64_t stride = uint64_t(lv.ord) / (ipow_(q_, j) - 1);
      auto h = polypow_mod_(decode_(i, c), stride, lv.modulus);
      if (minpoly_raw_(i, encode_(h), j) != minpoly_raw_(j, level_(j).gen, j))
        return false;
    }
    return true;
  }

  // Minimal polynomial over F_q of an element with minimal level dividing d,
  // computed without exp/log tables (used during construction).
  std::vector<unsigned> minpoly_raw_(unsigned i, unsigned x, unsigned d) const {
    const Level& lv = level_(i);
    // collect the distinct Frobenius conjugates
    std::vector<unsigned> orbit;
    unsigned c = x;
    do {
      orbit.push_back(c);
      c = encode_(polypow_mod_(decode_(i, c), q_, lv.modulus));
    } while (c != x);
    check(d % orbit.size() == 0, "conjugate orbit has unexpected size");
    std::vector<unsigned> p(1, 1);  // over k_i, encodings
    for (unsigned y : orbit) {
      std::vector<unsigned> np(p.size() + 1, 0);
      for (size_t a = 0; a < p.size(); ++a) {
        // np += X*p - y*p, all arithmetic on encodings at level i
        np[a + 1] = addenc_(i, np[a + 1], p[a]);
        np[a] = addenc_(i, np[a], mulenc_(i, negenc_(i, y), p[a]));
      }
      p = std::move(np);
    }
    std::vector<unsigned> out(p.size());
    for (size_t a = 0; a < p.size(); ++a) {
      check(p[a] < q_, "minimal polynomial left the base field");
      out[a] = p[a];
    }
    return out;
  }

  // Table-free arithmetic used by minpoly_raw_ during construction.
  unsigned addenc_(unsigned i, unsigned a, unsigned b) const {
    unsigned r = 0, place = 1;
    for (unsigned d = 0; d < i; ++d) {
      r += ((a % q_ + b % q_) % q_) * place;
      place *= q_;
      a /= q_;
      b /= q_;
    }
    return r;
  }
  unsigned negenc_(unsigned i, unsigned a) const {
    unsigned r = 0, place = 1;
    for (unsigned d = 0; d < i; ++d) {
      r += ((q_ - a % q_) % q_) * place;
      place *= q_;
      a /= q_;
    }
    return r;
  }
  unsigned mulenc_(unsigned i, unsigned a, unsigned b) const {
    return encode_(polymul_mod_(decode_(i, a), decode_(i, b), level_(i).modulus));
  }
};

// Lightweight view of a single tower level: the coefficient field most
// computations run over.  Copyable, cheap, and comparable.
struct Field {
  const FieldTower* T = nullptr;
  unsigned level = 1;

  unsigned size() const { return T->size(level); }
  unsigned order() const { return T->order(level); }
  unsigned characteristic() const { return T->q(); }
  unsigned add(unsigned a, unsigned b) const { return T->add(level, a, b); }
  unsigned sub(unsigned a, unsigned b) const { return T->sub(level, a, b); }
  unsigned neg(unsigned a) const { return T->neg(level, a); }
  unsigned mul(unsigned a, unsigned b) const { return T->mul(level, a, b); }
  unsigned inv(unsigned a) const { return T->inv(level, a); }
  unsigned pow(unsigned a, long e) const { return T->pow(level, a, e); }
  unsigned from_int(long n) const {
    return T->embed(1, level, T->from_int(n));
  }
  unsigned generator() const { return T->generator(level); }
};

}  // namespace hp1
