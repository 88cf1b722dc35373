#pragma once

// Exact arithmetic in cyclotomic number fields Q(zeta_m).  Elements are
// stored as coordinate vectors in the power basis 1, zeta, ..., zeta^{d-1}
// of Q[X]/(Phi_m), where Phi_m is the m-th cyclotomic polynomial and
// d = deg Phi_m.  Mixed-conductor operations lift both operands to the least
// common multiple conductor, so values of different conductors compare and
// combine exactly.

#include <gmpxx.h>

#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hp1/error.hpp"

namespace hp1 {

using Rat = mpq_class;

// mpq_class(n, d) does not canonicalize; this does.
inline Rat frac(long num, long den) {
  check(den != 0, "fraction with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Dense polynomials over Q, coefficients in ascending degree order, trimmed.
// ---------------------------------------------------------------------------

using QPoly = std::vector<Rat>;

inline void poly_trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly poly_add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  poly_trim(r);
  return r;
}

inline QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  poly_trim(r);
  return r;
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  poly_trim(r);
  return r;
}

// Division with remainder.  The divisor may have any nonzero leading
// coefficient.
inline std::pair<QPoly, QPoly> poly_divmod(QPoly num, const QPoly& den) {
  check(!den.empty(), "polynomial division by zero");
  QPoly quo;
  if (num.size() >= den.size()) quo.assign(num.size() - den.size() + 1, Rat(0));
  while (num.size() >= den.size()) {
    Rat c = num.back() / den.back();
    size_t shift = num.size() - den.size();
    quo[shift] = c;
    for (size_t i = 0; i + 1 < den.size(); ++i)
      if (den[i] != 0) num[shift + i] -= c * den[i];
    num.pop_back();  // the leading term cancels exactly
    poly_trim(num);
  }
  return {std::move(quo), std::move(num)};
}

inline QPoly poly_mod(const QPoly& num, const QPoly& den) {
  return poly_divmod(num, den).second;
}

// Inverse of f modulo `mod` via the extended Euclidean algorithm.  Requires
// gcd(f, mod) to be a nonzero constant (always true when mod is irreducible
// and f is a nonzero residue).
inline QPoly poly_mod_inverse(const QPoly& f, const QPoly& mod) {
  QPoly r0 = mod, r1 = poly_mod(f, mod);
  check(!r1.empty(), "inverse of zero residue");
  QPoly u0, u1{Rat(1)};
  while (!r1.empty()) {
    auto [q, r2] = poly_divmod(r0, r1);
    QPoly u2 = poly_sub(u0, poly_mul(q, u1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  check(r0.size() == 1, "residue is a zero divisor; cannot invert");
  QPoly inv(u0.size());
  for (size_t i = 0; i < u0.size(); ++i) inv[i] = u0[i] / r0[0];
  return poly_mod(inv, mod);
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials, computed by exact division of X^m - 1 by the
// cyclotomic polynomials of the proper divisors of m.  Cached per conductor.
// ---------------------------------------------------------------------------

inline const QPoly& cyclotomic_poly(unsigned m) {
  static std::map<unsigned, QPoly> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  check(m >= 1, "conductor must be positive");
  QPoly num(m + 1, Rat(0));
  num[0] = -1;
  num[m] = 1;
  for (unsigned d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto [q, r] = poly_divmod(num, cyclotomic_poly(d));
    check(r.empty(), "cyclotomic polynomial division must be exact");
    num = std::move(q);
  }
  return cache.emplace(m, std::move(num)).first->second;
}

inline unsigned cyclotomic_degree(unsigned m) {
  return static_cast<unsigned>(cyclotomic_poly(m).size()) - 1;
}

// ---------------------------------------------------------------------------
// Elements of Q(zeta_m).
// ---------------------------------------------------------------------------

class Cyclotomic {
 public:
  Cyclotomic() : m_(1), c_(1, Rat(0)) {}
  explicit Cyclotomic(long n) : m_(1), c_(1, Rat(n)) {}
  explicit Cyclotomic(const Rat& r) : m_(1), c_(1, r) {}

  // zeta_m^power as an element of conductor m.
  static Cyclotomic root_of_unity(unsigned m, long power) {
    check(m >= 1, "conductor must be positive");
    long e = ((power % static_cast<long>(m)) + m) % m;
    QPoly p(static_cast<size_t>(e) + 1, Rat(0));
    p.back() = 1;
    Cyclotomic z;
    z.m_ = m;
    z.assign_reduced_(std::move(p));
    return z;
  }

  unsigned conductor() const { return m_; }

  bool is_zero() const {
    for (const Rat& x : c_)
      if (x != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }

  Rat rational_value() const {
    check(is_rational(), "value is not rational");
    return c_[0];
  }

  // Reinterpret at conductor M (requires m | M): zeta_m = zeta_M^{M/m}.
  Cyclotomic lifted(unsigned M) const {
    check(M % m_ == 0, "conductor lift must be to a multiple");
    if (M == m_) return *this;
    unsigned stride = M / m_;
    QPoly p((c_.size() - 1) * stride + 1, Rat(0));
    for (size_t j = 0; j < c_.size(); ++j) p[j * stride] = c_[j];
    Cyclotomic z;
    z.m_ = M;
    z.assign_reduced_(std::move(p));
    return z;
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = unify_(a, b);
    x.assign_reduced_(poly_add(x.c_, y.c_));
    return x;
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = unify_(a, b);
    x.assign_reduced_(poly_sub(x.c_, y.c_));
    return x;
  }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    auto [x, y] = unify_(a, b);
    x.assign_reduced_(poly_mul(x.c_, y.c_));
    return x;
  }
  Cyclotomic operator-() const {
    Cyclotomic z = *this;
    for (Rat& x : z.c_) x = -x;
    return z;
  }
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) {
    return a * b.inverse();
  }
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
  Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

  Cyclotomic inverse() const {
    check(!is_zero(), "division by zero");
    Cyclotomic z;
    z.m_ = m_;
    QPoly f = c_;
    poly_trim(f);
    z.assign_reduced_(poly_mod_inverse(f, cyclotomic_poly(m_)));
    return z;
  }

  // The field automorphism zeta^j -> zeta^{aj}; requires gcd(a, m) = 1.
  Cyclotomic galois(long a) const {
    long e = ((a % static_cast<long>(m_)) + m_) % m_;
    check(std::gcd(static_cast<unsigned>(e), m_) == 1,
          "galois exponent must be coprime to the conductor");
    QPoly p(m_, Rat(0));
    for (size_t j = 0; j < c_.size(); ++j) p[(j * e) % m_] += c_[j];
    Cyclotomic z;
    z.m_ = m_;
    z.assign_reduced_(std::move(p));
    return z;
  }

  // Complex conjugation.
  Cyclotomic conj() const { return galois(-1); }

  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    unsigned M = std::lcm(a.m_, b.m_);
    Cyclotomic x = a.lifted(M), y = b.lifted(M);
    return x.c_ == y.c_;
  }
  friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) {
    return !(a == b);
  }

  std::string str() const {
    std::ostringstream os;
    if (is_rational()) {
      os << c_[0].get_str();
    } else {
      os << "z" << m_ << "[";
      for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << ",";
        os << c_[i].get_str();
      }
      os << "]";
    }
    return os.str();
  }

 private:
  unsigned m_;
  std::vector<Rat> c_;  // exactly cyclotomic_degree(m_) entries

  // Set the coordinate vector to p mod Phi_{m_}, padded to full length.
  void assign_reduced_(QPoly p) {
    const QPoly& phi = cyclotomic_poly(m_);
    if (p.size() >= phi.size()) p = poly_mod(p, phi);
    p.resize(phi.size() - 1, Rat(0));
    c_ = std::move(p);
  }

  static std::pair<Cyclotomic, Cyclotomic> unify_(const Cyclotomic& a,
                                                  const Cyclotomic& b) {
    unsigned M = std::lcm(a.m_, b.m_);
    return {a.lifted(M), b.lifted(M)};
  }
};

}  // namespace hp1
