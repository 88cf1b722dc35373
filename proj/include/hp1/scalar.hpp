#pragma once

// The coefficient ring for all representation-theoretic computations:
// Q(zeta_m)[sqrt(q)], i.e. cyclotomic numbers with a formal square root of
// the residue field size adjoined.  A value is stored as a + b*s with
// s^2 = q.  The ring is a field unless sqrt(q) already lies in the
// cyclotomic part; inversion detects that case and raises a hard error
// instead of dividing by a zero divisor.

#include <string>

#include "hp1/cyclotomic.hpp"
#include "hp1/error.hpp"

namespace hp1 {

class Scalar {
 public:
  Scalar() : q_(0) {}
  Scalar(long n) : a_(n), q_(0) {}
  explicit Scalar(const Rat& r) : a_(r), q_(0) {}
  explicit Scalar(const Cyclotomic& a) : a_(a), q_(0) {}

  static Scalar sqrt_q(unsigned q) {
    check(q >= 2, "square root base must be at least 2");
    Scalar s;
    s.b_ = Cyclotomic(1);
    s.q_ = q;
    return s;
  }

  // -(sqrt q)^{-1} = -sqrt(q)/q, the normalizing constant used throughout.
  static Scalar neg_inv_sqrt_q(unsigned q) {
    Scalar s = sqrt_q(q);
    s.b_ = Cyclotomic(frac(-1, static_cast<long>(q)));
    return s;
  }

  static Scalar root_of_unity(unsigned m, long power) {
    return Scalar(Cyclotomic::root_of_unity(m, power));
  }

  const Cyclotomic& plain_part() const { return a_; }
  const Cyclotomic& sqrt_part() const { return b_; }
  unsigned sqrt_base() const { return q_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero() && a_.is_rational(); }
  Rat rational_value() const {
    check(b_.is_zero(), "value involves the formal square root");
    return a_.rational_value();
  }

  friend Scalar operator+(const Scalar& x, const Scalar& y) {
    unsigned q = unify_(x, y);
    Scalar r;
    r.a_ = x.a_ + y.a_;
    r.b_ = x.b_ + y.b_;
    r.q_ = q;
    r.normalize_();
    return r;
  }
  friend Scalar operator-(const Scalar& x, const Scalar& y) {
    unsigned q = unify_(x, y);
    Scalar r;
    r.a_ = x.a_ - y.a_;
    r.b_ = x.b_ - y.b_;
    r.q_ = q;
    r.normalize_();
    return r;
  }
  friend Scalar operator*(const Scalar& x, const Scalar& y) {
    unsigned q = unify_(x, y);
    Scalar r;
    Cyclotomic qq{Rat(static_cast<long>(q))};
    r.a_ = x.a_ * y.a_ + qq * (x.b_ * y.b_);
    r.b_ = x.a_ * y.b_ + x.b_ * y.a_;
    r.q_ = q;
    r.normalize_();
    return r;
  }
  Scalar operator-() const {
    Scalar r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }
  friend Scalar operator/(const Scalar& x, const Scalar& y) {
    return x * y.inverse();
  }
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  Scalar inverse() const {
    check(!is_zero(), "division by zero");
    if (b_.is_zero()) {
      Scalar r;
      r.a_ = a_.inverse();
      return r;
    }
    // (a + b s)^{-1} = (a - b s) / (a^2 - q b^2).
    Cyclotomic qq{Rat(static_cast<long>(q_))};
    Cyclotomic den = a_ * a_ - qq * (b_ * b_);
    check(!den.is_zero(),
          "sqrt(q) lies in the cyclotomic part; the ring is not a field here");
    Cyclotomic dinv = den.inverse();
    Scalar r;
    r.a_ = a_ * dinv;
    r.b_ = -(b_ * dinv);
    r.q_ = q_;
    r.normalize_();
    return r;
  }

  Scalar pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar acc(1), base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  // Apply the automorphism zeta^j -> zeta^{aj} to both coordinates; the
  // formal square root is fixed.
  Scalar galois(long a) const {
    Scalar r;
    r.a_ = a_.galois(a);
    r.b_ = b_.galois(a);
    r.q_ = q_;
    r.normalize_();
    return r;
  }

  Scalar conj() const {
    Scalar r;
    r.a_ = a_.conj();
    r.b_ = b_.conj();
    r.q_ = q_;
    r.normalize_();
    return r;
  }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    unify_(x, y);
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

  std::string str() const {
    if (b_.is_zero()) return a_.str();
    return a_.str() + " + (" + b_.str() + ")*r" + std::to_string(q_);
  }

 private:
  Cyclotomic a_, b_;  // value = a + b * sqrt(q)
  unsigned q_;        // 0 whenever b = 0

  void normalize_() {
    if (b_.is_zero()) {
      b_ = Cyclotomic();
      q_ = 0;
    }
  }

  static unsigned unify_(const Scalar& x, const Scalar& y) {
    if (x.q_ == 0) return y.q_;
    if (y.q_ == 0) return x.q_;
    check(x.q_ == y.q_, "mixing square roots of different field sizes");
    return x.q_;
  }
};

}  // namespace hp1
