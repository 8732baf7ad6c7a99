#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace cutfn {

// Exact rational scalar. Thin value wrapper around GMP's mpq_class that keeps
// every instance canonical: reduced to lowest terms, denominator positive.
//
// The canonical text form is "p/q" with gcd(p,q) = 1, q >= 1, and "/q"
// omitted when q = 1 (so "3", "-2", "5/8"). parse() accepts exactly that
// grammar plus an explicit "/1" suffix and rejects everything else, including
// unreduced fractions, leading zeros and a leading '+'.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit by design, mirrors int
  Rational(long num, long den);
  explicit Rational(const mpq_class& q);

  static Rational parse(std::string_view text);

  // 2^e for any integer e (e may be negative).
  static Rational pow2(long e);

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational abs() const;
  mpz_class floor() const;
  // Fractional representative in [0, 1).
  Rational mod1() const;
  // this^e for e >= 0.
  Rational pow(unsigned long e) const;

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  // Canonical "p/q" text.
  std::string str() const;
  // Fixed-point decimal with the given number of fraction digits, rounded to
  // nearest with ties away from zero. Deterministic; used at CSV boundaries.
  std::string decimal(unsigned digits) const;

  double to_double() const { return q_.get_d(); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ + b.q_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ - b.q_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mpq_class(a.q_ * b.q_));
  }
  friend Rational operator/(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a) {
    return Rational(mpq_class(-a.q_));
  }

  Rational& operator+=(const Rational& b) {
    q_ += b.q_;
    return *this;
  }
  Rational& operator-=(const Rational& b) {
    q_ -= b.q_;
    return *this;
  }
  Rational& operator*=(const Rational& b) {
    q_ *= b.q_;
    return *this;
  }
  Rational& operator/=(const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    int c = mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class q_;
};

inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace cutfn
