#pragma once

// Exact arithmetic in Q and Q(sqrt m).
//
// Rational wraps a canonical mpq_class: the denominator is positive and
// coprime to the numerator after every operation, so equality is structural.
// QuadValue is a + b*sqrt(m) with m square-free; for m < 0, sqrt(m) is
// i*sqrt(|m|). A value with b == 0 is stored with m == 0 and mixes freely
// with any radicand.

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "fordlab/error.hpp"

namespace fordlab {

class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I n) : v_(static_cast<long>(n)) {}  // NOLINT(implicit)
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(const mpq_class& q);

  const mpq_class& value() const { return v_; }
  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  Rational abs() const;
  Rational inverse() const;
  mpz_class floor() const;
  mpz_class ceil() const;
  double to_double() const { return v_.get_d(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "p" or "p/q".
  std::string str() const;
  static Rational parse(std::string_view text);

  std::uint64_t fingerprint(std::uint64_t seed) const;

  // Debug check of the canonical-form invariant.
  bool is_canonical() const;

 private:
  mpq_class v_;
};

// Largest k with k^2 | n and the square-free part n / k^2, by trial division
// up to `prime_limit`. Returns nullopt when a square factor larger than the
// limit cannot be ruled out.
std::optional<std::pair<mpz_class, mpz_class>> square_free_split(const mpz_class& n,
                                                                 unsigned long prime_limit = 65536);

class QuadValue {
 public:
  QuadValue() = default;
  template <std::integral I>
  QuadValue(I n) : a_(n) {}  // NOLINT(implicit)
  QuadValue(Rational a) : a_(std::move(a)) {}  // NOLINT(implicit)
  // a + b*sqrt(m). m need not be square-free; square factors move into b.
  QuadValue(Rational a, Rational b, long m);

  static QuadValue sqrt_of(long m) { return QuadValue(0, 1, m); }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_coeff() const { return b_; }
  long radicand() const { return m_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }
  bool is_real() const { return m_ >= 0; }
  bool is_integer() const { return is_rational() && a_.is_integer(); }

  QuadValue conjugate() const;  // a - b sqrt(m)
  Rational field_norm() const;  // a^2 - m b^2
  QuadValue inverse() const;

  // Real and imaginary parts of a value of an imaginary quadratic field, as
  // real QuadValues (the imaginary part has radicand |m|).
  QuadValue real_part() const;
  QuadValue imag_part() const;

  QuadValue& operator+=(const QuadValue& o);
  QuadValue& operator-=(const QuadValue& o);
  QuadValue& operator*=(const QuadValue& o);
  QuadValue& operator/=(const QuadValue& o);
  friend QuadValue operator+(QuadValue a, const QuadValue& b) { return a += b; }
  friend QuadValue operator-(QuadValue a, const QuadValue& b) { return a -= b; }
  friend QuadValue operator*(QuadValue a, const QuadValue& b) { return a *= b; }
  friend QuadValue operator/(QuadValue a, const QuadValue& b) { return a /= b; }
  QuadValue operator-() const;

  friend bool operator==(const QuadValue& x, const QuadValue& y) {
    return x.m_ == y.m_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

  // Canonically positive: rational part > 0, or rational part 0 and
  // radical coefficient > 0.
  bool canonically_positive() const {
    return a_.sign() > 0 || (a_.is_zero() && b_.sign() > 0);
  }

  // Text form `p/q` or `p/q+r/s*sqrt(m)`.
  std::string str() const;
  static QuadValue parse(std::string_view text);

  std::uint64_t fingerprint(std::uint64_t seed) const;
  double to_double() const;  // real values only; diagnostics and SVG

 private:
  void normalize();
  void settle() {
    if (b_.is_zero()) m_ = 0;
  }
  Rational a_;
  Rational b_;
  long m_ = 0;
};

// Common radicand of two values, or MixedRadicand.
long common_radicand(const QuadValue& x, const QuadValue& y);

QuadValue qv_mul(const QuadValue& x, const QuadValue& y);
int qv_sign_real(const QuadValue& x);
std::strong_ordering qv_cmp_real(const QuadValue& x, const QuadValue& y);
QuadValue qv_abs_real(const QuadValue& x);
Rational qv_abs2(const QuadValue& x);

// sqrt(q) for q >= 0 as b*sqrt(s), s square-free; nullopt when the
// square-free part cannot be certified (huge numbers).
std::optional<QuadValue> sqrt_rational(const Rational& q);

// base + sum coeff_i * sqrt(radicand_i), radicands >= 0.
struct RadicalExpr {
  Rational base;
  std::vector<std::pair<Rational, Rational>> terms;

  RadicalExpr() = default;
  explicit RadicalExpr(Rational b) : base(std::move(b)) {}
  // Real QuadValue as an expression.
  static RadicalExpr from(const QuadValue& x);
  RadicalExpr& add(Rational coeff, Rational radicand);
  RadicalExpr& add(const RadicalExpr& other, int scale = 1);
};

// Exact sign. At most two distinct irrational radicals are decided by
// isolation and squaring; anything else goes through certified interval
// evaluation, doubling precision up to `max_bits`.
int radical_sign(const RadicalExpr& e, unsigned max_bits = 1u << 16);

// Certified interval evaluation at a fixed precision: returns the sign if
// the interval excludes zero (or the value is exactly rational).
std::optional<int> certified_sign(const RadicalExpr& e, unsigned bits);

// Rational enclosure [lo, hi] of a real QuadValue, width <= 2^-bits.
std::pair<Rational, Rational> enclose(const QuadValue& x, unsigned bits = 64);

}  // namespace fordlab
