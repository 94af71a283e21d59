#include <doctest.h>
#include <mpfr.h>

#include <random>

#include "fordlab/error.hpp"
#include "fordlab/exactnum.hpp"

using namespace fordlab;

namespace {

// a + b sqrt(m) at 256 bits, m >= 0.
struct Big {
  mpfr_t v;
  Big() { mpfr_init2(v, 256); }
  ~Big() { mpfr_clear(v); }
  Big(const Big&) = delete;
  Big& operator=(const Big&) = delete;
};

void set_rational(mpfr_t out, const Rational& q) { mpfr_set_q(out, q.value().get_mpq_t(), MPFR_RNDN); }

void oracle(Big& out, const QuadValue& x) {
  Big r, b;
  set_rational(out.v, x.rational_part());
  if (x.is_rational()) return;
  mpfr_set_si(r.v, x.radicand(), MPFR_RNDN);
  mpfr_sqrt(r.v, r.v, MPFR_RNDN);
  set_rational(b.v, x.radical_coeff());
  mpfr_mul(b.v, b.v, r.v, MPFR_RNDN);
  mpfr_add(out.v, out.v, b.v, MPFR_RNDN);
}

int oracle_cmp(const QuadValue& x, const QuadValue& y) {
  Big a, b;
  oracle(a, x);
  oracle(b, y);
  return mpfr_cmp(a.v, b.v) < 0 ? -1 : mpfr_cmp(a.v, b.v) > 0 ? 1 : 0;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-200, 200), den(1, 60);
  return Rational(num(rng), den(rng));
}

int sign_of(std::strong_ordering o) { return o < 0 ? -1 : o > 0 ? 1 : 0; }

}  // namespace

TEST_CASE("rationals are stored reduced") {
  Rational q(mpz_class(6), mpz_class(-4));
  CHECK(q.str() == "-3/2");
  CHECK(q.is_canonical());
  CHECK((Rational(1, 3) + Rational(1, 6)).str() == "1/2");
  CHECK(Rational::parse("10/4") == Rational(5, 2));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
}

TEST_CASE("quadratic arithmetic") {
  QuadValue r2 = QuadValue::sqrt_of(2);
  QuadValue x = QuadValue(1) + r2;
  QuadValue y = QuadValue(1) - r2;
  CHECK(x * y == QuadValue(-1));
  CHECK(x * x.inverse() == QuadValue(1));
  CHECK((r2 * r2).is_rational());
  CHECK(x.field_norm() == Rational(-1));
  CHECK_THROWS_AS(r2 + QuadValue::sqrt_of(3), Error);
  QuadValue i = QuadValue::sqrt_of(-1);
  CHECK(i * i == QuadValue(-1));
  CHECK(!i.is_real());
  CHECK(qv_abs2(QuadValue(3) + QuadValue(4) * i) == Rational(25));
}

TEST_CASE("text form round trips") {
  std::mt19937_64 rng(7);
  const long radicands[] = {2, 3, 5, -1, -3, -19};
  for (int k = 0; k < 200; ++k) {
    QuadValue x(random_rational(rng), random_rational(rng), radicands[k % 6]);
    CHECK(QuadValue::parse(x.str()) == x);
  }
  CHECK(QuadValue::parse("sqrt(2)") == QuadValue::sqrt_of(2));
  CHECK(QuadValue::parse("-1/2*sqrt(2)") == QuadValue(0, Rational(-1, 2), 2));
  CHECK(QuadValue::parse("3-sqrt(-7)") == QuadValue(3, -1, -7));
  CHECK(QuadValue(0, Rational(-1, 2), 2).str() == "-1/2*sqrt(2)");
  CHECK_THROWS_AS(QuadValue::parse("1+sqrt(x)"), Error);
  CHECK_THROWS_AS(QuadValue::parse(""), Error);
}

TEST_CASE("real comparisons agree with a 256-bit oracle") {
  std::mt19937_64 rng(11);
  const long radicands[] = {2, 3, 5, 7, 13};
  for (int k = 0; k < 300; ++k) {
    long m = radicands[k % 5];
    QuadValue x(random_rational(rng), random_rational(rng), m);
    QuadValue y(random_rational(rng), random_rational(rng), m);
    CHECK(sign_of(qv_cmp_real(x, y)) == oracle_cmp(x, y));
    Big v;
    oracle(v, x);
    CHECK(qv_sign_real(x) == mpfr_sgn(v.v));
  }
  // equal up to 1e-30 but not equal
  QuadValue a(Rational(mpz_class("1"), mpz_class("1000000000000000000000000000000")), 0, 2);
  CHECK(qv_sign_real(a) > 0);
}

TEST_CASE("radical sums") {
  // sqrt 2 + sqrt 8 - sqrt 18 == 0
  RadicalExpr zero(0);
  zero.add(1, 2).add(1, 8).add(-1, 18);
  CHECK(radical_sign(zero) == 0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> rad(2, 40);
  for (int k = 0; k < 100; ++k) {
    RadicalExpr e(random_rational(rng));
    long r1 = rad(rng), r2 = rad(rng), r3 = rad(rng);
    Rational c1 = random_rational(rng), c2 = random_rational(rng), c3 = random_rational(rng);
    e.add(c1, r1).add(c2, r2).add(c3, r3);
    Big v, t;
    set_rational(v.v, e.base);
    for (auto [c, r] : {std::pair{c1, r1}, std::pair{c2, r2}, std::pair{c3, r3}}) {
      mpfr_set_si(t.v, r, MPFR_RNDN);
      mpfr_sqrt(t.v, t.v, MPFR_RNDN);
      Big cc;
      set_rational(cc.v, c);
      mpfr_mul(t.v, t.v, cc.v, MPFR_RNDN);
      mpfr_add(v.v, v.v, t.v, MPFR_RNDN);
    }
    CHECK(radical_sign(e) == mpfr_sgn(v.v));
  }
}

TEST_CASE("square roots and enclosures") {
  CHECK(sqrt_rational(Rational(9, 4)) == std::optional<QuadValue>(QuadValue(Rational(3, 2))));
  auto r = sqrt_rational(Rational(8, 9));
  REQUIRE(r);
  CHECK(*r == QuadValue(0, Rational(2, 3), 2));
  CHECK_THROWS_AS(sqrt_rational(Rational(-1)), Error);
  CHECK(sqrt_rational(Rational(3)) == std::optional<QuadValue>(QuadValue::sqrt_of(3)));
  QuadValue x(1, 3, 5);
  auto [lo, hi] = enclose(x, 40);
  Big v, l, h;
  oracle(v, x);
  set_rational(l.v, lo);
  set_rational(h.v, hi);
  CHECK(mpfr_cmp(l.v, v.v) <= 0);
  CHECK(mpfr_cmp(v.v, h.v) <= 0);
  CHECK((hi - lo) < Rational(mpz_class(1), mpz_class(1) << 30));
}
