#include <doctest.h>

#include <array>
#include <random>
#include <sstream>

#include "fordlab/error.hpp"
#include "fordlab/moebius.hpp"
#include "fordlab/tracesets.hpp"

using namespace fordlab;

namespace {

using M = std::array<long, 4>;

M mul(const M& x, const M& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// first nonzero of (c, a, b, d) positive
M normalized(M m) {
  long lead = m[2] != 0 ? m[2] : m[0] != 0 ? m[0] : m[1] != 0 ? m[1] : m[3];
  if (lead < 0)
    for (auto& e : m) e = -e;
  return m;
}

MoebiusElement of(const M& m) { return MoebiusElement(m[0], m[1], m[2], m[3]); }

bool same(const MoebiusElement& e, const M& m) {
  M n = normalized(m);
  return e.a() == QuadValue(n[0]) && e.b() == QuadValue(n[1]) && e.c() == QuadValue(n[2]) && e.d() == QuadValue(n[3]);
}

M random_sl2(std::mt19937_64& rng) {
  const M gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {0, -1, 1, 0}, {1, 0, 1, 1}};
  M m{1, 0, 0, 1};
  std::uniform_int_distribution<int> pick(0, 3), len(1, 8);
  for (int k = len(rng); k > 0; --k) m = mul(m, gens[pick(rng)]);
  return m;
}

}  // namespace

TEST_CASE("construction requires determinant one") {
  CHECK_THROWS_AS(MoebiusElement(2, 0, 0, 1), Error);
  CHECK_NOTHROW(MoebiusElement(2, 1, 1, 1));
  QuadValue r = QuadValue::sqrt_of(5);
  CHECK_NOTHROW(MoebiusElement(0, -r.inverse(), r, 0));
}

TEST_CASE("sign normalization makes -g equal g") {
  CHECK(MoebiusElement(-1, 0, 0, -1) == MoebiusElement::identity());
  CHECK(MoebiusElement(-1, 0, -2, -1) == MoebiusElement(1, 0, 2, 1));
  CHECK(MoebiusElement(-1, 0, -2, -1).c() == QuadValue(2));
  CHECK(MoebiusElement(-1, -3, 0, -1).a() == QuadValue(1));
}

TEST_CASE("products and inverses agree with plain integer matrices") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    M x = random_sl2(rng), y = random_sl2(rng);
    CHECK(same(of(x) * of(y), mul(x, y)));
    CHECK((of(x) * mm_inv(of(x))).is_identity());
    CHECK(same(mm_pow(of(x), 3), mul(mul(x, x), x)));
    CHECK(same(mm_pow(of(x), -1), {x[3], -x[1], -x[2], x[0]}));
  }
}

TEST_CASE("canonical traces pick one of +-t") {
  CHECK(canonical_trace(MoebiusElement(-2, 1, -1, 0)).value == QuadValue(2));
  QuadValue i = QuadValue::sqrt_of(-1);
  CHECK(CanonicalTrace::of(-i).value == i);
  CHECK(CanonicalTrace::of(QuadValue(-1) + i).value == QuadValue(1) - i);
  CHECK(CanonicalTrace::of(QuadValue(0)).value == QuadValue(0));
}

TEST_CASE("classification by trace") {
  CHECK(classify(MoebiusElement::identity()) == ElementClass::Identity);
  CHECK(classify(MoebiusElement(0, -1, 1, 0)) == ElementClass::Elliptic);
  CHECK(classify(MoebiusElement(1, 5, 0, 1)) == ElementClass::Parabolic);
  CHECK(classify(MoebiusElement(2, 1, 1, 1)) == ElementClass::Hyperbolic);
  QuadValue i = QuadValue::sqrt_of(-1);
  CHECK(classify(MoebiusElement(i, -1, 1, 0)) == ElementClass::Loxodromic);
  QuadValue r = QuadValue::sqrt_of(3);
  CHECK(classify(MoebiusElement(r, -r.inverse(), r, 0)) == ElementClass::Elliptic);
}

TEST_CASE("congruence predicates") {
  CHECK(in_gamma0(MoebiusElement(1, 0, 5, 1), 5));
  CHECK(!in_gamma0(MoebiusElement(1, 0, 1, 1), 5));
  CHECK(in_principal(MoebiusElement(1, 3, 3, 10), 3));
  CHECK(in_principal(MoebiusElement(-1, 3, 3, -10), 3));
  CHECK(!in_principal(MoebiusElement(1, 0, 2, 1), 3));
  QuadValue w = QuadValue(Rational(1, 2), Rational(1, 2), -3);
  CHECK(in_ring_of_integers(w, 3));
  CHECK(!in_ring_of_integers(QuadValue(Rational(1, 2), Rational(1, 2), -5), 5));
  CHECK(in_bianchi(MoebiusElement(w, -1, 1, 0), 3));
  CHECK(!in_bianchi(MoebiusElement(w, -1, 1, 0), 7));
}

TEST_CASE("words evaluate left to right") {
  std::vector<MoebiusElement> gens = {MoebiusElement(0, -1, 1, 0), MoebiusElement(1, 5, 0, 1)};
  Word w = {1, -2, 1};
  CHECK(word_str(w) == "g1.g2^-1.g1");
  CHECK(word_str({}) == "e");
  MoebiusElement x = evaluate_word(gens, w);
  CHECK(x == gens[0] * mm_inv(gens[1]) * gens[0]);
  CHECK(evaluate_word(gens, inverse_word(w)) == mm_inv(x));
  CHECK_THROWS_AS(evaluate_word(gens, {3}), Error);
}

TEST_CASE("generator files") {
  std::istringstream in("# comment\n[[1,1],[0,1]]\n\n[[0,-1],[1,0]]  # S\n");
  auto gens = parse_generator_file(in);
  REQUIRE(gens.size() == 2);
  CHECK(gens[1] == MoebiusElement(0, -1, 1, 0));
  std::istringstream back(format_generator_file(gens, "two"));
  CHECK(parse_generator_file(back) == gens);
  std::istringstream bad("[[1,1],[0,1]]\n[[1,1],[0]]\n");
  try {
    parse_generator_file(bad);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  std::istringstream det("[[2,0],[0,1]]\n");
  CHECK_THROWS_AS(parse_generator_file(det), Error);
}

TEST_CASE("modular matrices of the explicit construction") {
  const char* texts[] = {"[[0,-1],[1,0]]",
                         "[[1,5],[0,1]]",
                         "[[1,-1],[1,0]]",
                         "[[2,-1],[1,0]]",
                         "[[142,-545],[37,-142]]",
                         "[[17,-58],[5,-17]]",
                         "[[117,-370],[37,-117]]",
                         "[[26269,-100820],[6845,-26271]]",
                         "[[-82644,317189],[-21533,82644]]",
                         "[[424,-1445],[125,-426]]",
                         "[[-782,2667],[-229,781]]",
                         "[[21644,-68445],[6845,-21646]]",
                         "[[-20241,64009],[-6400,20239]]"};
  for (const char* t : texts) {
    MoebiusElement g = MoebiusElement::parse(t);
    CHECK(g.determinant() == QuadValue(1));
    // trichotomy from |trace| against 2
    Rational tr = qv_abs_real(g.trace()).rational_part();
    ElementClass expect = tr < Rational(2) ? ElementClass::Elliptic
                          : tr == Rational(2) ? ElementClass::Parabolic : ElementClass::Hyperbolic;
    CHECK(classify(g) == expect);
  }
}

TEST_CASE("symbolic involution determinants") {
  for (long d = 1; d <= 100; ++d) {
    if (!is_square_free(d)) continue;
    bool three = d % 4 == 3;
    QuadValue w = three ? QuadValue(Rational(1, 2), Rational(1, 2), -d) : QuadValue::sqrt_of(-d);
    QuadValue w2 = w * w;
    QuadValue D(d);
    QuadValue a, b, c, e;
    if (three) {
      a = QuadValue(-2) + QuadValue(3) * w + QuadValue(4) * D * w;
      b = QuadValue(1) + QuadValue(4) * w - QuadValue(7) * w2 - QuadValue(4) * w2 * D;
      c = QuadValue(4) * D - 1;
      e = QuadValue(2) - QuadValue(3) * w - QuadValue(4) * D * w;
    } else {
      a = QuadValue(38) + QuadValue(85) * w;
      b = QuadValue(-17) - QuadValue(76) * w - QuadValue(85) * w2;
      c = QuadValue(85);
      e = QuadValue(-38) - QuadValue(85) * w;
      CHECK(b == QuadValue(85) * D - 17 - QuadValue(76) * w);
    }
    CHECK(a * e - b * c == QuadValue(1));
    CHECK((a + e).is_zero());
  }
}
