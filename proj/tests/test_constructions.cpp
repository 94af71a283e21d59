#include <doctest.h>

#include <algorithm>

#include "fordlab/constructions.hpp"
#include "fordlab/error.hpp"

using namespace fordlab;

namespace {

MoebiusElement m(const char* t) { return MoebiusElement::parse(t); }

// Both isometric disks of an integer matrix lie strictly inside (x, y).
bool disks_inside(const MoebiusElement& g, const Rational& x, const Rational& y) {
  for (const auto& h : {g, mm_inv(g)}) {
    IsometricDisk u = isometric_disk(h);
    Rational c = u.center.re.rational_part();
    Rational l = c - x, r = y - c;
    if (l.sign() <= 0 || r.sign() <= 0 || l * l <= u.radius_sq || r * r <= u.radius_sq) return false;
  }
  return true;
}

bool fixed_points_inside(const MoebiusElement& g, const Rational& x, const Rational& y) {
  Rational a = g.a().rational_part(), b = g.b().rational_part(), c = g.c().rational_part(), d = g.d().rational_part();
  auto q = [&](const Rational& z) { return c * z * z + (d - a) * z - b; };
  // one sign change of q at each endpoint side, with the vertex inside
  Rational vertex = (a - d) / (Rational(2) * c);
  return q(x).sign() * c.sign() > 0 && q(y).sign() * c.sign() > 0 && x < vertex && vertex < y &&
         q(vertex).sign() * c.sign() < 0;
}

bool has_status(const Certificate& cert, const std::string& prefix, CheckStatus s) {
  for (const auto& ch : cert.all_checks())
    if (ch.name.rfind(prefix, 0) == 0 && ch.status == s) return true;
  return false;
}

}  // namespace

TEST_CASE("target names") {
  CHECK(Target::parse("modular").kind == Target::Kind::Modular);
  Target g = Target::parse("gamma0:11");
  CHECK((g.kind == Target::Kind::Gamma0 && g.param == 11));
  CHECK(g.str() == "gamma0:11");
  CHECK(Target::parse("bianchi:19").param == 19);
  CHECK(Target::parse("normalizer:7").kind == Target::Kind::Normalizer);
  for (const char* bad : {"gamma0:0", "gamma0:-3", "gamma0:x", "principal:1", "normalizer:4", "bianchi:4", "bianchi:0",
                          "hecke:5", "", "modular:2"}) {
    try {
      Target::parse(bad);
      FAIL("accepted ", bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnsupportedParameter);
    }
  }
}

TEST_CASE("modular construction generators") {
  Construction c = build(Target::parse("modular"));
  REQUIRE(c.subgroups.size() == 3);
  std::vector<MoebiusElement> want = {m("[[26269,-100820],[6845,-26271]]"), m("[[-82644,317189],[-21533,82644]]"),
                                      m("[[424,-1445],[125,-426]]"),        m("[[-782,2667],[-229,781]]"),
                                      m("[[21644,-68445],[6845,-21646]]"),   m("[[-20241,64009],[-6400,20239]]")};
  REQUIRE(c.combined_gens.size() == want.size());
  for (const auto& g : want) CHECK(std::count(c.combined_gens.begin(), c.combined_gens.end(), g) == 1);
  CHECK(*c.conjugators[0] == m("[[142,-545],[37,-142]]"));
  CHECK(*c.conjugators[1] == m("[[17,-58],[5,-17]]"));
  CHECK(*c.conjugators[2] == m("[[117,-370],[37,-117]]"));
}

TEST_CASE("combined generators are the conjugated subgroup generators") {
  for (const char* t : {"modular", "gamma0:6", "normalizer:5", "bianchi:7"}) {
    Construction c = build(Target::parse(t));
    for (std::size_t i = 0; i < c.subgroups.size(); ++i)
      for (std::size_t j = 0; j < c.subgroups[i].generators.size(); ++j) {
        const MoebiusElement& g = c.subgroups[i].generators[j];
        MoebiusElement want = c.conjugators[i] ? conjugate_by(*c.conjugators[i], g) : g;
        CHECK(c.combined_gens.at(c.combined_index(i, j)) == want);
      }
  }
}

TEST_CASE("conjugators sit inside their intervals") {
  for (const char* t : {"modular", "gamma0:2", "gamma0:3", "gamma0:9", "normalizer:2", "normalizer:7"}) {
    Construction c = build(Target::parse(t));
    REQUIRE(!c.search_failure);
    for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
      if (!c.conjugators[i] || !c.subgroups[i].interval) continue;
      auto [x, y] = *c.subgroups[i].interval;
      CHECK_MESSAGE(disks_inside(*c.conjugators[i], x, y), t, " ", c.subgroups[i].name);
    }
    // intervals are pairwise disjoint
    for (std::size_t i = 0; i < c.subgroups.size(); ++i)
      for (std::size_t j = i + 1; j < c.subgroups.size(); ++j) {
        if (!c.subgroups[i].interval || !c.subgroups[j].interval) continue;
        auto [a, b] = *c.subgroups[i].interval;
        auto [e, f] = *c.subgroups[j].interval;
        CHECK((b <= e || f <= a));
      }
  }
}

TEST_CASE("principal subgroups") {
  Construction c = build(Target::parse("principal:2"));
  REQUIRE(c.subgroups.size() == 1);
  CHECK(c.subgroups[0].generators[0] == MoebiusElement::translation(4));
  CHECK(c.subgroups[0].generators[1] == m("[[1,0],[2,1]]"));
  BuildOptions naive;
  naive.naive_principal = true;
  CHECK(build(Target::parse("principal:2"), naive).subgroups[0].generators[0] == MoebiusElement::translation(2));
  Construction five = build(Target::parse("principal:5"));
  for (const auto& g : five.subgroups[0].generators) CHECK(in_principal(g, 5));
}

TEST_CASE("naive principal level two is rejected by the lemma") {
  BuildOptions naive;
  naive.naive_principal = true;
  Certificate cert = verify_construction(build(Target::parse("principal:2"), naive), 20, 6);
  CHECK(cert.verdict == Verdict::Failed);
  CHECK(has_status(cert, "lemma/", CheckStatus::Fail));
  bool mentions = false;
  for (const auto& r : cert.reasons) mentions = mentions || r.find("LemmaViolation") != std::string::npos;
  CHECK(mentions);
}

TEST_CASE("Bianchi involutions") {
  Construction c = build(Target::parse("bianchi:5"));
  REQUIRE(c.subgroups.size() == 5);
  CHECK(!c.conjugators[0]);
  CHECK(*c.conjugators[2] == m("[[7,-10],[5,-7]]"));
  QuadValue w = QuadValue::sqrt_of(-5);
  CHECK(*c.conjugators[1] == MoebiusElement(QuadValue(38) + QuadValue(85) * w, QuadValue(85 * 5 - 17) - QuadValue(76) * w,
                                            85, QuadValue(-38) - QuadValue(85) * w));
  for (long d : {1, 2, 3, 5, 6, 7, 11, 15, 19, 23}) {
    Construction b = build(Target{Target::Kind::Bianchi, d});
    for (const auto& a : b.conjugators)
      if (a) {
        CHECK(in_bianchi(*a, d));
        CHECK(a->trace().is_zero());
      }
    for (const auto& g : b.combined_gens) CHECK(in_bianchi(g, d));
    CHECK(b.strict_power_scan == (d <= 3));
    CHECK(bianchi_coset_cover(d) == 9);
  }
}

TEST_CASE("power conjugator search") {
  ConjugatorSearch s;
  PowerConjugator p = find_power_conjugator(s, 3, 4);
  CHECK(p.element == mm_pow(p.base, p.power));
  CHECK(classify(p.base) == ElementClass::Hyperbolic);
  CHECK(fixed_points_inside(p.base, 3, 4));
  CHECK(disks_inside(p.element, 3, 4));
  // the power is least
  if (p.power > 1) CHECK(!disks_inside(mm_pow(p.base, p.power - 1), 3, 4));

  ConjugatorSearch level;
  level.level = 7;
  PowerConjugator q = find_power_conjugator(level, Rational(-11, 3), Rational(-10, 3));
  CHECK(in_gamma0(q.element, 7));
  CHECK(disks_inside(q.element, Rational(-11, 3), Rational(-10, 3)));

  ConjugatorSearch tiny;
  tiny.max_height = 10;
  try {
    find_power_conjugator(tiny, 0, Rational(1, 1000));
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SearchExhausted);
  }
}

TEST_CASE("gamma0 pieces") {
  for (long n = 5; n <= 12; ++n) {
    auto pieces = gamma0_pieces(n);
    std::set<long> residues;
    for (const auto& p : pieces) {
      CHECK(in_gamma0(p.g, n));
      CHECK((p.translation == 1 || p.translation == 2));
      CHECK(p.fallback == (p.translation == 2));
      CHECK_NOTHROW(build_ford_two_gen(n * p.translation, p.g));
      // disks of radius 1/|c| fit the period
      Rational c = qv_abs_real(p.g.c()).rational_part();
      CHECK(Rational(2) / c < Rational(n * p.translation));
      long t = p.g.trace().rational_part().value().get_num().get_si();
      residues.insert(((t % n) + n) % n);
      residues.insert(((-t % n) + n) % n);
    }
    auto all = unit_trace_residues(n);
    for (long r : all) CHECK_MESSAGE(residues.count(r) == 1, "n = ", n, " residue ", r);
  }
  CHECK_THROWS_AS(gamma0_pieces(4), Error);
}

TEST_CASE("ambient predicates") {
  CHECK(ambient_predicate(Target::parse("gamma0:6"))(m("[[1,0],[6,1]]")));
  CHECK(!ambient_predicate(Target::parse("gamma0:6"))(m("[[1,0],[3,1]]")));
  QuadValue r = QuadValue::sqrt_of(3);
  CHECK(in_normalizer(MoebiusElement(0, -r.inverse(), r, 0), 3));
  CHECK(in_normalizer(m("[[1,0],[3,1]]"), 3));
  CHECK(!in_normalizer(m("[[1,0],[1,1]]"), 3));
}

TEST_CASE("small certificates") {
  Certificate b = verify_construction(build(Target::parse("bianchi:19")), 40, 8);
  CHECK(b.verdict == Verdict::Verified);
  Certificate g = verify_construction(build(Target::parse("gamma0:3")), 30, 10);
  CHECK(g.verdict == Verdict::Verified);
  CHECK(g.coverage.missing.empty());
  for (const auto& [t, w] : g.witness_words)
    CHECK(canonical_trace(evaluate_word(g.construction.combined_gens, w)) == t);
}

TEST_CASE("longer words never lose coverage") {
  Construction c = build(Target::parse("gamma0:5"));
  Certificate a = verify_construction(c, 60, 4), b = verify_construction(c, 60, 8);
  CHECK(b.coverage.missing.size() <= a.coverage.missing.size());
  for (const auto& t : b.coverage.missing)
    CHECK(std::count(a.coverage.missing.begin(), a.coverage.missing.end(), t) == 1);
  CHECK(a.coverage.extra.empty());
  CHECK(b.coverage.extra.empty());
}
