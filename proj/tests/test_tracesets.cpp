#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fordlab/constructions.hpp"
#include "fordlab/error.hpp"
#include "fordlab/tracesets.hpp"

using namespace fordlab;

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

// t is a trace of Gamma0(n) iff a (t - a) = 1 mod n for some a: then
// [[a, b], [n, t - a]] realizes it, and ad = 1 mod n holds for every element.
bool gamma0_oracle(long t, long n) {
  for (long a = 0; a < n; ++a)
    if (mod(a * (t - a) - 1, n) == 0) return true;
  return false;
}

std::vector<CanonicalTrace> integers(long lo, long hi, const std::function<bool(long)>& keep) {
  std::vector<CanonicalTrace> out;
  for (long t = lo; t <= hi; ++t)
    if (keep(t)) out.push_back(CanonicalTrace::of(QuadValue(t)));
  return out;
}

std::vector<CanonicalTrace> traces_of(const std::vector<MoebiusElement>& gens, int len, long bound) {
  EnumerationOptions o;
  o.max_word_len = len;
  o.trace_bound = bound;
  return enumerate_traces(gens, o).traces();
}

const MoebiusElement S(0, -1, 1, 0);
const MoebiusElement T5(1, 5, 0, 1);

}  // namespace

TEST_CASE("unit trace residues") {
  CHECK(unit_trace_residues(5) == std::vector<long>{0, 2, 3});
  for (long n = 2; n <= 30; ++n) {
    std::set<long> want;
    for (long a = 1; a < n; ++a)
      for (long b = 1; b < n; ++b)
        if (mod(a * b, n) == 1) want.insert(mod(a + b, n));
    auto got = unit_trace_residues(n);
    CHECK(std::set<long>(got.begin(), got.end()) == want);
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("expected sets match closed forms") {
  for (long n = 1; n <= 12; ++n) {
    auto want = integers(0, 30, [n](long t) { return gamma0_oracle(t, n); });
    CHECK(expected_set(TraceSetModel::gamma0(n), 30) == want);
  }
  for (long n = 2; n <= 5; ++n) {
    long q = n * n;
    auto want = integers(0, 60, [q](long t) { return mod(t - 2, q) == 0 || mod(t + 2, q) == 0; });
    CHECK(expected_set(TraceSetModel::principal(n), 60) == want);
  }
  CHECK(expected_set(TraceSetModel::modular(), 10).size() == 11);
  // lattice points of O_d with norm <= B, identified up to sign
  for (long d : {1, 2, 3, 7, 19}) {
    const bool three = d % 4 == 3;
    long count = 0;
    for (long a = -40; a <= 40; ++a)
      for (long b = -40; b <= 40; ++b) {
        // norm of a + b w
        Rational nm = three ? Rational(a * a + a * b) + Rational(b * b * (d + 1), 4) : Rational(a * a + d * b * b);
        if (nm <= Rational(40)) ++count;
      }
    CHECK(static_cast<long>(expected_set(TraceSetModel::bianchi(d), 40).size()) == (count + 1) / 2);
  }
  CHECK_THROWS_AS(expected_set(TraceSetModel::modular(), -1), Error);
}

TEST_CASE("normalizer models admit multiples of the square root") {
  auto m = TraceSetModel::normalizer(3);
  CHECK(model_contains(m, CanonicalTrace::of(QuadValue::sqrt_of(3) * QuadValue(2))));
  CHECK(model_contains(m, CanonicalTrace::of(QuadValue(0))));
  CHECK(model_contains(m, CanonicalTrace::of(QuadValue(2))));
  CHECK(!model_contains(m, CanonicalTrace::of(QuadValue::sqrt_of(5))));
  CHECK(!model_contains(m, CanonicalTrace::of(QuadValue(Rational(1, 2)) * QuadValue::sqrt_of(3))));
}

TEST_CASE("bound predicate") {
  QuadValue i = QuadValue::sqrt_of(-1);
  CHECK(within_bound(CanonicalTrace::of(QuadValue(3) + QuadValue(4) * i), 25, true));
  CHECK(!within_bound(CanonicalTrace::of(QuadValue(3) + QuadValue(4) * i), 24, true));
  CHECK(within_bound(CanonicalTrace::of(QuadValue(-7)), 7, false));
  CHECK(!within_bound(CanonicalTrace::of(QuadValue(-7)), 6, false));
}

TEST_CASE("small groups") {
  CHECK(traces_of({MoebiusElement(1, 1, 0, 1)}, 6, 50) == std::vector<CanonicalTrace>{CanonicalTrace::of(QuadValue(2))});
  auto g0 = traces_of({S, T5}, 3, 50);
  for (long t : {0, 2, 5}) CHECK(std::count(g0.begin(), g0.end(), CanonicalTrace::of(QuadValue(t))) == 1);
  EnumerationOptions o;
  o.max_word_len = 3;
  EnumerationResult r = enumerate_traces({S, T5}, o);
  CHECK(r.witnesses.at(CanonicalTrace::of(QuadValue(0))) == Word{1});
  CHECK(r.witnesses.at(CanonicalTrace::of(QuadValue(2))) == Word{2});
  CHECK(r.stats.max_len_reached == 3);
  // at most 4 * 3^(l-1) reduced words of each length
  CHECK(r.stats.states <= 4 + 12 + 36);
  std::string text = format_trace_report(enumerate_traces({MoebiusElement(1, 1, 0, 1)}, o));
  CHECK(text == "trace 2 word g1\n");
}

TEST_CASE("shortest witnesses evaluate to their trace") {
  std::vector<MoebiusElement> gens = build(Target::parse("modular")).combined_gens;
  EnumerationOptions o;
  o.max_word_len = 4;
  o.trace_bound = 200;
  EnumerationResult r = enumerate_traces(gens, o);
  CHECK(r.witnesses.size() > 10);
  for (const auto& [t, w] : r.witnesses) CHECK(canonical_trace(evaluate_word(gens, w)) == t);
}

TEST_CASE("results do not depend on the thread count") {
  std::vector<MoebiusElement> gens = build(Target::parse("gamma0:7")).combined_gens;
  EnumerationOptions o;
  o.max_word_len = 4;
  o.trace_bound = 100;
  std::string base;
  for (unsigned th : {1u, 2u, 4u}) {
    o.threads = th;
    EnumerationResult r = enumerate_traces(gens, o);
    std::string rep = format_trace_report(r);
    if (th == 1) base = rep;
    CHECK(rep == base);
  }
}

TEST_CASE("gamma0 generators stay inside the congruence model") {
  for (long n = 2; n <= 12; ++n) {
    std::vector<MoebiusElement> gens = build(Target{Target::Kind::Gamma0, n}).combined_gens;
    long k = 2 * static_cast<long>(gens.size());
    int len = 1;
    for (long states = k; len < 10 && states * (k - 1) <= 60000; states *= k - 1) ++len;
    EnumerationOptions o;
    o.max_word_len = len;
    o.trace_bound = 1000;
    auto model = TraceSetModel::gamma0(n);
    o.containment = [&](const CanonicalTrace& t) { return model_contains(model, t); };
    EnumerationResult r = enumerate_traces(gens, o);
    CHECK_MESSAGE(r.violation_count == 0, "n = ", n);
    for (const auto& g : gens) CHECK(in_gamma0(g, n));
  }
}

TEST_CASE("early stop once covered") {
  EnumerationOptions o;
  o.max_word_len = 10;
  o.stop_when_covered = std::vector<CanonicalTrace>{CanonicalTrace::of(QuadValue(0)), CanonicalTrace::of(QuadValue(1))};
  EnumerationResult r = enumerate_traces({S, MoebiusElement(1, 1, 0, 1)}, o);
  CHECK(r.stats.stopped_early);
  CHECK(r.stats.max_len_reached == 2);
}

TEST_CASE("state cap") {
  EnumerationOptions o;
  o.max_word_len = 10;
  o.state_cap = 100;
  try {
    enumerate_traces({S, T5}, o);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StateExplosion);
  }
}

TEST_CASE("coverage reports") {
  auto c = [](long t) { return CanonicalTrace::of(QuadValue(t)); };
  CoverageReport r = coverage_report({c(0), c(2), c(3)}, {c(2), c(3), c(7)});
  CHECK(r.missing == std::vector<CanonicalTrace>{c(0)});
  CHECK(r.extra == std::vector<CanonicalTrace>{c(7)});
  CHECK(r.covered.size() == 2);
  CHECK(!r.complete());
  CHECK(trace_to_length(c(3)) == doctest::Approx(2 * std::acosh(1.5)));
}
