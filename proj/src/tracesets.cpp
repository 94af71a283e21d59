#include "fordlab/tracesets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace fordlab {

bool is_prime(long p) {
  if (p < 2) return false;
  for (long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

bool is_square_free(long d) {
  if (d < 1) return false;
  for (long q = 2; q * q <= d; ++q)
    if (d % (q * q) == 0) return false;
  return true;
}

TraceSetModel TraceSetModel::gamma0(long n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedParameter, "level must be positive");
  return {Kind::Gamma0, n};
}

TraceSetModel TraceSetModel::principal(long n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedParameter, "level must be positive");
  return {Kind::Principal, n};
}

TraceSetModel TraceSetModel::normalizer(long p) {
  if (!is_prime(p)) throw Error(ErrorKind::UnsupportedParameter, std::to_string(p) + " is not prime");
  return {Kind::NormalizerP, p};
}

TraceSetModel TraceSetModel::bianchi(long d) {
  if (!is_square_free(d)) throw Error(ErrorKind::UnsupportedParameter, std::to_string(d) + " is not square-free");
  return {Kind::Bianchi, d};
}

std::string TraceSetModel::str() const {
  switch (kind) {
    case Kind::Modular: return "modular";
    case Kind::Gamma0: return "gamma0:" + std::to_string(param);
    case Kind::Principal: return "principal:" + std::to_string(param);
    case Kind::NormalizerP: return "normalizer:" + std::to_string(param);
    case Kind::Bianchi: return "bianchi:" + std::to_string(param);
  }
  return "?";
}

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

long inverse_mod(long a, long n) {
  for (long b = 1; b < n; ++b)
    if (mod(a * b, n) == 1) return b;
  return 0;
}

// Residue mod n of a rational-integer trace, or nullopt.
std::optional<long> integer_residue(const CanonicalTrace& t, long n) {
  if (!t.value.is_integer()) return std::nullopt;
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), t.value.rational_part().value().get_num_mpz_t(), static_cast<unsigned long>(n));
  return r.get_si();
}

bool residue_ok(long k, const std::vector<long>& residues, long n) {
  return std::binary_search(residues.begin(), residues.end(), mod(k, n));
}

}  // namespace

std::vector<long> unit_trace_residues(long n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedParameter, "level must be positive");
  if (n == 1) return {0};
  std::vector<long> out;
  for (long a = 1; a < n; ++a)
    if (std::gcd(a, n) == 1) out.push_back(mod(a + inverse_mod(a, n), n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool within_bound(const CanonicalTrace& t, const Rational& bound, bool complex) {
  if (complex) return qv_abs2(t.value) <= bound;
  if (!t.value.is_real()) return false;
  return qv_cmp_real(qv_abs_real(t.value), QuadValue(bound)) <= 0;
}

bool model_contains(const TraceSetModel& model, const CanonicalTrace& t) {
  using K = TraceSetModel::Kind;
  const long n = model.param;
  switch (model.kind) {
    case K::Modular: return t.value.is_integer();
    case K::Gamma0: {
      auto k = integer_residue(t, n);
      if (!k) return false;
      return residue_ok(*k, unit_trace_residues(n), n);
    }
    case K::Principal: {
      auto k = integer_residue(t, n * n);
      if (!k) return false;
      long r = *k;
      return r == mod(2, n * n) || r == mod(-2, n * n);
    }
    case K::NormalizerP: {
      if (t.value.is_zero()) return true;  // 0 * sqrt(p)
      if (auto k = integer_residue(t, n)) return residue_ok(*k, unit_trace_residues(n), n);
      // m * sqrt(p)
      return t.value.rational_part().is_zero() && t.value.radicand() == n && t.value.radical_coeff().is_integer();
    }
    case K::Bianchi: return in_ring_of_integers(t.value, n);
  }
  return false;
}

std::vector<CanonicalTrace> expected_set(const TraceSetModel& model, const Rational& bound) {
  if (bound.sign() < 0) throw Error(ErrorKind::UnsupportedParameter, "negative bound");
  using K = TraceSetModel::Kind;
  std::set<CanonicalTrace> out;
  if (model.kind == K::Bianchi) {
    const long d = model.param;
    const bool three = d % 4 == 3;
    // |a + b w|^2 >= (d/4) b^2 bounds b, then a.
    long bmax = static_cast<long>(std::sqrt(4.0 * bound.to_double() / static_cast<double>(d))) + 2;
    long amax = static_cast<long>(std::sqrt(bound.to_double())) + bmax + 2;
    QuadValue omega = three ? QuadValue(Rational(1, 2), Rational(1, 2), -d) : QuadValue::sqrt_of(-d);
    for (long b = -bmax; b <= bmax; ++b) {
      for (long a = -amax; a <= amax; ++a) {
        QuadValue t = QuadValue(a) + QuadValue(b) * omega;
        if (qv_abs2(t) <= bound) out.insert(CanonicalTrace::of(t));
      }
    }
    return {out.begin(), out.end()};
  }
  const long top = bound.floor().get_si();
  for (long k = 0; k <= top; ++k) {
    CanonicalTrace t{QuadValue(k)};
    if (model_contains(model, t)) out.insert(t);
  }
  if (model.kind == K::NormalizerP) {
    for (long m = 0;; ++m) {
      CanonicalTrace t{QuadValue(0, m, model.param)};
      if (!within_bound(t, bound, false)) break;
      out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<CanonicalTrace> EnumerationResult::traces() const {
  std::vector<CanonicalTrace> out;
  for (const auto& [t, _] : witnesses) out.push_back(t);
  return out;
}

namespace {

constexpr std::int64_t kSmall = std::int64_t(1) << 62;

bool fits_small(const mpz_class& v) { return v.fits_slong_p() && std::labs(v.get_si()) < kSmall; }

std::uint64_t mix64(std::uint64_t h, std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL + h;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

mpz_class from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class r(static_cast<unsigned long>(u >> 64));
  r <<= 64;
  r += mpz_class(static_cast<unsigned long>(u & 0xffffffffffffffffULL));
  return neg ? mpz_class(-r) : r;
}

}  // namespace

TraceEnumerator::Mat TraceEnumerator::make(const MoebiusElement& e) const {
  Mat m;
  if (small_mode_ && e.is_integral()) {
    const QuadValue* es[4] = {&e.a(), &e.b(), &e.c(), &e.d()};
    bool ok = true;
    for (const QuadValue* q : es) ok = ok && fits_small(q->rational_part().value().get_num());
    if (ok) {
      for (int i = 0; i < 4; ++i) m.s[i] = es[i]->rational_part().value().get_num().get_si();
      return m;
    }
  }
  m.big = std::make_unique<MoebiusElement>(e);
  return m;
}

TraceEnumerator::Mat TraceEnumerator::multiply(const Mat& x, std::size_t l) const {
  const Mat& y = letter_mats_[l];
  if (x.big || y.big) {
    MoebiusElement lhs = x.big ? *x.big : MoebiusElement(Rational(x.s[0]), Rational(x.s[1]), Rational(x.s[2]), Rational(x.s[3]));
    return make(lhs * letter_elems_[l]);
  }
  using I = __int128;
  I r[4] = {I(x.s[0]) * y.s[0] + I(x.s[1]) * y.s[2], I(x.s[0]) * y.s[1] + I(x.s[1]) * y.s[3],
            I(x.s[2]) * y.s[0] + I(x.s[3]) * y.s[2], I(x.s[2]) * y.s[1] + I(x.s[3]) * y.s[3]};
  bool identity = r[1] == 0 && r[2] == 0 && r[0] == r[3] && (r[0] == 1 || r[0] == -1);
  if (identity) {
    r[0] = r[3] = 1;
  } else {
    for (int idx : {2, 0, 1, 3}) {
      if (r[idx] == 0) continue;
      if (r[idx] < 0)
        for (auto& v : r) v = -v;
      break;
    }
  }
  Mat m;
  bool ok = true;
  for (auto v : r) ok = ok && v < kSmall && v > -kSmall;
  if (ok) {
    for (int i = 0; i < 4; ++i) m.s[i] = static_cast<std::int64_t>(r[i]);
    return m;
  }
  m.big = std::make_unique<MoebiusElement>(Rational(from_i128(r[0])), Rational(from_i128(r[1])),
                                           Rational(from_i128(r[2])), Rational(from_i128(r[3])));
  return m;
}

std::array<std::uint64_t, 2> TraceEnumerator::fingerprint(const Mat& m) {
  if (m.big) return m.big->fingerprint();
  std::uint64_t h1 = 0x5bd1e9955bd1e995ULL, h2 = 0x2545f4914f6cdd1dULL;
  for (auto v : m.s) {
    h1 = mix64(h1, static_cast<std::uint64_t>(v));
    h2 = mix64(h2 ^ 0x632be59bd9b4e019ULL, static_cast<std::uint64_t>(v));
  }
  return {h1, h2};
}

CanonicalTrace TraceEnumerator::trace_of(const Mat& m) {
  if (m.big) return canonical_trace(*m.big);
  return CanonicalTrace{QuadValue(std::labs(m.s[0] + m.s[3]))};
}

TraceEnumerator::TraceEnumerator(std::vector<MoebiusElement> gens, EnumerationOptions opts)
    : gens_(std::move(gens)), opts_(std::move(opts)) {
  if (gens_.empty()) throw Error(ErrorKind::UnsupportedParameter, "no generators");
  if (opts_.max_word_len < 1) throw Error(ErrorKind::UnsupportedParameter, "max word length must be positive");
  small_mode_ = std::all_of(gens_.begin(), gens_.end(), [](const MoebiusElement& g) { return g.is_integral(); });
  std::unordered_set<std::array<std::uint64_t, 2>, FpHash> letter_fps;
  auto add_letter = [&](int letter, const MoebiusElement& m) {
    if (m.is_identity()) return;
    Mat mat = make(m);
    if (!letter_fps.insert(fingerprint(mat)).second) return;
    letters_.push_back(letter);
    letter_elems_.push_back(m);
    letter_mats_.push_back(std::move(mat));
  };
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    int l = static_cast<int>(i) + 1;
    add_letter(l, gens_[i]);
    add_letter(-l, mm_inv(gens_[i]));
  }
  Mat id = make(MoebiusElement::identity());
  parent_.push_back({0, 0});
  seen_.insert(fingerprint(id));
  frontier_.push_back({std::move(id), 0, 0});
  if (opts_.stop_when_covered) pending_.insert(opts_.stop_when_covered->begin(), opts_.stop_when_covered->end());
  result_.stats.states = 1;
}

Word TraceEnumerator::word_of(std::uint32_t state) const {
  Word w;
  while (state != 0) {
    w.push_back(parent_[state].second);
    state = parent_[state].first;
  }
  std::reverse(w.begin(), w.end());
  return w;
}

void TraceEnumerator::record(const CanonicalTrace& t, std::uint32_t id) {
  if (opts_.containment && !opts_.containment(t)) {
    if (result_.violations.size() < 10) result_.violations.emplace_back(t, word_of(id));
    ++result_.violation_count;
  }
  if (!within_bound(t, opts_.trace_bound, opts_.complex_bound)) return;
  if (first_state_.emplace(t, id).second) {
    result_.witnesses.emplace(t, word_of(id));
    pending_.erase(t);
  }
}

bool TraceEnumerator::covered() const { return opts_.stop_when_covered.has_value() && pending_.empty(); }

bool TraceEnumerator::step() {
  if (level_ >= opts_.max_word_len || frontier_.empty()) return false;
  const std::size_t nl = letters_.size();
  const std::size_t chunk = 8192;
  const unsigned threads = std::max(1u, opts_.threads);
  struct Kid {
    bool present = false;
    Mat m;
    std::array<std::uint64_t, 2> fp{};
  };
  std::vector<Node> next;
  std::vector<Kid> kids;

  for (std::size_t start = 0; start < frontier_.size(); start += chunk) {
    const std::size_t n = std::min(chunk, frontier_.size() - start);
    kids.clear();
    kids.resize(n * nl);
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Node& node = frontier_[start + i];
        for (std::size_t l = 0; l < nl; ++l) {
          if (letters_[l] == -node.last) continue;
          Kid& k = kids[i * nl + l];
          k.m = multiply(node.m, l);
          k.fp = fingerprint(k.m);
          k.present = true;
        }
      }
    };
    if (threads == 1 || n < 64) {
      work(0, n);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (n + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = t * per, hi = std::min(n, lo + per);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t parent = frontier_[start + i].id;
      for (std::size_t l = 0; l < nl; ++l) {
        Kid& k = kids[i * nl + l];
        if (!k.present || !seen_.insert(k.fp).second) continue;
        if (parent_.size() >= opts_.state_cap)
          throw Error(ErrorKind::StateExplosion, "more than " + std::to_string(opts_.state_cap) + " states");
        auto id = static_cast<std::uint32_t>(parent_.size());
        parent_.push_back({parent, letters_[l]});
        record(trace_of(k.m), id);
        next.push_back({std::move(k.m), id, letters_[l]});
      }
    }
  }
  frontier_ = std::move(next);
  ++level_;
  result_.stats.states = parent_.size();
  result_.stats.max_len_reached = level_;
  return true;
}

void TraceEnumerator::run() {
  while (step()) {
    if (covered()) {
      result_.stats.stopped_early = level_ < opts_.max_word_len;
      break;
    }
  }
}

EnumerationResult enumerate_traces(const std::vector<MoebiusElement>& gens, const EnumerationOptions& opts) {
  TraceEnumerator e(gens, opts);
  e.run();
  return e.result();
}

CoverageReport coverage_report(const std::vector<CanonicalTrace>& expected, const std::vector<CanonicalTrace>& enumerated) {
  std::set<CanonicalTrace> exp(expected.begin(), expected.end());
  std::set<CanonicalTrace> got(enumerated.begin(), enumerated.end());
  CoverageReport r;
  std::set_difference(exp.begin(), exp.end(), got.begin(), got.end(), std::back_inserter(r.missing));
  std::set_intersection(exp.begin(), exp.end(), got.begin(), got.end(), std::back_inserter(r.covered));
  std::set_difference(got.begin(), got.end(), exp.begin(), exp.end(), std::back_inserter(r.extra));
  return r;
}

double trace_to_length(const CanonicalTrace& t) {
  if (!t.value.is_real()) throw Error(ErrorKind::NotHyperbolic, "complex trace " + t.str());
  if (qv_cmp_real(qv_abs_real(t.value), QuadValue(2)) <= 0) throw Error(ErrorKind::NotHyperbolic, "|" + t.str() + "| <= 2");
  return 2.0 * std::acosh(std::fabs(t.value.to_double()) / 2.0);
}

std::string format_trace_report(const EnumerationResult& r) {
  std::ostringstream os;
  for (const auto& [t, w] : r.witnesses) os << "trace " << t.str() << " word " << word_str(w) << "\n";
  return os.str();
}

}  // namespace fordlab
