#include "fordlab/exactnum.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fordlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedRadicand: return "MixedRadicand";
    case ErrorKind::NotReal: return "NotReal";
    case ErrorKind::NotComplexModulus: return "NotComplexModulus";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::FixesInfinity: return "FixesInfinity";
    case ErrorKind::IrrationalRadius: return "IrrationalRadius";
    case ErrorKind::LemmaViolation: return "LemmaViolation";
    case ErrorKind::StateExplosion: return "StateExplosion";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::UnsupportedParameter: return "UnsupportedParameter";
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  // splitmix64 finalizer folded into the running hash
  x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (x ^ (x >> 31));
}

std::uint64_t hash_mpz(const mpz_class& z, std::uint64_t seed) {
  const mpz_srcptr p = z.get_mpz_t();
  std::size_t n = mpz_size(p);
  std::uint64_t h = mix(seed, static_cast<std::uint64_t>(mpz_sgn(p) + 2));
  for (std::size_t i = 0; i < n; ++i) h = mix(h, static_cast<std::uint64_t>(mpz_getlimbn(p, i)));
  return h;
}

bool is_perfect_square(const mpz_class& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

mpz_class isqrt(const mpz_class& z) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

bool rational_is_square(const Rational& q) {
  return q.sign() >= 0 && is_perfect_square(q.num()) && is_perfect_square(q.den());
}

Rational rational_sqrt_exact(const Rational& q) { return Rational(isqrt(q.num()), isqrt(q.den())); }

[[noreturn]] void parse_fail(std::string_view text, const char* why) {
  throw Error(ErrorKind::Parse, std::string(why) + " in '" + std::string(text) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational::Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0");
  return Rational(v_.get_den(), v_.get_num());
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorKind::DivisionByZero, "division by 0");
  v_ /= o.v_;
  return *this;
}

std::string Rational::str() const { return v_.get_str(); }

Rational Rational::parse(std::string_view text) {
  if (text.empty()) parse_fail(text, "empty rational");
  std::size_t i = 0;
  bool neg = false;
  if (text[0] == '+' || text[0] == '-') {
    neg = text[0] == '-';
    i = 1;
  }
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) parse_fail(text, "missing digits");
    for (std::size_t k = from; k < to; ++k)
      if (!std::isdigit(static_cast<unsigned char>(text[k]))) parse_fail(text, "unexpected character");
    return mpz_class(std::string(text.substr(from, to - from)));
  };
  std::size_t slash = text.find('/', i);
  mpz_class num = digits(i, slash == std::string_view::npos ? text.size() : slash);
  mpz_class den = 1;
  if (slash != std::string_view::npos) den = digits(slash + 1, text.size());
  if (den == 0) parse_fail(text, "zero denominator");
  if (neg) num = -num;
  return Rational(num, den);
}

std::uint64_t Rational::fingerprint(std::uint64_t seed) const {
  return hash_mpz(v_.get_den(), hash_mpz(v_.get_num(), seed));
}

bool Rational::is_canonical() const {
  if (v_.get_den() <= 0) return false;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
  return g == 1 || (v_.get_num() == 0 && v_.get_den() == 1);
}

// ---------------------------------------------------------------------------
// square-free splitting

std::optional<std::pair<mpz_class, mpz_class>> square_free_split(const mpz_class& n_in,
                                                                 unsigned long prime_limit) {
  if (n_in <= 0) throw Error(ErrorKind::NotReal, "square_free_split of non-positive value");
  if (is_perfect_square(n_in)) return std::make_pair(isqrt(n_in), mpz_class(1));
  mpz_class n = n_in, k = 1, s = 1;
  unsigned long p = 2;
  for (; p <= prime_limit; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
    unsigned count = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++count;
    }
    for (unsigned c = 0; c + 1 < count; c += 2) k *= p;
    if (count % 2 == 1) s *= p;
  }
  if (n == 1) return std::make_pair(k, s);
  if (is_perfect_square(n)) return std::make_pair(k * isqrt(n), s);
  mpz_class lim = prime_limit;
  // No prime factor <= limit remains, so fewer than three prime factors
  // below limit^3; the perfect-square case was excluded above.
  if (mpz_class(p) * p > n || n < lim * lim * lim) return std::make_pair(k, s * n);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// QuadValue

QuadValue::QuadValue(Rational a, Rational b, long m) : a_(std::move(a)), b_(std::move(b)), m_(m) {
  normalize();
}

void QuadValue::normalize() {
  if (b_.is_zero() || m_ == 0) {
    b_ = 0;
    m_ = 0;
    return;
  }
  long sgn = m_ < 0 ? -1 : 1;
  auto split = square_free_split(mpz_class(std::labs(m_)));
  if (!split) throw Error(ErrorKind::UnsupportedParameter, "radicand too large");
  b_ *= Rational(split->first);
  long s = split->second.get_si();
  if (s == 1 && sgn > 0) {
    a_ += b_;
    b_ = 0;
    m_ = 0;
    return;
  }
  m_ = sgn * s;
}

long common_radicand(const QuadValue& x, const QuadValue& y) {
  if (x.is_rational()) return y.radicand();
  if (y.is_rational()) return x.radicand();
  if (x.radicand() != y.radicand())
    throw Error(ErrorKind::MixedRadicand,
                "sqrt(" + std::to_string(x.radicand()) + ") vs sqrt(" + std::to_string(y.radicand()) + ")");
  return x.radicand();
}

QuadValue& QuadValue::operator+=(const QuadValue& o) {
  long m = common_radicand(*this, o);
  a_ += o.a_;
  b_ += o.b_;
  m_ = m;
  settle();
  return *this;
}

QuadValue& QuadValue::operator-=(const QuadValue& o) {
  long m = common_radicand(*this, o);
  a_ -= o.a_;
  b_ -= o.b_;
  m_ = m;
  settle();
  return *this;
}

QuadValue& QuadValue::operator*=(const QuadValue& o) {
  if (o.is_rational()) {
    a_ *= o.a_;
    b_ *= o.a_;
    settle();
    return *this;
  }
  if (is_rational()) {
    Rational a = a_;
    *this = o;
    a_ *= a;
    b_ *= a;
    settle();
    return *this;
  }
  long m = common_radicand(*this, o);
  Rational na = a_ * o.a_ + Rational(m) * b_ * o.b_;
  Rational nb = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  m_ = m;
  settle();
  return *this;
}

QuadValue& QuadValue::operator/=(const QuadValue& o) { return *this *= o.inverse(); }

QuadValue QuadValue::operator-() const {
  QuadValue r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadValue QuadValue::conjugate() const { return QuadValue(a_, -b_, m_); }

Rational QuadValue::field_norm() const { return a_ * a_ - Rational(m_) * b_ * b_; }

QuadValue QuadValue::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of 0");
  Rational n = field_norm();
  return QuadValue(a_ / n, -b_ / n, m_);
}

QuadValue QuadValue::real_part() const {
  if (m_ >= 0) return *this;
  return QuadValue(a_);
}

QuadValue QuadValue::imag_part() const {
  if (m_ >= 0) return QuadValue(0);
  return QuadValue(0, b_, -m_);
}

std::string QuadValue::str() const {
  if (b_.is_zero()) return a_.str();
  std::string s = a_.is_zero() ? "" : a_.str();
  if (b_.sign() < 0) s += "-";
  else if (!a_.is_zero()) s += "+";
  if (b_.abs() != Rational(1)) s += b_.abs().str() + "*";
  s += "sqrt(" + std::to_string(m_) + ")";
  return s;
}

QuadValue QuadValue::parse(std::string_view text) {
  if (text.empty()) parse_fail(text, "empty value");
  for (char ch : text)
    if (std::isspace(static_cast<unsigned char>(ch))) parse_fail(text, "whitespace");
  std::size_t pos = text.find("sqrt(");
  if (pos == std::string_view::npos) return QuadValue(Rational::parse(text));
  if (text.back() != ')') parse_fail(text, "unterminated sqrt");
  std::string_view inner = text.substr(pos + 5, text.size() - pos - 6);
  if (inner.empty()) parse_fail(text, "empty radicand");
  std::size_t k = (inner[0] == '-' || inner[0] == '+') ? 1 : 0;
  if (k == inner.size()) parse_fail(text, "empty radicand");
  for (std::size_t j = k; j < inner.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(inner[j]))) parse_fail(text, "bad radicand");
  if (inner.size() > 18) parse_fail(text, "radicand too large");
  long m = std::stol(std::string(inner));

  std::string_view prefix = text.substr(0, pos);
  bool explicit_coeff = false;
  if (!prefix.empty() && prefix.back() == '*') {
    prefix.remove_suffix(1);
    explicit_coeff = true;
  }
  std::size_t cut = prefix.find_last_of("+-");
  std::string_view rat = "";
  std::string_view coeff = prefix;
  if (cut != std::string_view::npos && cut > 0) {
    rat = prefix.substr(0, cut);
    coeff = prefix.substr(cut);
  } else if (cut == std::string_view::npos && !explicit_coeff && !prefix.empty()) {
    parse_fail(text, "missing operator before sqrt");
  }
  Rational b;
  if (coeff.empty() || coeff == "+") {
    if (explicit_coeff) parse_fail(text, "missing coefficient");
    b = 1;
  } else if (coeff == "-") {
    if (explicit_coeff) parse_fail(text, "missing coefficient");
    b = -1;
  } else {
    if (!explicit_coeff) parse_fail(text, "missing '*'");
    b = Rational::parse(coeff);
  }
  Rational a = rat.empty() ? Rational(0) : Rational::parse(rat);
  return QuadValue(a, b, m);
}

std::uint64_t QuadValue::fingerprint(std::uint64_t seed) const {
  return b_.fingerprint(a_.fingerprint(mix(seed, static_cast<std::uint64_t>(m_))));
}

double QuadValue::to_double() const {
  if (m_ < 0) throw Error(ErrorKind::NotReal, str());
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(m_));
}

QuadValue qv_mul(const QuadValue& x, const QuadValue& y) { return x * y; }

int qv_sign_real(const QuadValue& x) {
  if (!x.is_real()) throw Error(ErrorKind::NotReal, x.str());
  int sa = x.rational_part().sign();
  int sb = x.radical_coeff().sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  Rational a2 = x.rational_part() * x.rational_part();
  Rational b2m = x.radical_coeff() * x.radical_coeff() * Rational(x.radicand());
  if (a2 > b2m) return sa;
  if (a2 < b2m) return sb;
  return 0;
}

std::strong_ordering qv_cmp_real(const QuadValue& x, const QuadValue& y) {
  if (!x.is_real()) throw Error(ErrorKind::NotReal, x.str());
  if (!y.is_real()) throw Error(ErrorKind::NotReal, y.str());
  RadicalExpr e = RadicalExpr::from(x);
  e.add(RadicalExpr::from(y), -1);
  int s = radical_sign(e);
  return s < 0 ? std::strong_ordering::less
               : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

QuadValue qv_abs_real(const QuadValue& x) { return qv_sign_real(x) < 0 ? -x : x; }

Rational qv_abs2(const QuadValue& x) {
  if (x.is_rational()) return x.rational_part() * x.rational_part();
  if (x.radicand() > 0) throw Error(ErrorKind::NotComplexModulus, x.str());
  return x.field_norm();
}

std::optional<QuadValue> sqrt_rational(const Rational& q) {
  if (q.sign() < 0) throw Error(ErrorKind::NotReal, "sqrt of negative " + q.str());
  if (q.is_zero()) return QuadValue(0);
  if (rational_is_square(q)) return QuadValue(rational_sqrt_exact(q));
  mpz_class n = q.num() * q.den();
  auto split = square_free_split(n);
  if (!split || split->second > mpz_class(1L << 40)) return std::nullopt;
  Rational coeff(split->first, q.den());
  return QuadValue(0, coeff, split->second.get_si());
}

// ---------------------------------------------------------------------------
// RadicalExpr

RadicalExpr RadicalExpr::from(const QuadValue& x) {
  if (!x.is_real()) throw Error(ErrorKind::NotReal, x.str());
  RadicalExpr e(x.rational_part());
  if (!x.is_rational()) e.add(x.radical_coeff(), Rational(x.radicand()));
  return e;
}

RadicalExpr& RadicalExpr::add(Rational coeff, Rational radicand) {
  if (radicand.sign() < 0) throw Error(ErrorKind::NotReal, "negative radicand " + radicand.str());
  terms.emplace_back(std::move(coeff), std::move(radicand));
  return *this;
}

RadicalExpr& RadicalExpr::add(const RadicalExpr& other, int scale) {
  base += Rational(scale) * other.base;
  for (const auto& [c, q] : other.terms) terms.emplace_back(Rational(scale) * c, q);
  return *this;
}

namespace {

// Folds perfect squares into the base and merges radicals whose ratio is a
// rational square.
RadicalExpr simplify(const RadicalExpr& e) {
  RadicalExpr out(e.base);
  for (const auto& [c, q] : e.terms) {
    if (c.is_zero() || q.is_zero()) continue;
    if (rational_is_square(q)) {
      out.base += c * rational_sqrt_exact(q);
      continue;
    }
    bool merged = false;
    for (auto& [oc, oq] : out.terms) {
      Rational ratio = q / oq;
      if (rational_is_square(ratio)) {
        oc += c * rational_sqrt_exact(ratio);
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.emplace_back(c, q);
  }
  std::erase_if(out.terms, [](const auto& t) { return t.first.is_zero(); });
  return out;
}

// sign(a + c*sqrt(q)), q > 0 not a square.
int sign_one(const Rational& a, const Rational& c, const Rational& q) {
  int sa = a.sign(), sc = c.sign();
  if (sc == 0) return sa;
  if (sa == 0 || sa == sc) return sc;
  Rational lhs = a * a, rhs = c * c * q;
  if (lhs > rhs) return sa;
  if (lhs < rhs) return sc;
  return 0;
}

}  // namespace

std::optional<int> certified_sign(const RadicalExpr& e, unsigned bits) {
  Rational lo = e.base, hi = e.base;
  mpz_class scale = 1;
  scale <<= bits;
  for (const auto& [c, q] : e.terms) {
    if (c.is_zero() || q.is_zero()) continue;
    mpz_class s = q.num() * q.den();
    mpz_class shifted = s << (2 * bits);
    mpz_class root = isqrt(shifted);
    bool exact = root * root == shifted;
    Rational r_lo(root, q.den() * scale);
    Rational r_hi(exact ? root : root + 1, q.den() * scale);
    if (c.sign() > 0) {
      lo += c * r_lo;
      hi += c * r_hi;
    } else {
      lo += c * r_hi;
      hi += c * r_lo;
    }
  }
  if (lo.sign() > 0) return 1;
  if (hi.sign() < 0) return -1;
  if (lo.is_zero() && hi.is_zero()) return 0;
  return std::nullopt;
}

int radical_sign(const RadicalExpr& raw, unsigned max_bits) {
  RadicalExpr e = simplify(raw);
  if (e.terms.empty()) return e.base.sign();
  if (e.terms.size() == 1) return sign_one(e.base, e.terms[0].first, e.terms[0].second);
  if (e.terms.size() == 2) {
    const auto& [c1, q1] = e.terms[0];
    const auto& [c2, q2] = e.terms[1];
    int sx = sign_one(e.base, c1, q1);
    int sy = c2.sign();
    if (sx == 0) return sy;
    if (sx == sy) return sx;
    // |X| vs |Y| where X = base + c1 sqrt(q1), Y = c2 sqrt(q2)
    int d = sign_one(e.base * e.base + c1 * c1 * q1 - c2 * c2 * q2, Rational(2) * e.base * c1, q1);
    if (d > 0) return sx;
    if (d < 0) return sy;
    return 0;
  }
  for (unsigned bits = 64; bits <= max_bits; bits *= 2) {
    if (auto s = certified_sign(e, bits)) return *s;
  }
  throw Error(ErrorKind::PrecisionExhausted, "interval still straddles zero at " + std::to_string(max_bits) + " bits");
}

std::pair<Rational, Rational> enclose(const QuadValue& x, unsigned bits) {
  if (!x.is_real()) throw Error(ErrorKind::NotReal, x.str());
  if (x.is_rational()) return {x.rational_part(), x.rational_part()};
  mpz_class scale = 1;
  scale <<= bits;
  mpz_class shifted = mpz_class(x.radicand()) << (2 * bits);
  mpz_class root = isqrt(shifted);
  Rational r_lo(root, scale), r_hi(root + 1, scale);
  const Rational& a = x.rational_part();
  const Rational& b = x.radical_coeff();
  if (b.sign() > 0) return {a + b * r_lo, a + b * r_hi};
  return {a + b * r_hi, a + b * r_lo};
}

}  // namespace fordlab
