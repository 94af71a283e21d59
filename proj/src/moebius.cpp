#include "fordlab/moebius.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <istream>
#include <sstream>

namespace fordlab {

MoebiusElement::MoebiusElement(Unchecked, QuadValue a, QuadValue b, QuadValue c, QuadValue d)
    : m_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  sign_normalize();
}

MoebiusElement::MoebiusElement(QuadValue a, QuadValue b, QuadValue c, QuadValue d)
    : m_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  QuadValue det = determinant();
  if (!(det == QuadValue(1)))
    throw Error(ErrorKind::NotUnimodular, "determinant " + det.str() + " of " + str());
  sign_normalize();
}

void MoebiusElement::sign_normalize() {
  if (is_identity()) {
    m_ = {QuadValue(1), QuadValue(0), QuadValue(0), QuadValue(1)};
    return;
  }
  for (int idx : {2, 0, 1, 3}) {
    if (m_[idx].is_zero()) continue;
    if (!m_[idx].canonically_positive())
      for (auto& e : m_) e = -e;
    return;
  }
}

long MoebiusElement::radicand() const {
  long m = 0;
  for (const auto& e : m_)
    if (!e.is_rational()) m = e.radicand();
  return m;
}

bool MoebiusElement::is_identity() const {
  return b().is_zero() && c().is_zero() && a() == d() && (a() == QuadValue(1) || a() == QuadValue(-1));
}

bool MoebiusElement::is_integral() const {
  return std::all_of(m_.begin(), m_.end(), [](const QuadValue& e) { return e.is_integer(); });
}

std::string MoebiusElement::str() const {
  return "[[" + a().str() + "," + b().str() + "],[" + c().str() + "," + d().str() + "]]";
}

MoebiusElement MoebiusElement::parse(std::string_view raw) {
  std::string text;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  auto fail = [&](const char* why) -> MoebiusElement {
    throw Error(ErrorKind::Parse, std::string(why) + " in matrix '" + std::string(raw) + "'");
  };
  if (text.size() < 4 || text.rfind("[[", 0) != 0 || text.substr(text.size() - 2) != "]]")
    return fail("expected [[a,b],[c,d]]");
  std::string body = text.substr(2, text.size() - 4);
  std::size_t mid = body.find("],[");
  if (mid == std::string::npos || body.find("],[", mid + 1) != std::string::npos) return fail("expected two rows");
  auto split_row = [&](const std::string& row) {
    // the radical "sqrt(...)" never contains commas
    std::size_t comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) fail("expected two entries per row");
    return std::make_pair(QuadValue::parse(row.substr(0, comma)), QuadValue::parse(row.substr(comma + 1)));
  };
  auto [a, b] = split_row(body.substr(0, mid));
  auto [c, d] = split_row(body.substr(mid + 3));
  return MoebiusElement(a, b, c, d);
}

std::array<std::uint64_t, 2> MoebiusElement::fingerprint() const {
  std::uint64_t h1 = 0x243f6a8885a308d3ULL, h2 = 0x13198a2e03707344ULL;
  for (const auto& e : m_) {
    h1 = e.fingerprint(h1);
    h2 = e.fingerprint(h2 ^ 0xa4093822299f31d0ULL);
  }
  return {h1, h2};
}

MoebiusElement mm_mul(const MoebiusElement& x, const MoebiusElement& y) {
  return MoebiusElement(MoebiusElement::Unchecked{}, x.a() * y.a() + x.b() * y.c(), x.a() * y.b() + x.b() * y.d(),
                        x.c() * y.a() + x.d() * y.c(), x.c() * y.b() + x.d() * y.d());
}

MoebiusElement mm_inv(const MoebiusElement& x) {
  return MoebiusElement(MoebiusElement::Unchecked{}, x.d(), -x.b(), -x.c(), x.a());
}

MoebiusElement mm_pow(const MoebiusElement& x, long k) {
  MoebiusElement base = k < 0 ? mm_inv(x) : x;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1 : static_cast<unsigned long>(k);
  MoebiusElement acc = MoebiusElement::identity();
  while (e > 0) {
    if (e & 1) acc = mm_mul(acc, base);
    e >>= 1;
    if (e > 0) base = mm_mul(base, base);
  }
  return acc;
}

MoebiusElement conjugate_by(const MoebiusElement& g, const MoebiusElement& x) { return g * x * mm_inv(g); }

CanonicalTrace CanonicalTrace::of(const QuadValue& t) {
  const Rational& a = t.rational_part();
  if (a.sign() > 0 || (a.is_zero() && t.radical_coeff().sign() >= 0)) return {t};
  return {-t};
}

std::strong_ordering operator<=>(const CanonicalTrace& x, const CanonicalTrace& y) {
  if (auto c = x.value.rational_part() <=> y.value.rational_part(); c != 0) return c;
  if (auto c = x.value.radical_coeff() <=> y.value.radical_coeff(); c != 0) return c;
  return x.value.radicand() <=> y.value.radicand();
}

CanonicalTrace canonical_trace(const MoebiusElement& x) { return CanonicalTrace::of(x.trace()); }

std::string_view to_string(ElementClass c) {
  switch (c) {
    case ElementClass::Identity: return "identity";
    case ElementClass::Elliptic: return "elliptic";
    case ElementClass::Parabolic: return "parabolic";
    case ElementClass::Hyperbolic: return "hyperbolic";
    case ElementClass::Loxodromic: return "loxodromic";
  }
  return "?";
}

ElementClass classify(const MoebiusElement& x) {
  if (x.is_identity()) return ElementClass::Identity;
  QuadValue t = x.trace();
  if (!t.is_real()) return ElementClass::Loxodromic;
  auto c = qv_cmp_real(qv_abs_real(t), QuadValue(2));
  if (c < 0) return ElementClass::Elliptic;
  if (c == 0) return ElementClass::Parabolic;
  return ElementClass::Hyperbolic;
}

namespace {

mpz_class integer_entry(const QuadValue& e) {
  if (!e.is_integer()) throw Error(ErrorKind::NotIntegral, e.str());
  return e.rational_part().num();
}

bool divisible(const mpz_class& v, long n) { return mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(n)) != 0; }

}  // namespace

bool in_gamma0(const MoebiusElement& x, long n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedParameter, "level must be positive");
  for (const QuadValue* e : {&x.a(), &x.b(), &x.d()}) integer_entry(*e);
  return divisible(integer_entry(x.c()), n);
}

bool in_principal(const MoebiusElement& x, long n) {
  if (n < 1) throw Error(ErrorKind::UnsupportedParameter, "level must be positive");
  mpz_class a = integer_entry(x.a()), b = integer_entry(x.b());
  mpz_class c = integer_entry(x.c()), d = integer_entry(x.d());
  if (!divisible(b, n) || !divisible(c, n)) return false;
  return (divisible(a - 1, n) && divisible(d - 1, n)) || (divisible(a + 1, n) && divisible(d + 1, n));
}

bool in_ring_of_integers(const QuadValue& x, long d) {
  if (!x.is_rational() && x.radicand() != -d) return false;
  const Rational& a = x.rational_part();
  const Rational& b = x.radical_coeff();
  if (d % 4 == 3) {
    // a + b*sqrt(-d) = (a - b) + 2b * omega with omega = (1 + sqrt(-d))/2
    Rational two_b = Rational(2) * b;
    return two_b.is_integer() && (a - b).is_integer();
  }
  return a.is_integer() && b.is_integer();
}

bool in_bianchi(const MoebiusElement& x, long d) {
  return in_ring_of_integers(x.a(), d) && in_ring_of_integers(x.b(), d) && in_ring_of_integers(x.c(), d) &&
         in_ring_of_integers(x.d(), d);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += 'g' + std::to_string(std::abs(w[i]));
    if (w[i] < 0) s += "^-1";
  }
  return s;
}

Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& l : r) l = -l;
  return r;
}

MoebiusElement evaluate_word(const std::vector<MoebiusElement>& gens, const Word& w) {
  MoebiusElement acc = MoebiusElement::identity();
  for (int l : w) {
    std::size_t idx = static_cast<std::size_t>(std::abs(l)) - 1;
    if (l == 0 || idx >= gens.size()) throw Error(ErrorKind::UnsupportedParameter, "letter out of range");
    acc = acc * (l > 0 ? gens[idx] : mm_inv(gens[idx]));
  }
  return acc;
}

std::vector<MoebiusElement> parse_generator_file(std::istream& in) {
  std::vector<MoebiusElement> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); })) continue;
    try {
      out.push_back(MoebiusElement::parse(line));
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string format_generator_file(const std::vector<MoebiusElement>& gens, std::string_view header) {
  std::ostringstream os;
  if (!header.empty()) os << "# " << header << "\n";
  for (const auto& g : gens) os << g.str() << "\n";
  return os.str();
}

}  // namespace fordlab
