#include "fordlab/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "geometry_detail.hpp"

namespace fordlab {

std::string ComplexPoint::str() const {
  if (im.is_zero()) return re.str();
  return re.str() + " + i*(" + im.str() + ")";
}

ComplexPoint ComplexPoint::of_field(const QuadValue& z) { return {z.real_part(), z.imag_part()}; }

ComplexPoint operator/(const ComplexPoint& x, const ComplexPoint& y) {
  QuadValue n = y.abs2();
  if (n.is_zero()) throw Error(ErrorKind::DivisionByZero, "complex division by zero");
  ComplexPoint p = x * y.conj();
  return {p.re / n, p.im / n};
}

ComplexPoint apply(const MoebiusElement& g, const ComplexPoint& z) {
  auto a = ComplexPoint::of_field(g.a()), b = ComplexPoint::of_field(g.b());
  auto c = ComplexPoint::of_field(g.c()), d = ComplexPoint::of_field(g.d());
  return (a * z + b) / (c * z + d);
}

Rational entry_abs2(const QuadValue& e) {
  if (e.is_rational() || e.radicand() < 0) return qv_abs2(e);
  if (!e.rational_part().is_zero()) throw Error(ErrorKind::IrrationalRadius, "|" + e.str() + "|^2 is irrational");
  return e.radical_coeff() * e.radical_coeff() * Rational(e.radicand());
}

IsometricDisk isometric_disk(const MoebiusElement& g) {
  if (g.fixes_infinity()) throw Error(ErrorKind::FixesInfinity, g.str());
  return {ComplexPoint::of_field(-g.d() / g.c()), entry_abs2(g.c()).inverse(), g};
}

std::string_view to_string(Separation s) {
  switch (s) {
    case Separation::Disjoint: return "disjoint";
    case Separation::Tangent: return "tangent";
    case Separation::Overlap: return "overlap";
  }
  return "?";
}

std::string_view to_string(MarginKind k) {
  switch (k) {
    case MarginKind::None: return "none";
    case MarginKind::Linear: return "linear";
    case MarginKind::Squared: return "squared";
  }
  return "?";
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Undecided: return "undecided";
    case CheckStatus::Info: return "info";
  }
  return "?";
}

std::string_view to_string(CriterionVariant v) {
  switch (v) {
    case CriterionVariant::None: return "none";
    case CriterionVariant::Classical: return "classical";
    case CriterionVariant::Sharp: return "sharp";
  }
  return "?";
}

CheckStatus strictest(const std::vector<Check>& checks) {
  bool undecided = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail) return CheckStatus::Fail;
    if (c.status == CheckStatus::Undecided) undecided = true;
  }
  return undecided ? CheckStatus::Undecided : CheckStatus::Pass;
}

CheckStatus SeparationReport::overall() const { return strictest(checks); }

namespace detail {

std::optional<QuadValue> as_quad(const RadicalExpr& e) {
  QuadValue acc(e.base);
  for (const auto& [c, r] : e.terms) {
    auto s = sqrt_rational(r);
    if (!s) return std::nullopt;
    try {
      acc += QuadValue(c) * *s;
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::MixedRadicand) return std::nullopt;
      throw;
    }
  }
  return acc;
}

RadicalExpr diff(RadicalExpr a, const RadicalExpr& b) {
  a.add(b, -1);
  return a;
}

RadicalExpr shadow_end(const IsometricDisk& u, int side) {
  RadicalExpr e = RadicalExpr::from(u.center.re);
  e.add(Rational(side), u.radius_sq);
  return e;
}

RadicalExpr squared_gap(const IsometricDisk& u, const IsometricDisk& v) {
  QuadValue dist2 = (u.center - v.center).abs2();
  RadicalExpr e = RadicalExpr::from(dist2);
  e.base -= u.radius_sq + v.radius_sq;
  e.add(Rational(-2), u.radius_sq * v.radius_sq);
  return e;
}

std::pair<RadicalExpr, MarginKind> gap_expr(const IsometricDisk& u, const IsometricDisk& v) {
  QuadValue dist2 = (u.center - v.center).abs2();
  if (dist2.is_rational()) {
    RadicalExpr e;
    e.add(Rational(1), dist2.rational_part());
    e.add(Rational(-1), u.radius_sq);
    e.add(Rational(-1), v.radius_sq);
    return {e, MarginKind::Linear};
  }
  return {squared_gap(u, v), MarginKind::Squared};
}

void MinTracker::offer(const RadicalExpr& e, MarginKind k, std::string who) {
  if (best && kind != k) {
    if (k != MarginKind::Linear) return;
    // a linear margin is preferred over a squared one
    best.reset();
  }
  if (!best || radical_sign(diff(e, *best)) < 0) {
    best = e;
    kind = k;
    witness = std::move(who);
  }
}

void MinTracker::fill(Check& c) const {
  if (!best) return;
  c.margin = as_quad(*best);
  c.margin_kind = c.margin ? kind : MarginKind::None;
  if (!witness.empty()) c.witnesses.push_back(witness);
}

mpz_class floor_of(const QuadValue& x) {
  if (x.is_rational()) return x.rational_part().floor();
  for (unsigned bits = 64; bits <= (1u << 16); bits *= 2) {
    auto [lo, hi] = enclose(x, bits);
    if (lo.floor() == hi.floor()) return lo.floor();
  }
  throw Error(ErrorKind::PrecisionExhausted, "floor of " + x.str());
}

QuadValue cross(const ComplexPoint& x, const ComplexPoint& y) { return x.re * y.im - x.im * y.re; }
QuadValue dot(const ComplexPoint& x, const ComplexPoint& y) { return x.re * y.re + x.im * y.im; }

Word repeat(const Word& w, long times) {
  Word out;
  const Word unit = times < 0 ? inverse_word(w) : w;
  for (long i = 0; i < std::labs(times); ++i) out.insert(out.end(), unit.begin(), unit.end());
  return out;
}

Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

using namespace detail;

Separation disks_disjoint(const IsometricDisk& u, const IsometricDisk& v) {
  int s = radical_sign(squared_gap(u, v));
  return s > 0 ? Separation::Disjoint : (s == 0 ? Separation::Tangent : Separation::Overlap);
}

Margin disjoint_margin(const IsometricDisk& u, const IsometricDisk& v) {
  auto [e, kind] = gap_expr(u, v);
  if (auto q = as_quad(e)) return {q, kind};
  if (kind == MarginKind::Linear)
    if (auto q = as_quad(squared_gap(u, v))) return {q, MarginKind::Squared};
  return {std::nullopt, MarginKind::None};
}

// ---------------------------------------------------------------------------
// Two-generator strips

namespace {

Check margin_check(std::string name, const QuadValue& margin, bool strict_positive, CheckStatus on_fail) {
  Check c;
  c.name = std::move(name);
  int s = qv_sign_real(margin);
  bool ok = strict_positive ? s > 0 : s >= 0;
  c.status = ok ? CheckStatus::Pass : on_fail;
  c.margin = margin;
  c.margin_kind = MarginKind::Linear;
  return c;
}

void assemble_strip(FordDomain& q) {
  q.excluded.clear();
  const QuadValue& tau = q.translations.at(0).b();
  double tw = tau.to_double();
  RadicalExpr left = RadicalExpr::from(q.center - q.halfwidth);
  RadicalExpr right = RadicalExpr::from(q.center + q.halfwidth);
  for (const auto& b : q.base) {
    double c = b.disk.center.re.to_double();
    double r = std::sqrt(b.disk.radius_sq.to_double());
    double lo = (q.center.to_double() - q.halfwidth.to_double() - c - r) / tw;
    double hi = (q.center.to_double() + q.halfwidth.to_double() - c + r) / tw;
    for (long k = static_cast<long>(std::floor(lo)) - 1; k <= static_cast<long>(std::ceil(hi)) + 1; ++k) {
      QuadValue shift = QuadValue(Rational(k)) * tau;
      IsometricDisk moved = b.disk;
      moved.center.re += shift;
      // open shadow meets the open strip
      if (radical_sign(diff(shadow_end(moved, -1), right)) >= 0) continue;
      if (radical_sign(diff(shadow_end(moved, 1), left)) <= 0) continue;
      MoebiusElement pairing = b.pairing * mm_pow(q.translations[0], -k);
      Word w = concat(b.word, repeat(q.translation_words[0], -k));
      q.excluded.push_back({isometric_disk(pairing), pairing, w});
    }
  }
}

ExcludedDisk base_disk(const MoebiusElement& g, Word w) { return {isometric_disk(g), g, std::move(w)}; }

}  // namespace

std::vector<Check> two_gen_criteria(const QuadValue& m, const MoebiusElement& g2) {
  if (!m.is_real()) throw Error(ErrorKind::NotReal, "translation length " + m.str());
  if (m.is_zero()) throw Error(ErrorKind::UnsupportedParameter, "zero translation length");
  if (g2.fixes_infinity()) throw Error(ErrorKind::FixesInfinity, g2.str());
  std::vector<Check> out;

  Check self;
  self.name = "self_domain";
  if (g2.trace().is_real()) {
    self.witnesses.push_back("real trace " + g2.trace().str());
  } else {
    IsometricDisk u = isometric_disk(g2), v = isometric_disk(mm_inv(g2));
    Margin mg = disjoint_margin(u, v);
    self.margin = mg.value;
    self.margin_kind = mg.kind;
    if (disks_disjoint(u, v) != Separation::Disjoint) self.status = CheckStatus::Fail;
  }
  out.push_back(self);

  QuadValue absm = qv_abs_real(m);
  QuadValue absc = qv_abs_real(g2.c());
  QuadValue spread = qv_abs_real(g2.trace()) / absc;
  out.push_back(margin_check("classical_trace_inequality", absm / QuadValue(2) - spread, true, CheckStatus::Info));
  out.push_back(margin_check("classical_period_inequality", absm - QuadValue(4) / absc, true, CheckStatus::Info));
  Check fit = margin_check("period_fit", absm - spread - QuadValue(2) / absc, true, CheckStatus::Fail);
  fit.witnesses.push_back("disk union spans " + (spread + QuadValue(2) / absc).str() + " against period " + absm.str());
  out.push_back(fit);
  return out;
}

namespace {

CriterionVariant variant_of(const std::vector<Check>& cs) {
  auto ok = [&](std::string_view name) {
    return std::any_of(cs.begin(), cs.end(), [&](const Check& c) { return c.name == name && c.status == CheckStatus::Pass; });
  };
  if (!ok("self_domain")) return CriterionVariant::None;
  if (ok("classical_trace_inequality") && ok("classical_period_inequality")) return CriterionVariant::Classical;
  if (ok("period_fit")) return CriterionVariant::Sharp;
  return CriterionVariant::None;
}

}  // namespace

FordDomain build_ford_two_gen(const QuadValue& m, const MoebiusElement& g2, TwoGenLetters letters) {
  FordDomain q;
  q.criteria = two_gen_criteria(m, g2);
  q.variant = variant_of(q.criteria);
  if (q.variant == CriterionVariant::None) {
    std::string why;
    for (const auto& c : q.criteria) {
      if (c.status == CheckStatus::Pass) continue;
      if (!why.empty()) why += "; ";
      why += c.name + " fails";
      if (c.margin) why += " (margin " + c.margin->str() + ")";
    }
    throw Error(ErrorKind::LemmaViolation, "<T^" + m.str() + ", " + g2.str() + ">: " + why);
  }
  q.ambient = 2;
  QuadValue absm = qv_abs_real(m);
  q.center = (g2.a() - g2.d()) / (QuadValue(2) * g2.c());
  q.halfwidth = absm / QuadValue(2);
  q.translations = {MoebiusElement::translation(absm)};
  q.translation_words = {Word{qv_sign_real(m) > 0 ? letters.translation : -letters.translation}};
  q.base.push_back(base_disk(g2, {letters.other}));
  MoebiusElement inv = mm_inv(g2);
  if (!(inv == g2)) q.base.push_back(base_disk(inv, {-letters.other}));
  assemble_strip(q);
  return q;
}

FordDomain recenter(const FordDomain& q, const QuadValue& center) {
  if (q.ambient != 2) throw Error(ErrorKind::UnsupportedParameter, "recenter needs a strip domain");
  FordDomain r = q;
  r.center = center;
  assemble_strip(r);
  return r;
}

// ---------------------------------------------------------------------------
// Prisms

bool point_in_prism(const ComplexPoint& p, const Prism& prism) {
  QuadValue area = cross(prism.t1, prism.t2);
  ComplexPoint rel = p - prism.anchor;
  QuadValue s = cross(rel, prism.t2) / area;
  QuadValue t = cross(prism.t1, rel) / area;
  auto unit = [](const QuadValue& v) { return qv_sign_real(v) >= 0 && qv_cmp_real(v, QuadValue(1)) <= 0; };
  return unit(s) && unit(t);
}

namespace {

struct Edge {
  ComplexPoint from;
  ComplexPoint dir;
};

std::array<Edge, 4> prism_edges(const Prism& p) {
  return {Edge{p.anchor, p.t1}, Edge{p.anchor + p.t2, p.t1}, Edge{p.anchor, p.t2}, Edge{p.anchor + p.t1, p.t2}};
}

QuadValue segment_distance2(const ComplexPoint& p, const Edge& e) {
  QuadValue len2 = e.dir.abs2();
  QuadValue lambda = dot(p - e.from, e.dir) / len2;
  if (qv_sign_real(lambda) < 0) lambda = QuadValue(0);
  if (qv_cmp_real(lambda, QuadValue(1)) > 0) lambda = QuadValue(1);
  ComplexPoint closest = e.from + ComplexPoint{lambda * e.dir.re, lambda * e.dir.im};
  return (p - closest).abs2();
}

QuadValue line_distance2(const ComplexPoint& p, const Edge& e) {
  QuadValue cr = cross(p - e.from, e.dir);
  return cr * cr / e.dir.abs2();
}

}  // namespace

QuadValue prism_distance2(const ComplexPoint& p, const Prism& prism) {
  if (point_in_prism(p, prism)) return QuadValue(0);
  std::optional<QuadValue> best;
  for (const auto& e : prism_edges(prism)) {
    QuadValue d2 = segment_distance2(p, e);
    if (!best || qv_cmp_real(d2, *best) < 0) best = d2;
  }
  return *best;
}

FordDomain build_ford_prism(const MoebiusElement& g, const Prism& prism, const MoebiusElement& t1,
                            const MoebiusElement& t2, PrismLetters letters) {
  if (!t1.fixes_infinity() || !t2.fixes_infinity())
    throw Error(ErrorKind::UnsupportedParameter, "prism translations must fix infinity");
  FordDomain q;
  q.ambient = 3;
  q.prism = prism;
  q.translations = {t1, t2};
  q.translation_words = {Word{letters.t1}, Word{letters.t2}};
  q.base.push_back(base_disk(g, {letters.generator}));
  MoebiusElement inv = mm_inv(g);
  if (!(inv == g)) q.base.push_back(base_disk(inv, {-letters.generator}));
  for (const auto& b : q.base) {
    for (long i = -3; i <= 3; ++i) {
      for (long j = -3; j <= 3; ++j) {
        MoebiusElement shift = mm_pow(t1, i) * mm_pow(t2, j);
        MoebiusElement pairing = b.pairing * mm_inv(shift);
        IsometricDisk disk = isometric_disk(pairing);
        if (qv_cmp_real(prism_distance2(disk.center, prism), QuadValue(disk.radius_sq)) > 0) continue;
        Word w = concat(concat(b.word, repeat(q.translation_words[1], -j)), repeat(q.translation_words[0], -i));
        q.excluded.push_back({disk, pairing, w});
      }
    }
  }
  q.variant = CriterionVariant::None;
  return q;
}

bool disk_in_domain(const IsometricDisk& u, const FordDomain& q, bool strict) {
  if (q.ambient == 2) {
    if (!u.center.im.is_zero()) throw Error(ErrorKind::UnsupportedParameter, "disk off the real axis");
    RadicalExpr left = RadicalExpr::from(q.center - q.halfwidth);
    RadicalExpr right = RadicalExpr::from(q.center + q.halfwidth);
    int sl = radical_sign(diff(shadow_end(u, -1), left));
    int sr = radical_sign(diff(right, shadow_end(u, 1)));
    if (strict ? (sl <= 0 || sr <= 0) : (sl < 0 || sr < 0)) return false;
  } else {
    if (!point_in_prism(u.center, q.prism)) return false;
    for (const auto& e : prism_edges(q.prism)) {
      auto c = qv_cmp_real(line_distance2(u.center, e), QuadValue(u.radius_sq));
      if (strict ? c <= 0 : c < 0) return false;
    }
  }
  return std::all_of(q.excluded.begin(), q.excluded.end(),
                     [&](const ExcludedDisk& e) { return disks_disjoint(u, e.disk) == Separation::Disjoint; });
}

bool point_in_domain(const ComplexPoint& z, const FordDomain& q, bool interior) {
  if (q.ambient != 2) throw Error(ErrorKind::UnsupportedParameter, "point_in_domain needs a strip domain");
  int up = qv_sign_real(z.im);
  if (up <= 0) return false;
  auto side = qv_cmp_real(qv_abs_real(z.re - q.center), q.halfwidth);
  if (interior ? side >= 0 : side > 0) return false;
  for (const auto& e : q.excluded) {
    auto c = qv_cmp_real((z - e.disk.center).abs2(), QuadValue(e.disk.radius_sq));
    if (interior ? c <= 0 : c < 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reduction

std::string_view to_string(MembershipResult::Status s) {
  switch (s) {
    case MembershipResult::Status::Member: return "member";
    case MembershipResult::Status::NonMember: return "non-member";
    case MembershipResult::Status::Undecided: return "undecided";
  }
  return "?";
}

namespace {

Rational max_radius_sq(const FordDomain& q) {
  Rational best(0);
  for (const auto& e : q.excluded) best = std::max(best, e.disk.radius_sq);
  return best;
}

// Exact top when it is rational, otherwise a rational upper bound.
QuadValue rational_top(const Rational& radius_sq) {
  if (radius_sq.is_zero()) return QuadValue(0);
  auto r = sqrt_rational(radius_sq);
  if (r && r->is_rational()) return *r;
  return QuadValue(enclose(r ? *r : QuadValue(radius_sq), 64).second);
}

}  // namespace

ComplexPoint domain_basepoint(const FordDomain& q) {
  if (q.ambient != 2) throw Error(ErrorKind::UnsupportedParameter, "basepoint needs a strip domain");
  Rational rmax = max_radius_sq(q);
  QuadValue y = rmax.is_zero() ? QuadValue(1) : QuadValue(2) * rational_top(rmax);
  ComplexPoint z{q.center, y};
  while (!point_in_domain(z, q, true)) z.im += QuadValue(Rational(1, 7));
  return z;
}

MembershipResult membership_reduce(const FordDomain& q, const MoebiusElement& target, std::size_t cap) {
  if (q.ambient != 2) throw Error(ErrorKind::UnsupportedParameter, "membership_reduce needs a strip domain");
  MembershipResult res;
  const MoebiusElement& t = q.translations.at(0);
  const QuadValue& tau = t.b();
  const QuadValue left = q.center - q.halfwidth;

  ComplexPoint w = apply(target, domain_basepoint(q));
  MoebiusElement acc = MoebiusElement::identity();
  std::vector<Word> applied;
  while (res.steps < cap) {
    if (qv_cmp_real(qv_abs_real(w.re - q.center), q.halfwidth) > 0) {
      long k = floor_of((w.re - left) / tau).get_si();
      w.re -= QuadValue(Rational(k)) * tau;
      acc = mm_pow(t, -k) * acc;
      applied.push_back(repeat(q.translation_words[0], -k));
      ++res.steps;
      continue;
    }
    const ExcludedDisk* hit = nullptr;
    for (const auto& e : q.excluded) {
      if (qv_cmp_real((w - e.disk.center).abs2(), QuadValue(e.disk.radius_sq)) < 0) {
        hit = &e;
        break;
      }
    }
    if (!hit) {
      if ((acc * target).is_identity()) {
        res.status = MembershipResult::Status::Member;
        for (const auto& a : applied) res.word = concat(res.word, inverse_word(a));
      } else {
        res.status = MembershipResult::Status::NonMember;
      }
      return res;
    }
    w = apply(hit->pairing, w);
    acc = hit->pairing * acc;
    applied.push_back(hit->word);
    ++res.steps;
  }
  res.status = MembershipResult::Status::Undecided;
  return res;
}

QuadValue infinite_area_height(const FordDomain& q) {
  Rational rmax = max_radius_sq(q);
  if (rmax.is_zero()) return QuadValue(0);
  if (auto r = sqrt_rational(rmax)) return *r;
  return rational_top(rmax);
}

}  // namespace fordlab
