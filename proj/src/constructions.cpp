#include "fordlab/constructions.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <memory>
#include <set>

#include "fordlab/error.hpp"

namespace fordlab {

namespace {

MoebiusElement mat(std::string_view text) { return MoebiusElement::parse(text); }

MoebiusElement mat(QuadValue a, QuadValue b, QuadValue c, QuadValue d) {
  return MoebiusElement(std::move(a), std::move(b), std::move(c), std::move(d));
}

long parse_long(std::string_view s, std::string_view what) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw Error(ErrorKind::UnsupportedParameter, "bad " + std::string(what) + " `" + std::string(s) + "`");
  return v;
}

long mod(long a, long n) { return ((a % n) + n) % n; }

long inverse_mod(long a, long n) {
  for (long b = 1; b < n; ++b)
    if (mod(a * b, n) == 1) return b;
  return 0;
}

Subgroup two_gen(std::string name, MoebiusElement other, MoebiusElement translation, bool translation_first = false) {
  Subgroup s;
  s.name = std::move(name);
  if (translation_first) {
    s.generators = {std::move(translation), std::move(other)};
    s.translation_index = 0;
  } else {
    s.generators = {std::move(other), std::move(translation)};
    s.translation_index = 1;
  }
  return s;
}

const MoebiusElement& other_generator(const Subgroup& s) { return s.generators[s.translation_index == 0 ? 1 : 0]; }

// Center of the disk pair (a - d) / 2c and half of its real extent.
std::pair<QuadValue, QuadValue> pair_extent(const MoebiusElement& g) {
  QuadValue center = (g.a() - g.d()) / (g.c() * QuadValue(2));
  QuadValue abs_c = qv_abs_real(g.c());
  QuadValue half = (qv_abs_real(g.trace()) / abs_c + QuadValue(2) / abs_c) / QuadValue(2);
  return {center, half};
}

Rational inner_lower(const QuadValue& v) { return v.is_rational() ? v.rational_part() : enclose(v, 20).second; }
Rational inner_upper(const QuadValue& v) { return v.is_rational() ? v.rational_part() : enclose(v, 20).first; }

// Free gap (hi of one disk pair, lo of the next translate), shifted by
// `shift` periods; the strip is recentered on it.
void place_in_gap(Subgroup& s, const Rational& shift) {
  const MoebiusElement& t = s.generators[s.translation_index];
  QuadValue m = qv_abs_real(t.b());
  auto [c0, half] = pair_extent(other_generator(s));
  QuadValue lo = c0 + half + m * QuadValue(shift);
  QuadValue hi = c0 + m - half + m * QuadValue(shift);
  s.strip_center = c0 + m / QuadValue(2) + m * QuadValue(shift);
  s.interval = std::make_pair(inner_lower(lo), inner_upper(hi));
}

// Places subgroup gaps left to right, each starting at or after the
// previous interval's right end.
void place_intervals(std::vector<Subgroup>& subs) {
  std::optional<Rational> right;
  for (auto& s : subs) {
    place_in_gap(s, 0);
    if (right) {
      const MoebiusElement& t = s.generators[s.translation_index];
      Rational m = qv_abs_real(t.b()).rational_part();
      Rational lo = s.interval->first;
      mpz_class k = ((*right - lo) / m).ceil();
      if (k < 0) k = 0;
      place_in_gap(s, Rational(k));
    }
    right = s.interval->second;
  }
}

void conjugate_all(Construction& c, const BuildOptions& opts, long level) {
  auto ambient = ambient_predicate(c.target);
  place_intervals(c.subgroups);
  c.conjugators.assign(c.subgroups.size(), std::nullopt);
  for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
    const Subgroup& s = c.subgroups[i];
    FordDomain q = subgroup_domain(s);
    ConjugatorSearch search;
    search.level = level;
    search.max_height = opts.max_height;
    search.max_power = opts.max_power;
    search.accept = [&](const MoebiusElement& h) {
      if (!ambient(h)) return false;
      return membership_reduce(q, h).status == MembershipResult::Status::NonMember;
    };
    try {
      c.conjugators[i] = find_power_conjugator(search, s.interval->first, s.interval->second).element;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SearchExhausted) throw;
      c.search_failure = "SearchExhausted for " + s.name + " in (" + s.interval->first.str() + ", " +
                         s.interval->second.str() + "): " + e.what();
      c.conjugators.assign(c.subgroups.size(), std::nullopt);
      return;
    }
  }
}

void assemble(Construction& c) {
  c.combined_gens.clear();
  if (c.conjugators.size() != c.subgroups.size()) c.conjugators.resize(c.subgroups.size());
  for (std::size_t i = 0; i < c.subgroups.size(); ++i)
    for (const auto& g : c.subgroups[i].generators)
      c.combined_gens.push_back(c.conjugators[i] ? conjugate_by(*c.conjugators[i], g) : g);
}

std::vector<Subgroup> gamma0_subgroups(long n) {
  std::vector<Subgroup> out;
  if (n == 2) {
    out.push_back(two_gen("G1", mat("[[1,0],[2,1]]"), mat("[[1,3],[0,1]]"), true));
    out.push_back(two_gen("G2", mat("[[1,-1],[2,-1]]"), mat("[[1,3],[0,1]]"), true));
  } else if (n == 3) {
    out.push_back(two_gen("G1", mat("[[1,0],[3,1]]"), mat("[[1,2],[0,1]]"), true));
    out.push_back(two_gen("G2", mat("[[2,-1],[3,-1]]"), mat("[[1,2],[0,1]]"), true));
  } else if (n == 4) {
    out.push_back(two_gen("G1", mat("[[1,0],[4,1]]"), mat("[[1,2],[0,1]]"), true));
  } else {
    int k = 1;
    for (const auto& p : gamma0_pieces(n))
      out.push_back(two_gen("G" + std::to_string(k++), p.g, MoebiusElement::translation(p.translation), true));
  }
  return out;
}

QuadValue bianchi_omega(long d) {
  if (mod(d, 4) == 3) return QuadValue(Rational(1, 2), Rational(1, 2), -d);
  return QuadValue::sqrt_of(-d);
}

struct Involutions {
  MoebiusElement one, w, one_w, two_w;
};

Involutions bianchi_involutions(long d) {
  QuadValue w = bianchi_omega(d);
  QuadValue w2 = w * w;
  QuadValue D(d);
  bool three = mod(d, 4) == 3;
  MoebiusElement one =
      three ? mat(QuadValue(-2) + QuadValue(3) * w + QuadValue(4) * D * w,
                  QuadValue(1) + QuadValue(4) * w - QuadValue(7) * w2 - QuadValue(4) * w2 * D, QuadValue(4) * D - 1,
                  QuadValue(2) - QuadValue(3) * w - QuadValue(4) * D * w)
            : mat(QuadValue(38) + QuadValue(85) * w, QuadValue(85) * D - 17 - QuadValue(76) * w, QuadValue(85),
                  QuadValue(-38) - QuadValue(85) * w);
  if (d == 1 || d == 2)
    return {one, mat("[[43,-50],[37,-43]]"), mat("[[68,-125],[37,-68]]"), mat("[[91,-101],[82,-91]]")};
  if (d == 3)
    return {one, mat("[[43,-50],[37,-43]]"),
            mat(QuadValue(68) - QuadValue(37) * w, QuadValue(99) * w - 88, QuadValue(37), QuadValue(37) * w - 68),
            mat("[[68,-125],[37,-68]]")};
  if (three)
    return {one, mat("[[7,-10],[5,-7]]"),
            mat(QuadValue(7) - QuadValue(5) * w, QuadValue(-10) + QuadValue(14) * w - QuadValue(5) * w2, QuadValue(5),
                QuadValue(5) * w - 7),
            mat("[[43,-50],[37,-43]]")};
  return {one, mat("[[7,-10],[5,-7]]"), mat("[[68,-125],[37,-68]]"), mat("[[43,-50],[37,-43]]")};
}

}  // namespace

Target Target::parse(std::string_view text) {
  Target t;
  if (text == "modular") return t;
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::UnsupportedParameter, "unknown target `" + std::string(text) + "`");
  std::string_view kind = text.substr(0, colon);
  long v = parse_long(text.substr(colon + 1), "parameter");
  t.param = v;
  if (kind == "gamma0") {
    if (v < 1) throw Error(ErrorKind::UnsupportedParameter, "gamma0 level must be at least 1");
    t.kind = Kind::Gamma0;
  } else if (kind == "principal") {
    if (v < 2) throw Error(ErrorKind::UnsupportedParameter, "principal level must be at least 2");
    t.kind = Kind::Principal;
  } else if (kind == "normalizer") {
    if (!is_prime(v)) throw Error(ErrorKind::UnsupportedParameter, std::to_string(v) + " is not prime");
    t.kind = Kind::Normalizer;
  } else if (kind == "bianchi") {
    if (!is_square_free(v)) throw Error(ErrorKind::UnsupportedParameter, std::to_string(v) + " is not square-free");
    t.kind = Kind::Bianchi;
  } else {
    throw Error(ErrorKind::UnsupportedParameter, "unknown target `" + std::string(text) + "`");
  }
  return t;
}

std::string Target::str() const {
  switch (kind) {
    case Kind::Modular: return "modular";
    case Kind::Gamma0: return "gamma0:" + std::to_string(param);
    case Kind::Principal: return "principal:" + std::to_string(param);
    case Kind::Normalizer: return "normalizer:" + std::to_string(param);
    case Kind::Bianchi: return "bianchi:" + std::to_string(param);
  }
  return "?";
}

std::size_t Construction::combined_index(std::size_t subgroup, std::size_t gen) const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < subgroup; ++i) k += subgroups[i].generators.size();
  return k + gen;
}

bool in_normalizer(const MoebiusElement& x, long p) {
  if (x.is_integral()) return in_gamma0(x, p);
  QuadValue r = QuadValue::sqrt_of(p);
  auto integer = [](const QuadValue& v) { return v.is_integer(); };
  // a = a' sqrt p, b = b' / sqrt p, c = c' sqrt p, d = d' sqrt p
  return integer(x.a() / r) && integer(x.b() * r) && integer(x.c() / r) && integer(x.d() / r);
}

std::function<bool(const MoebiusElement&)> ambient_predicate(const Target& target) {
  long n = target.param;
  switch (target.kind) {
    case Target::Kind::Modular: return [](const MoebiusElement& x) { return x.is_integral(); };
    case Target::Kind::Gamma0: return [n](const MoebiusElement& x) { return in_gamma0(x, n); };
    case Target::Kind::Principal: return [n](const MoebiusElement& x) { return in_principal(x, n); };
    case Target::Kind::Normalizer: return [n](const MoebiusElement& x) { return in_normalizer(x, n); };
    case Target::Kind::Bianchi: return [n](const MoebiusElement& x) { return in_bianchi(x, n); };
  }
  return {};
}

std::vector<Gamma0Piece> gamma0_pieces(long n) {
  if (n < 5) throw Error(ErrorKind::UnsupportedParameter, "general Gamma0 family needs n >= 5");
  std::vector<Gamma0Piece> out;
  std::set<long> done;
  for (long a = 1; a < n; ++a) {
    long ainv = inverse_mod(a, n);
    if (ainv == 0) continue;
    long r = mod(a + ainv, n);
    long cls = std::min(r, n - r);
    if (!done.insert(cls).second) continue;
    // trace representative of least absolute value, ties negative
    long t = r <= n - r ? r : r - n;
    if (2 * r == n) t = -r;
    if (2 * std::labs(t) == n) {
      for (long shift : {0L, n}) {
        long d = t + shift - a;
        out.push_back({MoebiusElement(a, (a * d - 1) / n, n, d), 2, true});
      }
      continue;
    }
    long d = t - a;
    out.push_back({MoebiusElement(a, (a * d - 1) / n, n, d), 1, false});
  }
  return out;
}

PowerConjugator find_power_conjugator(const ConjugatorSearch& search, const Rational& x0, const Rational& y0) {
  if (!(x0 < y0)) throw Error(ErrorKind::UnsupportedParameter, "empty interval");
  // Heights are measured on the interval moved next to 0; results are
  // conjugated back by the integer translation.
  const Rational shift(x0.floor());
  const Rational x = x0 - shift, y = y0 - shift;
  const MoebiusElement back = MoebiusElement::translation(QuadValue(shift));
  const long level = std::max(1L, search.level);
  const Rational width = y - x;
  auto positive_at = [](long a, long b, long c, long d, const Rational& z) {
    // c z^2 + (d - a) z - b > 0, scaled by den^2
    mpz_class p = z.num(), q = z.den();
    mpz_class v = c * p * p + mpz_class(d - a) * p * q - mpz_class(b) * q * q;
    return sgn(v) > 0;
  };
  for (long c = level; c <= search.max_height; c += level) {
    mpz_class lo = (Rational(2 * c) * x).floor() + 1;
    mpz_class hi = (Rational(2 * c) * y).ceil() - 1;
    if (lo > hi) continue;
    long tmax = (Rational(c) * width).floor().get_si() + 2;
    for (mpz_class dz = lo; dz <= hi; ++dz) {
      long diff = dz.get_si();
      for (long at = 3; at <= tmax; ++at) {
        if ((at - diff) % 2 != 0) continue;
        for (long t : {at, -at}) {
          long a = (t + diff) / 2, d = (t - diff) / 2;
          __int128 num = static_cast<__int128>(a) * d - 1;
          if (num % c != 0) continue;
          __int128 b128 = num / c;
          if (std::labs(a) > search.max_height || std::labs(d) > search.max_height ||
              b128 > search.max_height || b128 < -search.max_height)
            continue;
          long b = static_cast<long>(b128);
          if (!positive_at(a, b, c, d, x) || !positive_at(a, b, c, d, y)) continue;
          MoebiusElement g(a, b, c, d);
          for (long k = 1; k <= search.max_power; ++k) {
            MoebiusElement h = mm_pow(g, k);
            if (h.c().is_zero()) break;
            Rational r = qv_abs_real(h.c()).rational_part().inverse();
            Rational c1 = (-h.d() / h.c()).rational_part(), c2 = (h.a() / h.c()).rational_part();
            Rational left = std::min(c1, c2) - r, right = std::max(c1, c2) + r;
            if (left > x && right < y) {
              MoebiusElement gb = conjugate_by(back, g), hb = conjugate_by(back, h);
              if (search.accept && !search.accept(hb)) break;
              return {gb, k, hb};
            }
          }
        }
      }
    }
  }
  throw Error(ErrorKind::SearchExhausted, "no hyperbolic power with disks in (" + x0.str() + ", " + y0.str() +
                                              ") up to height " + std::to_string(search.max_height));
}

FordDomain subgroup_domain(const Subgroup& s) {
  TwoGenLetters letters;
  letters.translation = s.translation_index + 1;
  letters.other = s.translation_index == 0 ? 2 : 1;
  const MoebiusElement& t = s.generators[s.translation_index];
  FordDomain q = build_ford_two_gen(t.b(), other_generator(s), letters);
  if (s.strip_center) q = recenter(q, *s.strip_center);
  return q;
}

Construction build(const Target& target, const BuildOptions& opts) {
  Construction c;
  c.target = target;
  switch (target.kind) {
    case Target::Kind::Modular:
    case Target::Kind::Gamma0:
      if (target.kind == Target::Kind::Modular || target.param == 1) {
        c.model = target.kind == Target::Kind::Modular ? TraceSetModel::modular() : TraceSetModel::gamma0(1);
        c.subgroups.push_back(two_gen("G0", mat("[[0,-1],[1,0]]"), mat("[[1,5],[0,1]]")));
        c.subgroups.push_back(two_gen("G1", mat("[[1,-1],[1,0]]"), mat("[[1,5],[0,1]]")));
        c.subgroups.push_back(two_gen("G2", mat("[[2,-1],[1,0]]"), mat("[[1,5],[0,1]]")));
        c.conjugators = {mat("[[142,-545],[37,-142]]"), mat("[[17,-58],[5,-17]]"), mat("[[117,-370],[37,-117]]")};
        // strip from -1 to 4, conjugator intervals padded inside (3, 4)
        std::vector<std::pair<Rational, Rational>> extent;
        for (const auto& a : c.conjugators) {
          Rational r = qv_abs_real(a->c()).rational_part().inverse();
          Rational c1 = (-a->d() / a->c()).rational_part(), c2 = (a->a() / a->c()).rational_part();
          extent.emplace_back(std::min(c1, c2) - r, std::max(c1, c2) + r);
        }
        for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
          Rational pad = qv_abs_real(c.conjugators[i]->c()).rational_part().inverse();
          Rational left = 3, right = 4;
          for (std::size_t j = 0; j < extent.size(); ++j) {
            if (j == i) continue;
            if (extent[j].second <= extent[i].first) left = std::max(left, extent[j].second);
            if (extent[j].first >= extent[i].second) right = std::min(right, extent[j].first);
          }
          pad = std::min({pad, (extent[i].first - left) / 2, (right - extent[i].second) / 2});
          c.subgroups[i].strip_center = QuadValue(Rational(3, 2));
          c.subgroups[i].interval = std::make_pair(extent[i].first - pad, extent[i].second + pad);
        }
        break;
      }
      c.model = TraceSetModel::gamma0(target.param);
      c.subgroups = gamma0_subgroups(target.param);
      if (target.param >= 5)
        for (const auto& p : gamma0_pieces(target.param))
          if (p.fallback) c.notes.push_back("trace " + p.g.trace().str() + " uses the doubled period fallback");
      if (c.subgroups.size() > 1) conjugate_all(c, opts, target.param);
      break;
    case Target::Kind::Principal: {
      long n = target.param;
      c.model = TraceSetModel::principal(n);
      if (n == 2 && opts.naive_principal)
        c.subgroups.push_back(two_gen("G1", mat("[[1,0],[2,1]]"), mat("[[1,2],[0,1]]"), true));
      else if (n == 2)
        c.subgroups.push_back(two_gen("G1", mat("[[1,0],[2,1]]"), mat("[[1,4],[0,1]]"), true));
      else
        c.subgroups.push_back(
            two_gen("G1", MoebiusElement(1, 0, n, 1), MoebiusElement::translation(QuadValue(n)), true));
      break;
    }
    case Target::Kind::Normalizer: {
      long p = target.param;
      c.model = TraceSetModel::normalizer(p);
      c.subgroups = gamma0_subgroups(p);
      QuadValue r = QuadValue::sqrt_of(p);
      QuadValue rinv = r.inverse();
      std::size_t k = c.subgroups.size() + 1;
      auto add = [&](MoebiusElement g, long m) {
        c.subgroups.push_back(
            two_gen("G" + std::to_string(k++), std::move(g), MoebiusElement::translation(QuadValue(m)), true));
      };
      if (p >= 5) {
        add(mat(0, -rinv, r, 0), 1);
      } else {
        add(mat(0, -rinv, r, 0), 3);
        add(mat(r, -rinv, r, 0), 3);
      }
      conjugate_all(c, opts, p);
      break;
    }
    case Target::Kind::Bianchi: {
      long d = target.param;
      c.model = TraceSetModel::bianchi(d);
      QuadValue w = bianchi_omega(d);
      ComplexPoint wp = ComplexPoint::of_field(w);
      c.prism = Prism{ComplexPoint::of_real(QuadValue(Rational(-3, 4))) - wp * ComplexPoint::of_real(QuadValue(Rational(3, 2))),
                      ComplexPoint::of_real(QuadValue(3)), wp * ComplexPoint::of_real(QuadValue(3))};
      c.strict_power_scan = d <= 3;
      Involutions inv = bianchi_involutions(d);
      const std::vector<std::pair<std::string, QuadValue>> xs = {
          {"P_0", QuadValue(0)}, {"P_1", QuadValue(1)}, {"P_w", w}, {"P_1+w", QuadValue(1) + w}, {"P_2+w", QuadValue(2) + w}};
      const MoebiusElement* deltas[] = {nullptr, &inv.one, &inv.w, &inv.one_w, &inv.two_w};
      for (std::size_t i = 0; i < xs.size(); ++i) {
        Subgroup s;
        s.name = xs[i].first;
        s.x = xs[i].second;
        s.generators = {mat(xs[i].second, -1, 1, 0), MoebiusElement::translation(3),
                        MoebiusElement::translation(QuadValue(3) * w)};
        s.translation_index = 1;
        c.subgroups.push_back(std::move(s));
        c.conjugators.push_back(deltas[i] ? std::optional<MoebiusElement>(*deltas[i]) : std::nullopt);
      }
      if (d <= 3) c.notes.push_back("special involution set for d = " + std::to_string(d));
      break;
    }
  }
  assemble(c);
  return c;
}

int bianchi_coset_cover(long d) {
  QuadValue w = bianchi_omega(d);
  const QuadValue xs[] = {QuadValue(0), QuadValue(1), w, QuadValue(1) + w, QuadValue(2) + w};
  int hit = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      QuadValue r = QuadValue(a) + QuadValue(b) * w;
      bool found = false;
      for (const auto& x : xs)
        for (int s : {1, -1})
          if (in_ring_of_integers((QuadValue(s) * x - r) / QuadValue(3), d)) found = true;
      hit += found;
    }
  return hit;
}

}  // namespace fordlab
