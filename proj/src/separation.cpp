#include <algorithm>

#include "fordlab/geometry.hpp"
#include "geometry_detail.hpp"

namespace fordlab {

using namespace detail;

namespace {

Check named(std::string name) {
  Check c;
  c.name = std::move(name);
  return c;
}

std::string pair_label(const std::string& a, const std::string& b) { return a + "," + b; }

}  // namespace

SeparationReport verify_separation(const std::vector<SeparationItem>& items,
                                   const std::function<bool(const MoebiusElement&)>& in_ambient,
                                   std::size_t membership_cap) {
  SeparationReport rep;

  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      const auto &u = items[i], &v = items[j];
      Check c = named("separation/intervals_disjoint/" + pair_label(u.name, v.name));
      Rational gap = std::max(v.x - u.y, u.x - v.y);
      c.margin = QuadValue(gap);
      c.margin_kind = MarginKind::Linear;
      if (gap.sign() < 0) c.status = CheckStatus::Fail;
      rep.checks.push_back(c);
    }
  }

  // disks of each conjugator and its inverse, empty when it fixes infinity
  std::vector<std::vector<IsometricDisk>> disks(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const std::string tag = "/" + it.name;
    if (it.conjugator.fixes_infinity()) {
      Check c = named("separation/conjugator_moves_infinity" + tag);
      c.status = CheckStatus::Fail;
      c.witnesses.push_back("FixesInfinity: " + it.conjugator.str());
      rep.checks.push_back(c);
      continue;
    }
    disks[i] = {isometric_disk(it.conjugator)};
    IsometricDisk inv = isometric_disk(mm_inv(it.conjugator));
    if (!inv.same_circle(disks[i][0])) disks[i].push_back(inv);

    Check inside = named("separation/conjugator_disks_in_interval" + tag);
    MinTracker mt;
    for (const auto& dk : disks[i]) {
      RadicalExpr lo = diff(shadow_end(dk, -1), RadicalExpr(it.x));
      RadicalExpr hi = diff(RadicalExpr(it.y), shadow_end(dk, 1));
      if (radical_sign(lo) <= 0 || radical_sign(hi) <= 0) inside.status = CheckStatus::Fail;
      mt.offer(lo, MarginKind::Linear);
      mt.offer(hi, MarginKind::Linear);
    }
    mt.fill(inside);
    inside.witnesses.push_back("interval (" + it.x.str() + "," + it.y.str() + ")");
    rep.checks.push_back(inside);

    Check within = named("separation/interval_in_domain" + tag);
    const FordDomain& q = it.domain;
    MinTracker mw;
    RadicalExpr l = diff(RadicalExpr(it.x), RadicalExpr::from(q.center - q.halfwidth));
    RadicalExpr r = diff(RadicalExpr::from(q.center + q.halfwidth), RadicalExpr(it.y));
    if (radical_sign(l) < 0 || radical_sign(r) < 0) within.status = CheckStatus::Fail;
    mw.offer(l, MarginKind::Linear, "strip edge");
    mw.offer(r, MarginKind::Linear, "strip edge");
    for (const auto& e : q.excluded) {
      RadicalExpr below = diff(RadicalExpr(it.x), shadow_end(e.disk, 1));
      RadicalExpr above = diff(shadow_end(e.disk, -1), RadicalExpr(it.y));
      RadicalExpr& clear = radical_sign(diff(below, above)) >= 0 ? below : above;
      if (radical_sign(clear) < 0) {
        within.status = CheckStatus::Fail;
        within.witnesses.push_back("shadow of " + e.pairing.str() + " meets the interval");
      }
      mw.offer(clear, MarginKind::Linear, "nearest shadow " + e.pairing.str());
    }
    mw.fill(within);
    rep.checks.push_back(within);

    Check dom = named("separation/conjugator_disks_in_domain" + tag);
    for (const auto& dk : disks[i])
      if (!disk_in_domain(dk, q)) dom.status = CheckStatus::Fail;
    rep.checks.push_back(dom);

    Check mem = named("separation/not_in_subgroup" + tag);
    MembershipResult mr = membership_reduce(q, it.conjugator, membership_cap);
    mem.witnesses.push_back(std::string(to_string(mr.status)) + " after " + std::to_string(mr.steps) + " steps");
    if (mr.status == MembershipResult::Status::Member) {
      mem.status = CheckStatus::Fail;
      mem.witnesses.push_back("word " + word_str(mr.word));
    } else if (mr.status == MembershipResult::Status::Undecided) {
      mem.status = CheckStatus::Undecided;
    }
    rep.checks.push_back(mem);

    Check amb = named("separation/in_ambient" + tag);
    if (!in_ambient(it.conjugator)) amb.status = CheckStatus::Fail;
    amb.witnesses.push_back(it.conjugator.str());
    rep.checks.push_back(amb);
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = i + 1; j < items.size(); ++j) {
      if (disks[i].empty() || disks[j].empty()) continue;
      Check c = named("separation/conjugator_disks_disjoint/" + pair_label(items[i].name, items[j].name));
      MinTracker mt;
      for (const auto& u : disks[i]) {
        for (const auto& v : disks[j]) {
          if (disks_disjoint(u, v) != Separation::Disjoint) c.status = CheckStatus::Fail;
          auto [e, k] = gap_expr(u, v);
          mt.offer(e, k);
        }
      }
      mt.fill(c);
      rep.checks.push_back(c);
    }
  }
  return rep;
}

PowerScan power_sphere_scan(const MoebiusElement& g, int horizon) {
  PowerScan scan;
  scan.last = horizon;
  std::vector<Rational> c2(static_cast<std::size_t>(std::max(horizon, 0)) + 1);
  MoebiusElement p = MoebiusElement::identity();
  auto keep = [&](long n, const IsometricDisk& dk) {
    for (const auto& [_, seen] : scan.disks)
      if (seen.same_circle(dk)) return;
    scan.disks.emplace_back(n, dk);
  };
  for (long n = 1; n <= horizon; ++n) {
    p = p * g;
    if (p.fixes_infinity()) {
      scan.skipped.push_back(n);
      continue;
    }
    c2[static_cast<std::size_t>(n)] = entry_abs2(p.c());
    keep(n, isometric_disk(p));
    keep(-n, isometric_disk(mm_inv(p)));
  }
  long from = horizon - horizon / 2 + 1;
  scan.growth = horizon >= 2;
  for (long n = std::max(2L, from); n <= horizon && scan.growth; ++n) {
    auto cur = c2[static_cast<std::size_t>(n)], prev = c2[static_cast<std::size_t>(n - 1)];
    if (cur.is_zero() || prev.is_zero() || !(cur > prev)) scan.growth = false;
  }
  return scan;
}

namespace {

IsometricDisk shifted(IsometricDisk dk, const ComplexPoint& v) {
  dk.center = dk.center + v;
  return dk;
}

// Lattice shifts i*t1 + j*t2 for |i|, |j| <= 2.
std::vector<ComplexPoint> lattice_shifts(const Prism& prism) {
  std::vector<ComplexPoint> out;
  for (long i = -2; i <= 2; ++i)
    for (long j = -2; j <= 2; ++j)
      out.push_back({QuadValue(i) * prism.t1.re + QuadValue(j) * prism.t2.re,
                     QuadValue(i) * prism.t1.im + QuadValue(j) * prism.t2.im});
  return out;
}

void clear_of(Check& c, MinTracker& mt, const IsometricDisk& u, const IsometricDisk& v, CheckStatus on_fail,
              const std::string& label) {
  if (disks_disjoint(u, v) != Separation::Disjoint) {
    if (c.status != CheckStatus::Fail) c.status = on_fail;
    if (c.witnesses.size() < 8) c.witnesses.push_back("meets " + label);
  }
  auto [e, k] = gap_expr(u, v);
  mt.offer(e, k, "closest " + label);
}

}  // namespace

SeparationReport bianchi_separation_check(long d, const std::vector<BianchiPiece>& pieces, const Prism& prism,
                                          const BianchiScanPolicy& policy) {
  SeparationReport rep;
  const BianchiPiece* p0 = nullptr;
  for (const auto& p : pieces)
    if (p.x.is_zero()) p0 = &p;
  const auto shifts = lattice_shifts(prism);
  const CheckStatus scan_fail = policy.strict ? CheckStatus::Fail : CheckStatus::Undecided;

  std::vector<std::pair<std::string, IsometricDisk>> spheres;
  for (const auto& p : pieces) {
    if (!p.involution) continue;
    const MoebiusElement& delta = *p.involution;
    const std::string tag = "/" + p.name;

    Check inv = named("bianchi/involution" + tag);
    bool unimodular = delta.determinant() == QuadValue(1);
    bool trace_zero = canonical_trace(delta).value.is_zero();
    if (!unimodular || !trace_zero) inv.status = CheckStatus::Fail;
    inv.witnesses.push_back("det " + delta.determinant().str() + ", trace " + delta.trace().str());
    if (!in_bianchi(delta, d)) {
      inv.status = CheckStatus::Fail;
      inv.witnesses.push_back("entries outside the ring of integers");
    }
    rep.checks.push_back(inv);
    if (delta.fixes_infinity()) {
      Check c = named("bianchi/involution_moves_infinity" + tag);
      c.status = CheckStatus::Fail;
      rep.checks.push_back(c);
      continue;
    }
    IsometricDisk sphere = isometric_disk(delta);
    spheres.emplace_back(p.name, sphere);

    Check in = named("bianchi/inside_prism" + tag);
    if (!point_in_prism(sphere.center, prism)) {
      in.status = CheckStatus::Fail;
      in.witnesses.push_back("center outside the prism");
    } else {
      std::optional<QuadValue> best;
      for (const auto& e : {std::pair{prism.anchor, prism.t1}, std::pair{prism.anchor + prism.t2, prism.t1},
                            std::pair{prism.anchor, prism.t2}, std::pair{prism.anchor + prism.t1, prism.t2}}) {
        QuadValue cr = cross(sphere.center - e.first, e.second);
        QuadValue gap = cr * cr / e.second.abs2() - QuadValue(sphere.radius_sq);
        if (!best || qv_cmp_real(gap, *best) < 0) best = gap;
      }
      in.margin = best;
      in.margin_kind = MarginKind::Squared;
      if (qv_sign_real(*best) <= 0) in.status = CheckStatus::Fail;
    }
    rep.checks.push_back(in);

    Check own = named("bianchi/clear_of_own_spheres" + tag);
    MinTracker mo;
    for (const auto& e : p.domain.excluded) clear_of(own, mo, sphere, e.disk, CheckStatus::Fail, e.pairing.str());
    mo.fill(own);
    rep.checks.push_back(own);

    if (p0) {
      Check base = named("bianchi/clear_of_base_spheres" + tag);
      MinTracker mb;
      for (const auto& e : p0->domain.excluded) clear_of(base, mb, sphere, e.disk, CheckStatus::Fail, e.pairing.str());
      mb.fill(base);
      rep.checks.push_back(base);
    }

    bool needs_scan = !p.x.is_real() && qv_abs2(p.x) <= Rational(4);
    if (!needs_scan) continue;
    PowerScan scan = power_sphere_scan(p.generator, policy.horizon);
    Check sc = named("bianchi/power_scan" + tag);
    MinTracker ms;
    for (const auto& [n, dk] : scan.disks)
      for (const auto& v : shifts)
        clear_of(sc, ms, sphere, shifted(dk, v), scan_fail, "power " + std::to_string(n) + " shifted by " + v.str());
    ms.fill(sc);
    sc.witnesses.push_back(std::to_string(scan.disks.size()) + " distinct disks up to power " +
                           std::to_string(scan.last) + ", growth " + (scan.growth ? "true" : "false"));
    rep.checks.push_back(sc);

    Check tail = named("bianchi/power_tail" + tag);
    if (!scan.growth) {
      tail.status = CheckStatus::Undecided;
      tail.witnesses.push_back("|c| not strictly growing over the last half of the scan");
    } else {
      MoebiusElement top = mm_pow(p.generator, scan.last);
      MinTracker mt;
      for (const MoebiusElement& h : {top, mm_inv(top)}) {
        IsometricDisk hull = isometric_disk(h);
        hull.radius_sq *= Rational(9);
        for (const auto& v : shifts)
          clear_of(tail, mt, sphere, shifted(hull, v), scan_fail, "tail hull of " + std::to_string(scan.last));
      }
      mt.fill(tail);
      tail.witnesses.push_back("assumes |c| keeps growing past power " + std::to_string(scan.last) +
                               ", so later disks stay within three radii of the last scanned disks");
    }
    rep.checks.push_back(tail);
  }

  for (std::size_t i = 0; i < spheres.size(); ++i) {
    for (std::size_t j = i + 1; j < spheres.size(); ++j) {
      Check c = named("bianchi/involutions_disjoint/" + pair_label(spheres[i].first, spheres[j].first));
      MinTracker mt;
      clear_of(c, mt, spheres[i].second, spheres[j].second, CheckStatus::Fail, spheres[j].first);
      mt.fill(c);
      rep.checks.push_back(c);
    }
  }
  return rep;
}

}  // namespace fordlab
