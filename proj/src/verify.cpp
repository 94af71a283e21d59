#include <algorithm>
#include <chrono>
#include <memory>
#include <set>

#include "fordlab/constructions.hpp"
#include "fordlab/error.hpp"

namespace fordlab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "Verified";
    case Verdict::Failed: return "Failed";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

std::vector<Check> Certificate::all_checks() const {
  std::vector<Check> out = lemma_results;
  out.insert(out.end(), separation.checks.begin(), separation.checks.end());
  out.insert(out.end(), infinite_area.begin(), infinite_area.end());
  out.insert(out.end(), containment.begin(), containment.end());
  out.insert(out.end(), coverage_checks.begin(), coverage_checks.end());
  return out;
}

namespace {

Check named(std::string name, CheckStatus status = CheckStatus::Pass) {
  Check c;
  c.name = std::move(name);
  c.status = status;
  return c;
}

constexpr std::size_t kMaxWitnesses = 10;

void witness(Check& c, std::string w) {
  if (c.witnesses.size() < kMaxWitnesses) c.witnesses.push_back(std::move(w));
}

bool bianchi(const Construction& c) { return c.target.kind == Target::Kind::Bianchi; }

FordDomain prism_domain(const Construction& c, const Subgroup& s) {
  const auto& g = s.generators;
  return build_ford_prism(g[0], *c.prism, g[1], g[2]);
}

// Largest length L with k (k-1)^(L-1) <= budget words over k letters.
int joint_length(std::size_t gens, int max_len, std::size_t budget) {
  std::size_t k = 2 * gens;
  if (k < 2) return 0;
  int len = 1;
  std::size_t count = k;
  while (len < max_len && count * (k - 1) <= budget) {
    count *= k - 1;
    ++len;
  }
  return len;
}

struct CoverageRun {
  std::map<CanonicalTrace, std::pair<std::size_t, Word>> found;  // length, combined word
  std::vector<std::pair<CanonicalTrace, Word>> violations;
  std::size_t violation_count = 0;
  EnumerationStats stats;
  std::vector<std::string> problems;
};

CoverageRun run_coverage(const Construction& c, const std::vector<CanonicalTrace>& expected, const Rational& bound,
                         int max_len, const VerifyOptions& opts) {
  CoverageRun run;
  const TraceSetModel model = c.model;
  EnumerationOptions eo;
  eo.max_word_len = max_len;
  eo.trace_bound = bound;
  eo.complex_bound = model.complex();
  eo.state_cap = opts.state_cap;
  eo.threads = opts.threads;
  eo.containment = [model](const CanonicalTrace& t) { return model_contains(model, t); };

  std::vector<std::unique_ptr<TraceEnumerator>> enums;
  std::vector<bool> alive;
  for (const auto& s : c.subgroups) {
    enums.push_back(std::make_unique<TraceEnumerator>(s.generators, eo));
    alive.push_back(true);
  }
  std::set<CanonicalTrace> pending(expected.begin(), expected.end());
  auto harvest = [&](std::size_t i) {
    for (const auto& [t, w] : enums[i]->result().witnesses) {
      auto it = run.found.find(t);
      if (it != run.found.end() && it->second.first <= w.size()) continue;
      Word mapped;
      for (int l : w) {
        int idx = static_cast<int>(c.combined_index(i, static_cast<std::size_t>(std::abs(l) - 1))) + 1;
        mapped.push_back(l > 0 ? idx : -idx);
      }
      run.found[t] = {w.size(), std::move(mapped)};
      pending.erase(t);
    }
  };
  for (std::size_t i = 0; i < enums.size(); ++i) harvest(i);
  // Round robin by level so the first witness of a trace is a shortest one.
  for (int level = 1; level <= max_len && !pending.empty(); ++level) {
    bool any = false;
    for (std::size_t i = 0; i < enums.size(); ++i) {
      if (!alive[i]) continue;
      try {
        alive[i] = enums[i]->step();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StateExplosion) throw;
        alive[i] = false;
        run.problems.push_back(c.subgroups[i].name + ": " + e.what());
      }
      any = any || alive[i];
      harvest(i);
    }
    if (!any) break;
  }
  for (std::size_t i = 0; i < enums.size(); ++i) {
    const auto& r = enums[i]->result();
    run.stats.states += r.stats.states;
    run.stats.max_len_reached = std::max(run.stats.max_len_reached, r.stats.max_len_reached);
    run.violation_count += r.violation_count;
    for (const auto& v : r.violations)
      if (run.violations.size() < kMaxWitnesses) run.violations.push_back(v);
  }
  run.stats.stopped_early = pending.empty();
  return run;
}

}  // namespace

Certificate verify_construction(const Construction& c, const Rational& bound, int max_word_len,
                                const VerifyOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.construction = c;
  cert.bound = bound;
  cert.max_word_len = max_word_len;
  auto ambient = ambient_predicate(c.target);

  // Per-subgroup domains.
  std::vector<std::optional<FordDomain>> domains(c.subgroups.size());
  for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
    const Subgroup& s = c.subgroups[i];
    const std::string pre = "lemma/" + s.name + "/";
    if (bianchi(c)) {
      Check dom = named(pre + "prism_domain");
      try {
        domains[i] = prism_domain(c, s);
        witness(dom, std::to_string(domains[i]->excluded.size()) + " excluded spheres");
      } catch (const Error& e) {
        dom.status = CheckStatus::Fail;
        witness(dom, std::string(to_string(e.kind())) + ": " + e.what());
      }
      cert.lemma_results.push_back(dom);
      Check self = named(pre + "self_domain");
      const QuadValue& x = *s.x;
      if (x.is_real() && x.imag_part().is_zero()) {
        witness(self, "real trace");
      } else if (qv_abs2(x) > Rational(4)) {
        witness(self, "|x|^2 = " + qv_abs2(x).str() + " > 4");
      } else {
        self.status = CheckStatus::Info;
        witness(self, "|x|^2 = " + qv_abs2(x).str() + " <= 4, power spheres scanned");
      }
      cert.lemma_results.push_back(self);
      continue;
    }
    Check dom = named(pre + "domain");
    try {
      domains[i] = subgroup_domain(s);
      for (auto ch : domains[i]->criteria) {
        ch.name = pre + ch.name;
        cert.lemma_results.push_back(std::move(ch));
      }
      witness(dom, "variant " + std::string(to_string(domains[i]->variant)));
    } catch (const Error& e) {
      dom.status = CheckStatus::Fail;
      witness(dom, std::string(to_string(e.kind())) + ": " + e.what());
      const MoebiusElement& t = s.generators[s.translation_index];
      for (auto ch : two_gen_criteria(t.b(), s.generators[s.translation_index == 0 ? 1 : 0])) {
        ch.name = pre + ch.name;
        cert.lemma_results.push_back(std::move(ch));
      }
    }
    cert.lemma_results.push_back(dom);
  }
  bool all_domains = std::all_of(domains.begin(), domains.end(), [](const auto& d) { return d.has_value(); });

  // Combination step.
  if (bianchi(c)) {
    if (all_domains) {
      std::vector<BianchiPiece> pieces;
      for (std::size_t i = 0; i < c.subgroups.size(); ++i)
        pieces.push_back({c.subgroups[i].name, *c.subgroups[i].x, c.subgroups[i].generators[0], *domains[i],
                          c.conjugators[i]});
      BianchiScanPolicy policy;
      policy.horizon = opts.horizon;
      policy.strict = c.strict_power_scan;
      cert.separation = bianchi_separation_check(c.target.param, pieces, *c.prism, policy);
    }
    Check cover = named("bianchi/coset_cover");
    int hit = bianchi_coset_cover(c.target.param);
    cover.margin = QuadValue(hit);
    witness(cover, std::to_string(hit) + "/9 residues mod 3");
    if (hit != 9) cover.status = CheckStatus::Fail;
    cert.separation.checks.push_back(cover);
  } else if (c.subgroups.size() == 1) {
    Check one = named("separation/not_required");
    witness(one, "single subgroup");
    cert.separation.checks.push_back(one);
  } else if (c.search_failure) {
    Check s = named("separation/conjugator_search", CheckStatus::Undecided);
    witness(s, *c.search_failure);
    cert.separation.checks.push_back(s);
  } else if (all_domains) {
    std::vector<SeparationItem> items;
    for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
      const Subgroup& s = c.subgroups[i];
      items.push_back({s.name, *domains[i], *c.conjugators[i], s.interval->first, s.interval->second});
    }
    cert.separation = verify_separation(items, ambient, opts.membership_cap);
  }

  // Infinite area.
  for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
    if (!domains[i]) continue;
    Check h = named("infinite_area/" + c.subgroups[i].name);
    QuadValue height = infinite_area_height(*domains[i]);
    h.margin = height;
    h.margin_kind = MarginKind::Linear;
    cert.infinite_area_heights.emplace_back(c.subgroups[i].name, height);
    cert.infinite_area.push_back(h);
  }

  // Containment.
  Check gens = named("containment/ambient_generators");
  for (std::size_t i = 0; i < c.subgroups.size(); ++i)
    for (const auto& g : c.subgroups[i].generators)
      if (!ambient(g)) {
        gens.status = CheckStatus::Fail;
        witness(gens, c.subgroups[i].name + " generator " + g.str());
      }
  for (const auto& g : c.combined_gens)
    if (!ambient(g)) {
      gens.status = CheckStatus::Fail;
      witness(gens, "combined generator " + g.str());
    }
  for (const auto& a : c.conjugators)
    if (a && !ambient(*a)) {
      gens.status = CheckStatus::Fail;
      witness(gens, "conjugator " + a->str());
    }
  cert.containment.push_back(gens);

  Check conj = named("containment/conjugates");
  for (std::size_t i = 0; i < c.subgroups.size(); ++i)
    for (std::size_t j = 0; j < c.subgroups[i].generators.size(); ++j) {
      const MoebiusElement& g = c.subgroups[i].generators[j];
      MoebiusElement expect = c.conjugators[i] ? conjugate_by(*c.conjugators[i], g) : g;
      std::size_t k = c.combined_index(i, j);
      if (k >= c.combined_gens.size() || !(c.combined_gens[k] == expect)) {
        conj.status = CheckStatus::Fail;
        witness(conj, c.subgroups[i].name + " generator " + std::to_string(j + 1));
      }
    }
  cert.containment.push_back(conj);

  // Coverage over the subgroups, then a short joint run on the combined
  // generators for containment of mixed words.
  std::vector<CanonicalTrace> expected = expected_set(c.model, bound);
  CoverageRun run = run_coverage(c, expected, bound, max_word_len, opts);
  cert.stats = run.stats;

  const TraceSetModel model = c.model;
  EnumerationOptions jo;
  jo.max_word_len = joint_length(c.combined_gens.size(), max_word_len, 20000);
  jo.trace_bound = bound;
  jo.complex_bound = model.complex();
  jo.state_cap = opts.state_cap;
  jo.threads = opts.threads;
  jo.containment = [model](const CanonicalTrace& t) { return model_contains(model, t); };
  EnumerationResult joint;
  Check jc = named("containment/joint_words");
  try {
    joint = enumerate_traces(c.combined_gens, jo);
    witness(jc, std::to_string(joint.stats.states) + " states to length " + std::to_string(jo.max_word_len));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::StateExplosion) throw;
    jc.status = CheckStatus::Undecided;
    witness(jc, e.what());
  }
  for (const auto& [t, w] : joint.witnesses)
    if (!run.found.count(t)) run.found[t] = {w.size(), w};

  Check model_check = named("containment/model_traces");
  std::size_t bad = run.violation_count + joint.violation_count;
  for (const auto& v : run.violations) witness(model_check, "trace " + v.first.str() + " outside " + model.str());
  for (const auto& v : joint.violations)
    witness(model_check, "trace " + v.first.str() + " word " + word_str(v.second) + " outside " + model.str());
  model_check.margin = QuadValue(static_cast<long>(bad));
  if (bad > 0) model_check.status = CheckStatus::Fail;
  cert.containment.push_back(model_check);
  if (jo.max_word_len > 0) cert.containment.push_back(jc);

  std::vector<CanonicalTrace> enumerated;
  for (const auto& [t, lw] : run.found) {
    enumerated.push_back(t);
    cert.witness_words[t] = lw.second;
  }
  cert.coverage = coverage_report(expected, enumerated);

  Check sound = named("coverage/witness_words");
  for (const auto& t : cert.coverage.covered) {
    const Word& w = cert.witness_words[t];
    if (!(canonical_trace(evaluate_word(c.combined_gens, w)) == t)) {
      sound.status = CheckStatus::Fail;
      witness(sound, "trace " + t.str() + " word " + word_str(w));
    }
  }
  cert.coverage_checks.push_back(sound);

  Check miss = named("coverage/missing");
  miss.margin = QuadValue(static_cast<long>(cert.coverage.missing.size()));
  for (const auto& t : cert.coverage.missing) witness(miss, t.str());
  for (const auto& p : run.problems) witness(miss, p);
  if (!cert.coverage.missing.empty()) miss.status = CheckStatus::Undecided;
  cert.coverage_checks.push_back(miss);

  Check extra = named("coverage/extra");
  extra.margin = QuadValue(static_cast<long>(cert.coverage.extra.size()));
  for (const auto& t : cert.coverage.extra) witness(extra, t.str());
  if (!cert.coverage.extra.empty()) extra.status = CheckStatus::Fail;
  cert.coverage_checks.push_back(extra);

  // Verdict.
  bool failed = false, undecided = false;
  for (const auto& ch : cert.all_checks()) {
    if (ch.status == CheckStatus::Fail) {
      failed = true;
      cert.reasons.push_back(ch.name + (ch.witnesses.empty() ? "" : ": " + ch.witnesses.front()));
    } else if (ch.status == CheckStatus::Undecided) {
      undecided = true;
      cert.reasons.push_back(ch.name + (ch.witnesses.empty() ? "" : ": " + ch.witnesses.front()));
    }
  }
  cert.verdict = failed ? Verdict::Failed : undecided ? Verdict::Undecided : Verdict::Verified;
  cert.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

}  // namespace fordlab
