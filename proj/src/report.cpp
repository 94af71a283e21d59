#include "fordlab/report.hpp"

#include <set>

#include <json.hpp>

#include "fordlab/error.hpp"

namespace fordlab {

using nlohmann::ordered_json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parse, "report: " + what); }

void expect_keys(const ordered_json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) bad(where + " is not an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad("unknown field `" + k + "` in " + where);
  for (const char* k : keys)
    if (!j.contains(k)) bad("missing field `" + std::string(k) + "` in " + where);
}

template <class T>
T get(const ordered_json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("field `") + key + "`: " + e.what());
  }
}

ordered_json pairs(const std::vector<std::pair<std::string, std::string>>& v, const char* a, const char* b) {
  ordered_json out = ordered_json::array();
  for (const auto& [x, y] : v) out.push_back({{a, x}, {b, y}});
  return out;
}

std::vector<std::pair<std::string, std::string>> unpairs(const ordered_json& j, const char* a, const char* b,
                                                         const std::string& where) {
  if (!j.is_array()) bad(where + " is not an array");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : j) {
    expect_keys(e, {a, b}, where);
    out.emplace_back(get<std::string>(e, a), get<std::string>(e, b));
  }
  return out;
}

}  // namespace

JsonReport make_report(const Certificate& cert, bool normalize_timings) {
  const Construction& c = cert.construction;
  JsonReport r;
  r.target = c.target.str();
  r.model = c.model.str();
  r.verdict = std::string(to_string(cert.verdict));
  r.reasons = cert.reasons;
  for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
    const Subgroup& s = c.subgroups[i];
    JsonSubgroup js;
    js.name = s.name;
    for (const auto& g : s.generators) js.generators.push_back(g.str());
    if (i < c.conjugators.size() && c.conjugators[i]) js.conjugator = c.conjugators[i]->str();
    if (s.interval) js.interval = std::make_pair(s.interval->first.str(), s.interval->second.str());
    r.subgroups.push_back(std::move(js));
  }
  for (const auto& g : c.combined_gens) r.combined_gens.push_back(g.str());
  r.notes = c.notes;
  if (c.search_failure) r.notes.push_back(*c.search_failure);
  for (const auto& ch : cert.all_checks()) {
    JsonCheck jc;
    jc.name = ch.name;
    jc.status = lower(to_string(ch.status));
    if (ch.margin) jc.margin = ch.margin->str();
    jc.margin_kind = lower(to_string(ch.margin_kind));
    jc.witnesses = ch.witnesses;
    r.checks.push_back(std::move(jc));
  }
  for (const auto& [name, h] : cert.infinite_area_heights) r.infinite_area_heights.emplace_back(name, h.str());
  r.bound = cert.bound.str();
  r.max_word_len = cert.max_word_len;
  for (const auto& t : cert.coverage.missing) r.missing.push_back(t.str());
  for (const auto& t : cert.coverage.extra) r.extra.push_back(t.str());
  for (const auto& [t, w] : cert.witness_words) r.witness_words.emplace_back(t.str(), word_str(w));
  r.states = static_cast<long>(cert.stats.states);
  r.max_len_reached = cert.stats.max_len_reached;
  r.total_ms = normalize_timings ? 0.0 : cert.elapsed_ms;
  return r;
}

std::string print_report(const JsonReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["target"] = r.target;
  j["model"] = r.model;
  j["verdict"] = r.verdict;
  j["reasons"] = r.reasons;
  ordered_json subs = ordered_json::array();
  for (const auto& s : r.subgroups) {
    ordered_json js;
    js["name"] = s.name;
    js["generators"] = s.generators;
    js["conjugator"] = s.conjugator ? ordered_json(*s.conjugator) : ordered_json(nullptr);
    js["interval"] = s.interval ? ordered_json::array({s.interval->first, s.interval->second}) : ordered_json(nullptr);
    subs.push_back(std::move(js));
  }
  j["construction"] = {{"subgroups", subs}, {"combined_gens", r.combined_gens}, {"notes", r.notes}};
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json jc;
    jc["name"] = c.name;
    jc["status"] = c.status;
    jc["margin"] = c.margin ? ordered_json(*c.margin) : ordered_json(nullptr);
    jc["margin_kind"] = c.margin_kind;
    jc["witnesses"] = c.witnesses;
    checks.push_back(std::move(jc));
  }
  j["checks"] = checks;
  j["infinite_area_heights"] = pairs(r.infinite_area_heights, "subgroup", "height");
  j["coverage"] = {{"bound", r.bound},
                   {"max_word_len", r.max_word_len},
                   {"missing", r.missing},
                   {"extra", r.extra},
                   {"witness_words", pairs(r.witness_words, "trace", "word")}};
  j["stats"] = {{"states", r.states}, {"max_len_reached", r.max_len_reached}};
  j["timings"] = {{"total_ms", r.total_ms}};
  return j.dump(2) + "\n";
}

JsonReport parse_report(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(e.what());
  }
  expect_keys(j,
              {"schema_version", "target", "model", "verdict", "reasons", "construction", "checks",
               "infinite_area_heights", "coverage", "stats", "timings"},
              "report");
  JsonReport r;
  r.schema_version = get<std::string>(j, "schema_version");
  if (r.schema_version != "1") bad("unsupported schema_version " + r.schema_version);
  r.target = get<std::string>(j, "target");
  r.model = get<std::string>(j, "model");
  r.verdict = get<std::string>(j, "verdict");
  r.reasons = get<std::vector<std::string>>(j, "reasons");

  const auto& con = j["construction"];
  expect_keys(con, {"subgroups", "combined_gens", "notes"}, "construction");
  if (!con["subgroups"].is_array()) bad("subgroups is not an array");
  for (const auto& s : con["subgroups"]) {
    expect_keys(s, {"name", "generators", "conjugator", "interval"}, "subgroup");
    JsonSubgroup js;
    js.name = get<std::string>(s, "name");
    js.generators = get<std::vector<std::string>>(s, "generators");
    if (!s["conjugator"].is_null()) js.conjugator = get<std::string>(s, "conjugator");
    if (!s["interval"].is_null()) {
      auto iv = get<std::vector<std::string>>(s, "interval");
      if (iv.size() != 2) bad("interval needs two endpoints");
      js.interval = std::make_pair(iv[0], iv[1]);
    }
    r.subgroups.push_back(std::move(js));
  }
  r.combined_gens = get<std::vector<std::string>>(con, "combined_gens");
  r.notes = get<std::vector<std::string>>(con, "notes");

  if (!j["checks"].is_array()) bad("checks is not an array");
  for (const auto& c : j["checks"]) {
    expect_keys(c, {"name", "status", "margin", "margin_kind", "witnesses"}, "check");
    JsonCheck jc;
    jc.name = get<std::string>(c, "name");
    jc.status = get<std::string>(c, "status");
    if (!c["margin"].is_null()) jc.margin = get<std::string>(c, "margin");
    jc.margin_kind = get<std::string>(c, "margin_kind");
    jc.witnesses = get<std::vector<std::string>>(c, "witnesses");
    r.checks.push_back(std::move(jc));
  }
  r.infinite_area_heights = unpairs(j["infinite_area_heights"], "subgroup", "height", "infinite_area_heights");

  const auto& cov = j["coverage"];
  expect_keys(cov, {"bound", "max_word_len", "missing", "extra", "witness_words"}, "coverage");
  r.bound = get<std::string>(cov, "bound");
  r.max_word_len = get<int>(cov, "max_word_len");
  r.missing = get<std::vector<std::string>>(cov, "missing");
  r.extra = get<std::vector<std::string>>(cov, "extra");
  r.witness_words = unpairs(cov["witness_words"], "trace", "word", "witness_words");

  const auto& st = j["stats"];
  expect_keys(st, {"states", "max_len_reached"}, "stats");
  r.states = get<long>(st, "states");
  r.max_len_reached = get<int>(st, "max_len_reached");
  const auto& tm = j["timings"];
  expect_keys(tm, {"total_ms"}, "timings");
  r.total_ms = get<double>(tm, "total_ms");
  return r;
}

}  // namespace fordlab
