#pragma once

// Builders for the trace-set constructions and the certification pipeline.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fordlab/geometry.hpp"
#include "fordlab/moebius.hpp"
#include "fordlab/tracesets.hpp"

namespace fordlab {

struct Target {
  enum class Kind { Modular, Gamma0, Principal, Normalizer, Bianchi };
  Kind kind = Kind::Modular;
  long param = 1;

  // `modular`, `gamma0:<n>`, `principal:<n>`, `normalizer:<p>`, `bianchi:<d>`;
  // UnsupportedParameter on anything else.
  static Target parse(std::string_view text);
  std::string str() const;
};

struct Subgroup {
  std::string name;
  std::vector<MoebiusElement> generators;
  // Fuchsian subgroups: index of the translation among the generators.
  int translation_index = 1;
  std::optional<QuadValue> strip_center;  // strip used instead of the lemma's
  std::optional<std::pair<Rational, Rational>> interval;
  // Bianchi subgroups P_x
  std::optional<QuadValue> x;
};

struct Construction {
  Target target;
  TraceSetModel model;
  std::vector<Subgroup> subgroups;
  std::vector<std::optional<MoebiusElement>> conjugators;  // one slot per subgroup
  std::vector<MoebiusElement> combined_gens;
  std::vector<std::string> notes;
  std::optional<std::string> search_failure;
  // Bianchi only
  std::optional<Prism> prism;
  bool strict_power_scan = true;

  // Index in combined_gens of generator j of subgroup i.
  std::size_t combined_index(std::size_t subgroup, std::size_t gen) const;
};

struct BuildOptions {
  // principal:2 with <T^2, [[1,0],[2,1]]> instead of <T^4, [[1,0],[2,1]]>
  bool naive_principal = false;
  long max_height = 400;
  long max_power = 40;
};

Construction build(const Target& target, const BuildOptions& opts = {});

// Membership predicate of the ambient lattice of a target.
std::function<bool(const MoebiusElement&)> ambient_predicate(const Target& target);

// Atkin-Lehner normalizer of Gamma0(p): Gamma0(p) together with the
// matrices [[a sqrt p, b / sqrt p], [c sqrt p, d sqrt p]], a, b, c, d integers.
bool in_normalizer(const MoebiusElement& x, long p);

// Gamma0(n) subgroup data: one two-generator subgroup per +-trace class.
struct Gamma0Piece {
  MoebiusElement g;
  long translation;  // in multiples of n
  bool fallback;  // trace n/2 needs the doubled period
};
std::vector<Gamma0Piece> gamma0_pieces(long n);

// Number of residues of O_d / 3 O_d hit by +-x, x in {0, 1, w, 1+w, 2+w}.
int bianchi_coset_cover(long d);

struct PowerConjugator {
  MoebiusElement base;
  long power = 0;
  MoebiusElement element;
};

struct ConjugatorSearch {
  long level = 1;  // lower-left entries are multiples of the level
  long max_height = 400;
  long max_power = 40;
  std::function<bool(const MoebiusElement&)> accept;  // optional extra filter
};

// Hyperbolic integer matrix with both fixed points in (x, y), raised to the
// least power whose disk pair lies strictly inside (x, y).
PowerConjugator find_power_conjugator(const ConjugatorSearch& search, const Rational& x, const Rational& y);

struct VerifyOptions {
  unsigned threads = 1;
  int horizon = 50;
  std::size_t state_cap = 5'000'000;
  std::size_t membership_cap = 10000;
};

enum class Verdict { Verified, Failed, Undecided };
std::string_view to_string(Verdict v);

struct Certificate {
  Construction construction;
  Rational bound;
  int max_word_len = 0;
  std::vector<Check> lemma_results;
  SeparationReport separation;
  std::vector<Check> infinite_area;
  std::vector<std::pair<std::string, QuadValue>> infinite_area_heights;
  std::vector<Check> containment;
  std::vector<Check> coverage_checks;
  CoverageReport coverage;
  std::map<CanonicalTrace, Word> witness_words;  // over combined_gens
  EnumerationStats stats;
  Verdict verdict = Verdict::Undecided;
  std::vector<std::string> reasons;
  double elapsed_ms = 0;

  std::vector<Check> all_checks() const;
};

Certificate verify_construction(const Construction& c, const Rational& bound, int max_word_len,
                                const VerifyOptions& opts = {});

// Strip domain of a Fuchsian subgroup, recentered when requested.
FordDomain subgroup_domain(const Subgroup& s);

}  // namespace fordlab
