#pragma once

// Closed-form trace-set models and breadth-first trace enumeration.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "fordlab/moebius.hpp"

namespace fordlab {

struct TraceSetModel {
  enum class Kind { Modular, Gamma0, Principal, NormalizerP, Bianchi };
  Kind kind = Kind::Modular;
  long param = 1;

  static TraceSetModel modular() { return {Kind::Modular, 1}; }
  static TraceSetModel gamma0(long n);
  static TraceSetModel principal(long n);
  static TraceSetModel normalizer(long p);
  static TraceSetModel bianchi(long d);

  std::string str() const;
  // Bianchi bounds constrain |t|^2, the others |t|.
  bool complex() const { return kind == Kind::Bianchi; }
};

bool is_prime(long p);
bool is_square_free(long d);

// {a + a^-1 mod n : a a unit mod n}, sorted.
std::vector<long> unit_trace_residues(long n);

std::vector<CanonicalTrace> expected_set(const TraceSetModel& model, const Rational& bound);
bool model_contains(const TraceSetModel& model, const CanonicalTrace& t);

// |t| <= bound for real traces, |t|^2 <= bound for complex ones.
bool within_bound(const CanonicalTrace& t, const Rational& bound, bool complex);

struct EnumerationOptions {
  int max_word_len = 12;
  Rational trace_bound = 50;
  bool complex_bound = false;
  std::size_t state_cap = 5'000'000;
  unsigned threads = 1;
  // Stop after the first level at which all of these are found.
  std::optional<std::vector<CanonicalTrace>> stop_when_covered;
  // Checked on every state regardless of the bound; violations are kept.
  std::function<bool(const CanonicalTrace&)> containment;
};

struct EnumerationStats {
  std::size_t states = 0;
  int max_len_reached = 0;
  bool stopped_early = false;
};

struct EnumerationResult {
  std::map<CanonicalTrace, Word> witnesses;  // shortest witness per trace
  std::vector<std::pair<CanonicalTrace, Word>> violations;  // first few containment failures
  std::size_t violation_count = 0;
  EnumerationStats stats;

  std::vector<CanonicalTrace> traces() const;
};

// Level-synchronized BFS over words in gens and their inverses. Expansion of
// a level may run on several threads; the merge is in (parent, letter)
// order so results do not depend on the thread count.
class TraceEnumerator {
 public:
  TraceEnumerator(std::vector<MoebiusElement> gens, EnumerationOptions opts);

  // Expands one more word length; false when there is nothing left.
  bool step();
  int level() const { return level_; }
  bool covered() const;
  void run();

  const EnumerationResult& result() const { return result_; }
  Word word_of(std::uint32_t state) const;

 private:
  // Integer matrices with entries below 2^62 are kept in machine words,
  // everything else as exact elements; a matrix has exactly one form.
  struct Mat {
    std::array<std::int64_t, 4> s{};
    std::unique_ptr<MoebiusElement> big;
  };
  struct Node {
    Mat m;
    std::uint32_t id;
    int last;
  };
  struct FpHash {
    std::size_t operator()(const std::array<std::uint64_t, 2>& f) const { return f[0] ^ (f[1] * 0x9e3779b97f4a7c15ULL); }
  };

  Mat make(const MoebiusElement& e) const;
  Mat multiply(const Mat& x, std::size_t letter) const;
  static std::array<std::uint64_t, 2> fingerprint(const Mat& m);
  static CanonicalTrace trace_of(const Mat& m);
  void record(const CanonicalTrace& t, std::uint32_t id);

  std::vector<MoebiusElement> gens_;
  bool small_mode_ = false;
  std::vector<int> letters_;
  std::vector<MoebiusElement> letter_elems_;
  std::vector<Mat> letter_mats_;
  EnumerationOptions opts_;
  std::vector<std::pair<std::uint32_t, int>> parent_;
  std::vector<Node> frontier_;
  std::unordered_set<std::array<std::uint64_t, 2>, FpHash> seen_;
  std::map<CanonicalTrace, std::uint32_t> first_state_;
  std::set<CanonicalTrace> pending_;
  EnumerationResult result_;
  int level_ = 0;
};

EnumerationResult enumerate_traces(const std::vector<MoebiusElement>& gens, const EnumerationOptions& opts);

struct CoverageReport {
  std::vector<CanonicalTrace> missing;
  std::vector<CanonicalTrace> covered;
  std::vector<CanonicalTrace> extra;
  bool complete() const { return missing.empty() && extra.empty(); }
};

CoverageReport coverage_report(const std::vector<CanonicalTrace>& expected, const std::vector<CanonicalTrace>& enumerated);

// 2 arccosh(|t|/2); the only floating-point result of the library.
double trace_to_length(const CanonicalTrace& t);

// Text lines `trace <canonical> word <witness>`, sorted by trace.
std::string format_trace_report(const EnumerationResult& r);

}  // namespace fordlab
