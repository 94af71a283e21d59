#pragma once

// JSON certificate reports, schema version "1". Parsing rejects unknown
// fields so stored reports stay comparable.

#include <optional>
#include <string>
#include <vector>

#include "fordlab/constructions.hpp"

namespace fordlab {

struct JsonCheck {
  std::string name;
  std::string status;
  std::optional<std::string> margin;  // QuadValue text
  std::string margin_kind;
  std::vector<std::string> witnesses;

  friend bool operator==(const JsonCheck&, const JsonCheck&) = default;
};

struct JsonSubgroup {
  std::string name;
  std::vector<std::string> generators;
  std::optional<std::string> conjugator;
  std::optional<std::pair<std::string, std::string>> interval;

  friend bool operator==(const JsonSubgroup&, const JsonSubgroup&) = default;
};

struct JsonReport {
  std::string schema_version = "1";
  std::string target;
  std::string model;
  std::string verdict;
  std::vector<std::string> reasons;
  std::vector<JsonSubgroup> subgroups;
  std::vector<std::string> combined_gens;
  std::vector<std::string> notes;
  std::vector<JsonCheck> checks;
  std::vector<std::pair<std::string, std::string>> infinite_area_heights;
  std::string bound;
  int max_word_len = 0;
  std::vector<std::string> missing;
  std::vector<std::string> extra;
  std::vector<std::pair<std::string, std::string>> witness_words;  // trace, word
  long states = 0;
  int max_len_reached = 0;
  double total_ms = 0;

  friend bool operator==(const JsonReport&, const JsonReport&) = default;
};

JsonReport make_report(const Certificate& cert, bool normalize_timings = false);

std::string print_report(const JsonReport& r);
// Parse errors and schema mismatches throw Error(Parse).
JsonReport parse_report(const std::string& text);

}  // namespace fordlab
