#pragma once

// Command-line front end: verify, traces, render.

#include <iosfwd>
#include <optional>
#include <string>

#include "fordlab/exactnum.hpp"

namespace fordlab {

namespace exit_code {
constexpr int verified = 0;
constexpr int failed = 1;
constexpr int undecided = 2;
constexpr int usage = 64;
constexpr int data = 65;
constexpr int io = 74;
}  // namespace exit_code

struct VerifyRequest {
  std::string target;
  std::optional<Rational> bound;  // 50, or 40 for Bianchi targets
  int max_word_len = 12;
  int horizon = 50;
  unsigned threads = 1;
  std::string report_path;  // empty: standard output
  std::optional<std::string> svg_path;
  bool normalize_timings = false;
  bool naive_principal = false;
};

int cmd_verify(const VerifyRequest& req, std::ostream& out, std::ostream& err);
int cmd_traces(const std::string& gens_path, int max_word_len, const Rational& bound, const std::string& out_path,
               unsigned threads, std::ostream& out, std::ostream& err);
int cmd_render(const std::optional<std::string>& target, const std::optional<std::string>& gens_path,
               const std::string& out_svg, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace fordlab
