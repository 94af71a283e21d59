#include "fordlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fordlab/constructions.hpp"
#include "fordlab/error.hpp"
#include "fordlab/report.hpp"
#include "fordlab/svg.hpp"

namespace fordlab {

namespace {

std::size_t state_cap_from_env() {
  const char* v = std::getenv("FORDLAB_STATE_CAP");
  if (!v || !*v) return VerifyOptions{}.state_cap;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw Error(ErrorKind::UnsupportedParameter, "bad FORDLAB_STATE_CAP `" + std::string(v) + "`");
  return static_cast<std::size_t>(n);
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << text;
  return static_cast<bool>(f);
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Verified: return exit_code::verified;
    case Verdict::Failed: return exit_code::failed;
    case Verdict::Undecided: return exit_code::undecided;
  }
  return exit_code::undecided;
}

}  // namespace

int cmd_verify(const VerifyRequest& req, std::ostream& out, std::ostream& err) {
  Target target;
  VerifyOptions opts;
  try {
    target = Target::parse(req.target);
    opts.state_cap = state_cap_from_env();
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code::usage;
  }
  if (req.max_word_len < 0 || req.horizon < 1) {
    err << "word length and horizon must be positive\n";
    return exit_code::usage;
  }
  Rational bound = req.bound ? *req.bound : Rational(target.kind == Target::Kind::Bianchi ? 40 : 50);
  opts.threads = req.threads;
  opts.horizon = req.horizon;
  BuildOptions bo;
  bo.naive_principal = req.naive_principal;
  Construction c = build(target, bo);
  Certificate cert = verify_construction(c, bound, req.max_word_len, opts);
  std::string json = print_report(make_report(cert, req.normalize_timings));
  if (req.report_path.empty()) {
    out << json;
  } else if (!write_file(req.report_path, json)) {
    err << "cannot write " << req.report_path << "\n";
    return exit_code::io;
  }
  if (req.svg_path && !write_file(*req.svg_path, render_construction_svg(c))) {
    err << "cannot write " << *req.svg_path << "\n";
    return exit_code::io;
  }
  err << target.str() << ": " << to_string(cert.verdict) << "\n";
  for (const auto& r : cert.reasons) err << "  " << r << "\n";
  return verdict_code(cert.verdict);
}

int cmd_traces(const std::string& gens_path, int max_word_len, const Rational& bound, const std::string& out_path,
               unsigned threads, std::ostream& out, std::ostream& err) {
  std::ifstream in(gens_path);
  if (!in) {
    err << "cannot read " << gens_path << "\n";
    return exit_code::io;
  }
  std::vector<MoebiusElement> gens;
  try {
    gens = parse_generator_file(in);
  } catch (const Error& e) {
    err << gens_path << ": " << e.what() << "\n";
    return exit_code::data;
  }
  EnumerationOptions opts;
  opts.max_word_len = max_word_len;
  opts.trace_bound = bound;
  opts.threads = threads;
  for (const auto& g : gens)
    if (!g.trace().is_real()) opts.complex_bound = true;
  EnumerationResult r;
  try {
    opts.state_cap = state_cap_from_env();
    r = enumerate_traces(gens, opts);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.kind() == ErrorKind::StateExplosion ? exit_code::undecided : exit_code::usage;
  }
  std::string text = format_trace_report(r);
  if (out_path.empty() || out_path == "-") {
    out << text;
  } else if (!write_file(out_path, text)) {
    err << "cannot write " << out_path << "\n";
    return exit_code::io;
  }
  return exit_code::verified;
}

int cmd_render(const std::optional<std::string>& target, const std::optional<std::string>& gens_path,
               const std::string& out_svg, std::ostream& err) {
  std::string svg;
  if (target) {
    try {
      svg = render_construction_svg(build(Target::parse(*target)));
    } catch (const Error& e) {
      err << e.what() << "\n";
      return exit_code::usage;
    }
  } else if (gens_path) {
    std::ifstream in(*gens_path);
    if (!in) {
      err << "cannot read " << *gens_path << "\n";
      return exit_code::io;
    }
    try {
      svg = render_generators_svg(parse_generator_file(in));
    } catch (const Error& e) {
      err << *gens_path << ": " << e.what() << "\n";
      return exit_code::data;
    }
  } else {
    err << "render needs --target or --gens\n";
    return exit_code::usage;
  }
  if (!write_file(out_svg, svg)) {
    err << "cannot write " << out_svg << "\n";
    return exit_code::io;
  }
  return exit_code::verified;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Exact certification of trace-set constructions"};
  app.require_subcommand(1);

  VerifyRequest vr;
  std::string bound_text;
  std::string svg_path;
  auto* verify = app.add_subcommand("verify", "Build a construction and certify it");
  verify->add_option("--target", vr.target, "modular | gamma0:<n> | principal:<n> | normalizer:<p> | bianchi:<d>")
      ->required();
  verify->add_option("--bound", bound_text, "Trace bound (|t|^2 for Bianchi targets)");
  verify->add_option("--max-word", vr.max_word_len, "Maximum word length");
  verify->add_option("--horizon", vr.horizon, "Power scan horizon");
  verify->add_option("--threads", vr.threads, "Enumeration threads");
  verify->add_option("--report", vr.report_path, "JSON report path (default: standard output)");
  verify->add_option("--svg", svg_path, "Also render the construction");
  verify->add_flag("--normalize-timings", vr.normalize_timings, "Write zero timings");
  verify->add_flag("--naive-principal", vr.naive_principal, "principal:2 with translation 2");

  std::string gens_path, out_path, tbound_text = "50";
  int tmax = 8;
  unsigned tthreads = 1;
  auto* traces = app.add_subcommand("traces", "Enumerate traces of a generator file");
  traces->add_option("gens", gens_path, "Generator file")->required();
  traces->add_option("--max-word", tmax, "Maximum word length");
  traces->add_option("--bound", tbound_text, "Trace bound");
  traces->add_option("--out", out_path, "Output path (default: standard output)");
  traces->add_option("--threads", tthreads, "Enumeration threads");

  std::string rtarget, rgens, rout;
  auto* render = app.add_subcommand("render", "Draw circles and domains as SVG");
  auto* rt = render->add_option("--target", rtarget, "Construction target");
  auto* rg = render->add_option("--gens", rgens, "Generator file");
  rt->excludes(rg);
  render->add_option("--out", rout, "SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_code::usage;
  }
  try {
    if (*verify) {
      if (!bound_text.empty()) vr.bound = Rational::parse(bound_text);
      if (!svg_path.empty()) vr.svg_path = svg_path;
      return cmd_verify(vr, std::cout, std::cerr);
    }
    if (*traces) return cmd_traces(gens_path, tmax, Rational::parse(tbound_text), out_path, tthreads, std::cout, std::cerr);
    return cmd_render(rtarget.empty() ? std::nullopt : std::optional<std::string>(rtarget),
                      rgens.empty() ? std::nullopt : std::optional<std::string>(rgens), rout, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UnsupportedParameter ? exit_code::usage
                                                                                        : exit_code::failed;
  }
}

}  // namespace fordlab
