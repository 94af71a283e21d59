#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fordlab/cli.hpp"
#include "fordlab/constructions.hpp"
#include "fordlab/error.hpp"
#include "fordlab/report.hpp"
#include "fordlab/svg.hpp"

using namespace fordlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("fordlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

fs::path write(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + std::string(FORDLAB_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const Certificate& small_cert() {
  static Certificate c = verify_construction(build(Target::parse("gamma0:3")), 30, 8);
  return c;
}

void expect_parse_error(const std::string& text) {
  try {
    parse_report(text);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
}

}  // namespace

TEST_CASE("reports round trip") {
  JsonReport r = make_report(small_cert());
  std::string text = print_report(r);
  JsonReport back = parse_report(text);
  CHECK(back == r);
  CHECK(print_report(back) == text);
  CHECK(r.verdict == "Verified");
  CHECK(r.schema_version == "1");
  CHECK(r.witness_words.size() == small_cert().witness_words.size());
}

TEST_CASE("reports reject unknown, missing and mistyped fields") {
  auto j = nlohmann::ordered_json::parse(print_report(make_report(small_cert())));
  {
    auto k = j;
    k["extra_field"] = 1;
    expect_parse_error(k.dump());
  }
  {
    auto k = j;
    k["checks"][0]["surprise"] = "x";
    expect_parse_error(k.dump());
  }
  {
    auto k = j;
    k.erase("verdict");
    expect_parse_error(k.dump());
  }
  {
    auto k = j;
    k["schema_version"] = "2";
    expect_parse_error(k.dump());
  }
  {
    auto k = j;
    k["coverage"]["max_word_len"] = "eight";
    expect_parse_error(k.dump());
  }
  expect_parse_error("{");
  expect_parse_error("[]");
}

TEST_CASE("margins in reports are exact values") {
  const Certificate& cert = small_cert();
  JsonReport r = make_report(cert);
  auto checks = cert.all_checks();
  REQUIRE(checks.size() == r.checks.size());
  int with_margin = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CHECK(r.checks[i].name == checks[i].name);
    REQUIRE(r.checks[i].margin.has_value() == checks[i].margin.has_value());
    if (!checks[i].margin) continue;
    ++with_margin;
    CHECK(QuadValue::parse(*r.checks[i].margin) == *checks[i].margin);
  }
  CHECK(with_margin > 0);
}

TEST_CASE("normalized timings give identical bytes") {
  VerifyRequest req;
  req.target = "gamma0:2";
  req.bound = Rational(30);
  req.max_word_len = 8;
  req.normalize_timings = true;
  std::ostringstream a, b, err;
  CHECK(cmd_verify(req, a, err) == exit_code::verified);
  req.threads = 2;
  CHECK(cmd_verify(req, b, err) == exit_code::verified);
  CHECK(a.str() == b.str());
  CHECK(parse_report(a.str()).total_ms == 0);
}

TEST_CASE("verify exit codes") {
  std::ostringstream out, err;
  VerifyRequest req;
  req.target = "gamma0:3";
  req.bound = Rational(30);
  req.max_word_len = 8;
  CHECK(cmd_verify(req, out, err) == exit_code::verified);
  req.max_word_len = 1;
  CHECK(cmd_verify(req, out, err) == exit_code::undecided);
  req.max_word_len = 8;
  req.report_path = "/nonexistent/dir/report.json";
  CHECK(cmd_verify(req, out, err) == exit_code::io);
  req.report_path = (scratch() / "r.json").string();
  req.svg_path = (scratch() / "r.svg").string();
  CHECK(cmd_verify(req, out, err) == exit_code::verified);
  CHECK(parse_report(slurp(req.report_path)).target == "gamma0:3");
  CHECK(slurp(*req.svg_path).find("<svg") != std::string::npos);
  VerifyRequest naive;
  naive.target = "principal:2";
  naive.bound = Rational(20);
  naive.max_word_len = 6;
  naive.naive_principal = true;
  CHECK(cmd_verify(naive, out, err) == exit_code::failed);
  naive.target = "gamma0:0";
  CHECK(cmd_verify(naive, out, err) == exit_code::usage);
}

TEST_CASE("traces command") {
  std::ostringstream out, err;
  fs::path t = write("t.gens", "[[1,1],[0,1]]\n");
  CHECK(cmd_traces(t.string(), 6, 50, "", 1, out, err) == exit_code::verified);
  CHECK(out.str() == "trace 2 word g1\n");
  fs::path bad = write("bad.gens", "[[1,1],[0,1]]\n[[1,2],[3]]\n");
  CHECK(cmd_traces(bad.string(), 6, 50, "", 1, out, err) == exit_code::data);
  CHECK(err.str().find("line 2") != std::string::npos);
  CHECK(cmd_traces((scratch() / "missing.gens").string(), 6, 50, "", 1, out, err) == exit_code::io);
  fs::path g = write("g.gens", "[[0,-1],[1,0]]\n[[1,5],[0,1]]\n");
  fs::path dest = scratch() / "traces.txt";
  CHECK(cmd_traces(g.string(), 4, 20, dest.string(), 1, out, err) == exit_code::verified);
  CHECK(slurp(dest).rfind("trace 0 word g1\n", 0) == 0);
}

TEST_CASE("render command") {
  std::ostringstream err;
  fs::path out = scratch() / "m.svg";
  CHECK(cmd_render(std::string("modular"), std::nullopt, out.string(), err) == exit_code::verified);
  std::string svg = slurp(out);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // the unit circle of S at scale 100
  CHECK(svg.find("r=\"100\"") != std::string::npos);
  CHECK(svg == render_construction_svg(build(Target::parse("modular"))));
  fs::path g = write("r.gens", "[[0,-1],[1,0]]\n[[1,5],[0,1]]\n");
  CHECK(cmd_render(std::nullopt, g.string(), out.string(), err) == exit_code::verified);
  CHECK(slurp(out).find("<circle") != std::string::npos);
  CHECK(render_generators_svg({}).find("<svg") != std::string::npos);
  CHECK(cmd_render(std::string("bianchi:4"), std::nullopt, out.string(), err) == exit_code::usage);
  CHECK(cmd_render(std::nullopt, std::nullopt, out.string(), err) == exit_code::usage);
  CHECK(cmd_render(std::string("modular"), std::nullopt, "/nonexistent/dir/x.svg", err) == exit_code::io);
  CHECK(cmd_render(std::string("bianchi:7"), std::nullopt, out.string(), err) == exit_code::verified);
  CHECK(slurp(out).find("<polygon") != std::string::npos);
}

TEST_CASE("command line binary") {
  fs::path g = write("b.gens", "[[0,-1],[1,0]]\n[[1,5],[0,1]]\n");
  CHECK(run("traces " + g.string() + " --max-word 4") == 0);
  CHECK(run("traces " + g.string() + " --max-word 8", "FORDLAB_STATE_CAP=10") == 2);
  CHECK(run("verify --target gamma0:0") == 64);
  CHECK(run("verify") == 64);
  CHECK(run("bogus") == 64);
  CHECK(run("verify --target gamma0:2 --bound 20 --max-word 6 --report " + (scratch() / "b.json").string()) == 0);
  CHECK(run("verify --target gamma0:2 --bound 20 --max-word 6 --report /nonexistent/x.json") == 74);
  CHECK(run("render --target modular --out " + (scratch() / "b.svg").string()) == 0);
  CHECK(run("render --out " + (scratch() / "c.svg").string()) == 64);
  fs::path bad = write("bad2.gens", "nonsense\n");
  CHECK(run("traces " + bad.string()) == 65);
}
