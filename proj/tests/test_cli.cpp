#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "acsv/pipeline.hpp"
#include "doctest.h"

using namespace acsv;
using nlohmann::json;

namespace {

const std::string kData = ACSV_DATA_DIR;

std::string write_temp(const std::string& name, const json& doc) {
  const auto path = std::filesystem::temp_directory_path() / ("acsv_test_" + name + ".json");
  std::ofstream(path) << doc.dump();
  return path.string();
}

JobConfig job(Command c, const std::string& path, std::optional<std::string> beta = std::nullopt) {
  JobConfig cfg;
  cfg.command = c;
  cfg.input_path = path;
  cfg.beta = std::move(beta);
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ACSV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("input files: terms and expression forms agree") {
  Problem a = load_problem(kData + "/ex2.json");
  json doc{{"variables", {"Z1", "Z2", "Z3", "Z4"}},
           {"expression", "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)"},
           {"beta", 2}};
  Problem b = parse_problem(doc);
  CHECK(a.p == b.p);
  CHECK(a.beta->rational() == b.beta->rational());
}

TEST_CASE("input files: beta forms") {
  json doc{{"variables", {"x"}}, {"expression", "1 - x"}};
  doc["beta"] = 0.55;
  CHECK(parse_problem(doc).beta->rational() == make_rat(11, 20));
  doc["beta"] = "7/3";
  CHECK(parse_problem(doc).beta->rational() == make_rat(7, 3));
  doc.erase("beta");
  CHECK_FALSE(parse_problem(doc).beta.has_value());
}

TEST_CASE("input files: errors") {
  CHECK_THROWS_AS(parse_problem(json::array()), InputError);
  CHECK_THROWS_AS(parse_problem(json{{"variables", {"x"}}}), InputError);
  CHECK_THROWS_AS(parse_problem(json{{"variables", {"x"}}, {"expression", "1"}, {"terms", json::array()}}), InputError);
  CHECK_THROWS_AS(parse_problem(json{{"variables", {"x"}}, {"terms", {{{"coeff", "1"}, {"exps", {1, 2}}}}}}),
                  InputError);
  CHECK_THROWS_AS(parse_problem(json{{"variables", {"x"}}, {"terms", {{{"coeff", "1"}, {"exps", {-1}}}}}}), InputError);
  CHECK_THROWS_AS(parse_problem(json{{"variables", {"x"}}, {"expression", "1 + * x"}}), ParseError);
  CHECK_THROWS_AS(load_problem("/nonexistent/input.json"), InputError);
}

TEST_CASE("analyze: three-variable example at beta = 1") {
  auto r = cmd_analyze(job(Command::Analyze, kData + "/ex1.json"));
  CHECK(r.exit_code == exit_code::kSuccess);
  REQUIRE(r.cone);
  CHECK(r.cone->exact == std::vector<std::string>(3, "2/3"));
  CHECK(r.cone->scaled == std::vector<std::string>(3, "1"));
  CHECK(r.cone->scaled_polynomial == "1 - 2/3*Z1 - 2/3*Z2 - 2/3*Z3 + 1/3*Z1*Z2 + 1/3*Z1*Z3 + 1/3*Z2*Z3");
  REQUIRE(r.quadratic);
  CHECK(r.quadratic->inertia == std::vector<int>{1, 2, 0});
  CHECK(r.quadratic->det == "1/108");
  CHECK(r.quadratic->qstar_one == "9");
  REQUIRE(r.estimate);
  CHECK(r.estimate->c_full == doctest::Approx(std::sqrt(3.0) / std::numbers::pi).epsilon(1e-12));
  CHECK(r.estimate->alpha == "-1");
  CHECK(r.estimate->rho == std::vector<std::string>(3, "3/2"));
  REQUIRE(r.verdict);
  CHECK(r.verdict->status == "UltimatelyPositive");
  CHECK_FALSE(r.verdict->conditional);
  CHECK(r.certificate->status == "ProvenByPattern");
  CHECK(r.skipped.at("validation") == "not requested");
}

TEST_CASE("analyze: four-variable example") {
  auto r = cmd_analyze(job(Command::Analyze, kData + "/ex2.json"));
  CHECK(r.exit_code == exit_code::kSuccess);
  CHECK(r.verdict->status == "UltimatelyPositive");
  CHECK(r.verdict->conditional);
  CHECK(r.quadratic->qstar_one == "32/3");
  CHECK(r.quadratic->det == "-3/4096");
  CHECK(r.estimate->c_full == doctest::Approx(8 / (std::sqrt(3.0) * std::numbers::pi)).epsilon(1e-12));

  auto degenerate = cmd_analyze(job(Command::Analyze, kData + "/ex2.json", "1"));
  CHECK(degenerate.exit_code == exit_code::kInconclusive);
  CHECK(degenerate.verdict->status == "Inconclusive");
  CHECK(degenerate.verdict->reason == "DegenerateGamma");
  CHECK(degenerate.verdict->failed_item == checks::kGammaFinite);
  CHECK_FALSE(degenerate.estimate.has_value());
  CHECK(degenerate.quadratic.has_value());
}

TEST_CASE("analyze: no cone point and input errors") {
  auto path = write_temp("const", json{{"variables", {"Z1", "Z2", "Z3"}}, {"expression", "1"}, {"beta", "1"}});
  auto r = cmd_analyze(job(Command::Analyze, path));
  CHECK(r.exit_code == exit_code::kMethodInapplicable);
  CHECK(r.verdict->failed_item == checks::kConeFound);
  CHECK(r.skipped.count("cone") == 1);

  auto no_beta = write_temp("nobeta", json{{"variables", {"x"}}, {"expression", "1 - x"}});
  CHECK(cmd_analyze(job(Command::Analyze, no_beta)).exit_code == exit_code::kInputError);
  CHECK(cmd_analyze(job(Command::Analyze, no_beta, "-2")).exit_code == exit_code::kInputError);
  auto zero_const = write_temp("zeroconst", json{{"variables", {"x"}}, {"expression", "x"}, {"beta", 1}});
  CHECK(cmd_analyze(job(Command::Analyze, zero_const)).exit_code == exit_code::kInputError);
}

TEST_CASE("analyze: a nonunit constant term rescales the constant") {
  auto path = write_temp("double",
                         json{{"variables", {"Z1", "Z2", "Z3"}},
                              {"expression", "2*(1 - (Z1 + Z2 + Z3) + 3/4*(Z1*Z2 + Z1*Z3 + Z2*Z3))"},
                              {"beta", "3/2"}});
  auto r = cmd_analyze(job(Command::Analyze, path));
  auto base = cmd_analyze(job(Command::Analyze, kData + "/ex1.json", "3/2"));
  REQUIRE(r.estimate);
  CHECK(r.input->constant_term == "2");
  CHECK(r.estimate->c_full == doctest::Approx(base.estimate->c_full * std::pow(2.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("validate: ratios approach 1") {
  auto cfg = job(Command::Validate, kData + "/ex1.json");
  cfg.orders = {0, 10, 20, 30};
  auto r = cmd_validate(cfg);
  REQUIRE(r.validation);
  const auto& rows = r.validation->rows;
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].empirical == "1");
  CHECK_FALSE(rows[0].ratio.has_value());
  CHECK(std::fabs(*rows[3].ratio - 1) <= 0.2);
  CHECK(std::fabs(*rows[3].ratio - 1) < std::fabs(*rows[1].ratio - 1));
  CHECK(r.validation->monotone_tail);
  CHECK(r.validation->backend == "exact");

  cfg.backend = Backend::Float;
  auto f = cmd_validate(cfg);
  CHECK(f.validation->backend == "float");
  CHECK(*f.validation->rows[3].ratio == doctest::Approx(*rows[3].ratio).epsilon(1e-9));
}

TEST_CASE("validate: capacity and missing estimate") {
  auto cfg = job(Command::Validate, kData + "/ex2.json");
  cfg.orders = {10000};
  CHECK(cmd_validate(cfg).exit_code == exit_code::kInputError);
  auto degenerate = cmd_validate(job(Command::Validate, kData + "/ex2.json", "1"));
  CHECK(degenerate.exit_code == exit_code::kInconclusive);
  CHECK(degenerate.skipped.at("validation") == "no asymptotic estimate");
}

TEST_CASE("scan") {
  auto cfg = job(Command::Scan, kData + "/ex2.json", "1");
  auto r = cmd_scan(cfg);
  REQUIRE(r.scan);
  CHECK_FALSE(r.scan->first_nonpositive.has_value());
  CHECK(r.scan->signs.size() == 21);

  auto geo = write_temp("geo", json{{"variables", {"Z1"}}, {"expression", "1 - Z1"}, {"beta", "1"}});
  CHECK_FALSE(cmd_scan(job(Command::Scan, geo)).scan->first_nonpositive.has_value());

  // The verdict says negative, so some term in range must be nonpositive.
  auto neg = job(Command::Scan, kData + "/ex1.json", "2/5");
  neg.scan_depth = 40;
  auto s = cmd_scan(neg);
  CHECK(cmd_analyze(job(Command::Analyze, kData + "/ex1.json", "2/5")).verdict->status == "UltimatelyNegative");
  REQUIRE(s.scan->first_nonpositive.has_value());
  CHECK(s.scan->signs.back() < 0);

  CHECK(cmd_scan(job(Command::Scan, kData + "/ex1.json", "1.41421356237309504880168872420969807856967187537694"))
            .exit_code == exit_code::kSuccess);
}

TEST_CASE("verdict and scan agree for positive verdicts") {
  for (const char* beta : {"3/4", "2"}) {
    auto a = cmd_analyze(job(Command::Analyze, kData + "/ex1.json", beta));
    REQUIRE(a.verdict->status == "UltimatelyPositive");
    auto cfg = job(Command::Scan, kData + "/ex1.json", beta);
    cfg.scan_depth = 30;
    const auto& signs = cmd_scan(cfg).scan->signs;
    std::size_t last_bad = 0;
    for (std::size_t n = 0; n < signs.size(); ++n)
      if (signs[n] <= 0) last_bad = n;
    for (std::size_t n = last_bad + 1; n < signs.size(); ++n) CHECK(signs[n] > 0);
    CHECK(signs.back() > 0);
  }
}

TEST_CASE("reports round-trip and are deterministic") {
  auto cfg = job(Command::Validate, kData + "/ex2.json");
  cfg.orders = {4, 8};
  auto r = cmd_validate(cfg);
  const json j = r;
  const AnalysisReport back = j.get<AnalysisReport>();
  CHECK(json(back) == j);
  CHECK(report_fingerprint(back) == report_fingerprint(r));
  CHECK(report_fingerprint(cmd_validate(cfg)) == report_fingerprint(r));

  auto failed = cmd_analyze(job(Command::Analyze, "/nonexistent.json"));
  const json jf = failed;
  CHECK(jf.at("cone").at("skipped") == "input error");
  CHECK(json(jf.get<AnalysisReport>()) == jf);

  json wrong = j;
  wrong["schema"] = 2;
  CHECK_THROWS_AS(wrong.get<AnalysisReport>(), InputError);
}

TEST_CASE("command-line exit codes") {
  CHECK(run_cli("analyze --input " + kData + "/ex1.json --beta 1") == 0);
  CHECK(run_cli("analyze --input " + kData + "/ex1.json --beta 1/2") == 3);
  CHECK(run_cli("analyze --input " + kData + "/ex2.json --beta 1") == 3);
  CHECK(run_cli("analyze --input " + kData + "/ex1.json --beta abc") == 4);
  CHECK(run_cli("analyze --input /nonexistent.json --beta 1") == 4);
  CHECK(run_cli("analyze --beta 1") == 4);
  CHECK(run_cli("analyze --input " + kData + "/ex1.json --format xml") == 4);
  auto path = write_temp("const_cli", json{{"variables", {"Z1"}}, {"expression", "1"}, {"beta", "1"}});
  CHECK(run_cli("analyze --input " + path) == 2);
  CHECK(run_cli("scan --input " + kData + "/ex2.json --beta 1 --scan-depth 5") == 0);

  const auto out = std::filesystem::temp_directory_path() / "acsv_test_report.json";
  CHECK(run_cli("validate --input " + kData + "/ex1.json --orders 5,10 --out " + out.string()) == 0);
  std::ifstream in(out);
  const json doc = json::parse(in);
  CHECK(doc.at("schema") == 1);
  CHECK(doc.at("validation").at("rows").size() == 2);
}
