#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "acsv/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace acsv;
  CLI::App app{"Diagonal asymptotics and ultimate positivity of P^(-beta)"};
  app.require_subcommand(1, 1);

  JobConfig config;
  std::string beta, backend = "exact", format = "json", out;
  std::vector<unsigned> orders;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", config.input_path, "input JSON file")->required();
    sub->add_option("--beta", beta, "exponent, as num/den or a decimal");
    sub->add_option("--scan-depth", config.scan_depth, "largest n for the positivity scan");
    sub->add_option("--orders", orders, "validation orders")->delimiter(',');
    sub->add_option("--backend", backend, "series arithmetic")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--samples", config.samples, "falsifier sample count");
    sub->add_option("--seed", config.seed, "sampler seed");
    sub->add_option("--out", out, "write the report here instead of stdout");
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "tsv"}));
  };
  auto* analyze = app.add_subcommand("analyze", "run the asymptotic analysis");
  auto* validate = app.add_subcommand("validate", "analyze, then compare against exact diagonal terms");
  auto* scan = app.add_subcommand("scan", "exact signs of the first diagonal terms");
  for (auto* sub : {analyze, validate, scan}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kInputError;
  }

  if (analyze->parsed()) config.command = Command::Analyze;
  if (validate->parsed()) config.command = Command::Validate;
  if (scan->parsed()) config.command = Command::Scan;
  if (!beta.empty()) config.beta = beta;
  config.orders = orders;
  config.backend = backend == "float" ? Backend::Float : Backend::Exact;
  config.format = format == "tsv" ? OutputFormat::Tsv : OutputFormat::Json;
  if (!out.empty()) config.out_path = out;

  const AnalysisReport report = run(config);
  if (config.out_path) {
    std::ofstream file(*config.out_path);
    if (!file) {
      std::cerr << "cannot write " << *config.out_path << '\n';
      return exit_code::kInputError;
    }
    write_report(file, report, config.format);
  } else {
    write_report(std::cout, report, config.format);
  }
  if (!report.error.empty()) std::cerr << report.error << '\n';
  return report.exit_code;
}
