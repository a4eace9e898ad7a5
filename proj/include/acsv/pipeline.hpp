#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acsv/asympt.hpp"
#include "acsv/geometry.hpp"
#include "acsv/series.hpp"

namespace acsv {

enum class Command { Analyze, Validate, Scan };
enum class OutputFormat { Json, Tsv };

std::string to_string(Command c);

struct JobConfig {
  Command command = Command::Analyze;
  std::string input_path;
  /// Overrides the beta in the input file.
  std::optional<std::string> beta;
  unsigned scan_depth = 20;
  /// Empty means the default for the dimension.
  std::vector<unsigned> orders;
  Backend backend = Backend::Exact;
  std::size_t samples = 4096;
  std::uint64_t seed = 42;
  std::optional<std::string> out_path;
  OutputFormat format = OutputFormat::Json;
};

/// Exit codes of the command-line tool.
namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kMethodInapplicable = 2;
inline constexpr int kInconclusive = 3;
inline constexpr int kInputError = 4;
}  // namespace exit_code

/// Raised for malformed input files and bad flag values.
class InputError : public Error {
 public:
  using Error::Error;
};

struct Problem {
  Polynomial p{1};
  std::vector<std::string> variables;
  std::optional<Beta> beta;
};

/// Reads {"variables": [...], "terms": [{"coeff": "n/d", "exps": [...]}] or
/// "expression": "...", "beta": "n/d" or a number}.
Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::string& path);

std::vector<unsigned> default_orders(std::size_t d);

struct InputEcho {
  std::string polynomial;
  std::vector<std::string> variables;
  std::string beta;
  std::size_t d = 0;
  /// P(0); the series is P(0)^(-beta) (P/P(0))^(-beta).
  std::string constant_term;
};

struct ConeReport {
  std::vector<std::string> exact;
  /// The cone point after Z -> Z* Z, and P in those coordinates.
  std::vector<std::string> scaled;
  std::string scaled_polynomial;
  std::vector<std::vector<double>> zstar;
  std::vector<double> xmin;
  std::string method;
  std::size_t candidates = 0;
};

struct CertificateReport {
  std::string status;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double min_modulus = 0.0;
  std::string transform_numerator;
  /// Coordinates as [re, im] with 17 significant digits.
  std::vector<std::vector<std::string>> witness;
  std::size_t smooth_critical = 0;
};

struct QuadraticReport {
  std::vector<std::vector<std::string>> m;
  std::vector<int> inertia;
  std::string det;
  std::vector<std::vector<std::string>> minv;
  std::string qstar_one;
  std::string q;
  std::string qstar;
};

struct EstimateReport {
  double c_full = 0.0;
  std::string c_exact_square;
  std::vector<std::string> rho;
  std::string alpha;
  std::string gamma_arg1, gamma_arg2;
  double gamma1 = 0.0, gamma2 = 0.0;
  double normalization = 1.0;
  std::string formula;
};

struct VerdictReport {
  std::string status;
  std::string reason;
  bool conditional = false;
  std::string failed_item;
  std::vector<CheckItem> checklist;
};

struct ValidationRow {
  unsigned n = 0;
  /// Exact rational when available, otherwise a decimal.
  std::string empirical;
  std::optional<double> predicted;
  std::optional<double> ratio;
};

struct ValidationReport {
  std::string backend;
  std::vector<ValidationRow> rows;
  /// |ratio - 1| never increases along the rows.
  bool monotone_tail = true;
};

struct ScanReport {
  unsigned depth = 0;
  std::optional<std::size_t> first_nonpositive;
  std::vector<int> signs;
};

struct AnalysisReport {
  int schema = 1;
  std::string command;
  int exit_code = exit_code::kSuccess;
  std::string error;
  std::optional<InputEcho> input;
  std::optional<ConeReport> cone;
  std::optional<CertificateReport> certificate;
  std::optional<QuadraticReport> quadratic;
  std::optional<EstimateReport> estimate;
  std::optional<VerdictReport> verdict;
  std::optional<ValidationReport> validation;
  std::optional<ScanReport> scan;
  /// Reason for every absent section.
  std::map<std::string, std::string> skipped;
  std::map<std::string, double> timings_ms;
};

void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);

/// Pretty JSON without the timings block, for determinism checks.
std::string report_fingerprint(const AnalysisReport& r);

AnalysisReport cmd_analyze(const JobConfig& config);
AnalysisReport cmd_validate(const JobConfig& config);
AnalysisReport cmd_scan(const JobConfig& config);
AnalysisReport run(const JobConfig& config);

void write_report(std::ostream& out, const AnalysisReport& r, OutputFormat format);

}  // namespace acsv
