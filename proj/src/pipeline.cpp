#include "acsv/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace acsv {

using nlohmann::json;

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InputEcho, polynomial, variables, beta, d, constant_term)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ConeReport, exact, scaled, scaled_polynomial, zstar, xmin, method, candidates)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CertificateReport, status, samples, seed, min_modulus, transform_numerator, witness,
                                   smooth_critical)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(QuadraticReport, m, inertia, det, minv, qstar_one, q, qstar)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EstimateReport, c_full, c_exact_square, rho, alpha, gamma_arg1, gamma_arg2, gamma1,
                                   gamma2, normalization, formula)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CheckItem, name, passed, evidence)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VerdictReport, status, reason, conditional, failed_item, checklist)

namespace {

template <class T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

void to_json(json& j, const ValidationRow& r) {
  j = json{{"n", r.n},
           {"empirical", r.empirical},
           {"predicted", optional_to_json(r.predicted)},
           {"ratio", optional_to_json(r.ratio)}};
}

void from_json(const json& j, ValidationRow& r) {
  j.at("n").get_to(r.n);
  j.at("empirical").get_to(r.empirical);
  r.predicted = optional_from_json<double>(j.at("predicted"));
  r.ratio = optional_from_json<double>(j.at("ratio"));
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ValidationReport, backend, rows, monotone_tail)

void to_json(json& j, const ScanReport& r) {
  j = json{{"depth", r.depth}, {"first_nonpositive", optional_to_json(r.first_nonpositive)}, {"signs", r.signs}};
}

void from_json(const json& j, ScanReport& r) {
  j.at("depth").get_to(r.depth);
  r.first_nonpositive = optional_from_json<std::size_t>(j.at("first_nonpositive"));
  j.at("signs").get_to(r.signs);
}

namespace {

template <class T>
void put_section(json& j, const std::string& key, const std::optional<T>& v,
                 const std::map<std::string, std::string>& skipped) {
  if (v) {
    j[key] = *v;
  } else {
    auto it = skipped.find(key);
    j[key] = json{{"skipped", it == skipped.end() ? std::string("not requested") : it->second}};
  }
}

template <class T>
void get_section(const json& j, const std::string& key, std::optional<T>& v, std::map<std::string, std::string>& skipped) {
  const json& s = j.at(key);
  if (s.is_object() && s.size() == 1 && s.contains("skipped")) {
    v.reset();
    skipped[key] = s.at("skipped").get<std::string>();
  } else {
    v = s.get<T>();
  }
}

}  // namespace

void to_json(json& j, const AnalysisReport& r) {
  j = json{{"schema", r.schema}, {"command", r.command}, {"exit_code", r.exit_code}, {"error", r.error}};
  put_section(j, "input", r.input, r.skipped);
  put_section(j, "cone", r.cone, r.skipped);
  put_section(j, "certificate", r.certificate, r.skipped);
  put_section(j, "quadratic", r.quadratic, r.skipped);
  put_section(j, "estimate", r.estimate, r.skipped);
  put_section(j, "verdict", r.verdict, r.skipped);
  put_section(j, "validation", r.validation, r.skipped);
  put_section(j, "scan", r.scan, r.skipped);
  j["timings"] = r.timings_ms;
}

void from_json(const json& j, AnalysisReport& r) {
  j.at("schema").get_to(r.schema);
  if (r.schema != 1) throw InputError("unsupported report schema " + std::to_string(r.schema));
  j.at("command").get_to(r.command);
  j.at("exit_code").get_to(r.exit_code);
  j.at("error").get_to(r.error);
  r.skipped.clear();
  get_section(j, "input", r.input, r.skipped);
  get_section(j, "cone", r.cone, r.skipped);
  get_section(j, "certificate", r.certificate, r.skipped);
  get_section(j, "quadratic", r.quadratic, r.skipped);
  get_section(j, "estimate", r.estimate, r.skipped);
  get_section(j, "verdict", r.verdict, r.skipped);
  get_section(j, "validation", r.validation, r.skipped);
  get_section(j, "scan", r.scan, r.skipped);
  j.at("timings").get_to(r.timings_ms);
}

std::string report_fingerprint(const AnalysisReport& r) {
  json j = r;
  j.erase("timings");
  return j.dump(2);
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Validate: return "validate";
    case Command::Scan: return "scan";
  }
  return "?";
}

Problem parse_problem(const json& doc) {
  if (!doc.is_object()) throw InputError("input must be a JSON object");
  if (!doc.contains("variables") || !doc.at("variables").is_array() || doc.at("variables").empty())
    throw InputError("input needs a nonempty 'variables' list");
  Problem pr;
  for (const auto& v : doc.at("variables")) {
    if (!v.is_string()) throw InputError("variable names must be strings");
    pr.variables.push_back(v.get<std::string>());
  }
  const std::size_t d = pr.variables.size();
  const bool has_terms = doc.contains("terms"), has_expr = doc.contains("expression");
  if (has_terms == has_expr) throw InputError("exactly one of 'terms' and 'expression' is required");
  if (has_expr) {
    if (!doc.at("expression").is_string()) throw InputError("'expression' must be a string");
    pr.p = parse_polynomial(doc.at("expression").get<std::string>(), pr.variables);
  } else {
    if (!doc.at("terms").is_array()) throw InputError("'terms' must be a list");
    Polynomial p(d);
    for (const auto& t : doc.at("terms")) {
      if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
        throw InputError("each term needs 'coeff' and 'exps'");
      const auto& c = t.at("coeff");
      Rat coeff;
      if (c.is_string()) coeff = parse_rat(c.get<std::string>());
      else if (c.is_number_integer()) coeff = Rat(c.get<long>());
      else throw InputError("'coeff' must be a \"num/den\" string or an integer");
      const auto& e = t.at("exps");
      if (!e.is_array() || e.size() != d) throw InputError("'exps' must list one exponent per variable");
      Monomial m;
      for (const auto& x : e) {
        if (!x.is_number_integer() || x.get<long>() < 0) throw InputError("exponents must be nonnegative integers");
        m.push_back(x.get<unsigned>());
      }
      Polynomial::TermMap one;
      one.emplace(std::move(m), coeff);
      p += Polynomial(d, std::move(one));
    }
    pr.p = std::move(p);
  }
  if (doc.contains("beta")) {
    const auto& b = doc.at("beta");
    // Numbers are re-read from their JSON text so decimals stay exact.
    if (b.is_string()) pr.beta = Beta::parse(b.get<std::string>());
    else if (b.is_number()) pr.beta = Beta::parse(b.dump());
    else throw InputError("'beta' must be a string or a number");
  }
  return pr;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return parse_problem(doc);
}

std::vector<unsigned> default_orders(std::size_t d) {
  switch (d) {
    case 1:
    case 2: return {10, 20, 40, 80};
    case 3: return {10, 20, 30, 60};
    case 4: return {8, 16, 24};
    default: return {2, 4, 6};
  }
}

namespace {

using Clock = std::chrono::steady_clock;

class StageTimer {
 public:
  StageTimer(AnalysisReport& r, std::string name) : report_(r), name_(std::move(name)), start_(Clock::now()) {}
  ~StageTimer() {
    report_.timings_ms[name_] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  AnalysisReport& report_;
  std::string name_;
  Clock::time_point start_;
};

std::string sig17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> strings_of(const std::vector<Rat>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<std::vector<std::string>> strings_of(const RatMatrix& m) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : m) out.push_back(strings_of(row));
  return out;
}

std::vector<std::string> r_names(std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t j = 1; j <= d; ++j) out.push_back("r" + std::to_string(j));
  return out;
}

// Live objects shared by analyze and validate.
struct Analysis {
  std::optional<QuasiRationalSpec> spec;
  /// Estimate for P / P(0); multiply by `normalization` for the input series.
  std::optional<AsymptoticEstimate> estimate;
  double normalization = 1.0;
};

void mark_skipped(AnalysisReport& r, const std::string& section, const std::string& reason) {
  r.skipped[section] = reason;
}

// Loads the input and fills the input echo. Throws on input errors.
QuasiRationalSpec prepare(const JobConfig& config, AnalysisReport& report, double& normalization) {
  Problem pr = load_problem(config.input_path);
  if (config.beta) pr.beta = Beta::parse(*config.beta);
  if (!pr.beta) throw InputError("no beta given in the input file or on the command line");
  auto [pn, c0] = normalize_constant(pr.p);
  const Beta beta = *pr.beta;
  if (c0 > 0) {
    normalization = std::exp(-beta.value() * log_abs(c0));
  } else {
    if (!beta.is_rational() || !is_integer(beta.rational()))
      throw InputError("P(0) < 0 needs an integer beta for a real series");
    normalization = std::exp(-beta.value() * log_abs(c0));
    if (mpz_odd_p(beta.rational().get_num_mpz_t())) normalization = -normalization;
  }
  InputEcho echo;
  echo.polynomial = pr.p.to_string(pr.variables);
  echo.variables = pr.variables;
  echo.beta = beta.to_string();
  echo.d = pr.p.dim();
  echo.constant_term = to_string(c0);
  report.input = echo;
  return QuasiRationalSpec(pn, beta);
}

bool same_torus(const ConePoint& a, const ConePoint& b) {
  const auto ma = a.modulus(), mb = b.modulus();
  for (std::size_t j = 0; j < ma.size(); ++j)
    if (std::fabs(ma[j] - mb[j]) > 1e-8 * std::max(1.0, ma[j])) return false;
  return true;
}

void finish_verdict(AnalysisReport& report, const std::optional<AsymptoticEstimate>& est,
                    const MinimalityCertificate& cert, std::vector<CheckItem> checklist) {
  const Verdict v = verdict(est, cert, std::move(checklist));
  VerdictReport vr;
  vr.status = to_string(v.status);
  vr.reason = to_string(v.reason);
  vr.conditional = v.conditional;
  vr.failed_item = v.failed_item;
  vr.checklist = v.checklist;
  report.verdict = vr;
  switch (v.reason) {
    case InconclusiveReason::None: report.exit_code = exit_code::kSuccess; break;
    case InconclusiveReason::DegenerateGamma: report.exit_code = exit_code::kInconclusive; break;
    case InconclusiveReason::HypothesisFailed:
      report.exit_code = v.failed_item == checks::kRealBase ? exit_code::kInconclusive : exit_code::kMethodInapplicable;
      break;
  }
}

// Runs the analysis stages; returns the live objects for later commands.
Analysis analyze_into(const JobConfig& config, AnalysisReport& report) {
  Analysis live;
  const std::vector<std::string> downstream{"cone", "certificate", "quadratic", "estimate", "verdict"};
  try {
    StageTimer t(report, "normalize");
    live.spec.emplace(prepare(config, report, live.normalization));
  } catch (const std::exception& e) {
    report.exit_code = exit_code::kInputError;
    report.error = e.what();
    mark_skipped(report, "input", "input error");
    for (const auto& s : downstream) mark_skipped(report, s, "input error");
    return live;
  }
  const Polynomial& p = live.spec->polynomial();
  const std::size_t d = p.dim();
  std::vector<CheckItem> checklist;
  MinimalityCertificate cert;

  std::vector<ConePoint> cones;
  try {
    StageTimer t(report, "find_cone_point");
    cones = find_cone_point(p);
  } catch (const MethodInapplicable& e) {
    checklist.push_back({checks::kConeFound, false, e.what()});
    report.error = e.what();
    for (const auto& s : {"cone", "certificate", "quadratic", "estimate"}) mark_skipped(report, s, "no cone point");
    cert.status = MinimalityStatus::NotFalsified;
    finish_verdict(report, std::nullopt, cert, std::move(checklist));
    return live;
  }
  const ConePoint& cone = cones.front();
  checklist.push_back({checks::kConeFound, true, std::to_string(cones.size()) + " candidate(s), " + cone.method});
  checklist.push_back({checks::kConeRational, cone.is_rational(),
                       cone.is_rational() ? "coordinates verified exactly" : "no rational coordinates found"});
  const auto on_torus = std::count_if(cones.begin(), cones.end(), [&](const ConePoint& c) { return same_torus(c, cone); });
  checklist.push_back({checks::kConeUnique, on_torus == 1, std::to_string(on_torus) + " cone point(s) on the torus"});

  ConeReport cr;
  if (cone.exact) {
    cr.exact = strings_of(*cone.exact);
    cr.scaled.assign(d, "1");
    cr.scaled_polynomial = scale_coordinates(p, *cone.exact).to_string();
  }
  for (const auto& z : cone.zstar) cr.zstar.push_back({z.real(), z.imag()});
  cr.xmin = cone.xmin;
  cr.method = cone.method;
  cr.candidates = cones.size();
  report.cone = cr;

  std::size_t smooth = 0;
  {
    StageTimer t(report, "solve_smooth_critical");
    CriticalSearchOptions opts;
    opts.seed = config.seed;
    smooth = solve_smooth_critical(p, cone.modulus(), opts).size();
  }
  checklist.push_back({checks::kNoSmoothCritical, smooth == 0, std::to_string(smooth) + " found"});

  if (!cone.is_rational()) {
    report.error = "cone point is not rational";
    for (const auto& s : {"certificate", "quadratic", "estimate"}) mark_skipped(report, s, "cone point is not rational");
    finish_verdict(report, std::nullopt, cert, std::move(checklist));
    return live;
  }

  {
    StageTimer t(report, "certify_minimality");
    FalsifierOptions opts;
    opts.samples = config.samples;
    opts.seed = config.seed;
    cert = certify_minimality(p, cone, opts);
  }
  CertificateReport cer;
  cer.status = to_string(cert.status);
  cer.samples = cert.samples;
  cer.seed = config.seed;
  cer.min_modulus = cert.min_modulus;
  cer.transform_numerator = cert.transform_numerator.to_string();
  for (const auto& w : cert.witness) cer.witness.push_back({sig17(w.real()), sig17(w.imag())});
  cer.smooth_critical = smooth;
  report.certificate = cer;
  checklist.push_back({checks::kMinimality, cert.status != MinimalityStatus::Falsified,
                       cert.samples == 0 ? to_string(cert.status)
                                         : to_string(cert.status) + ", " + std::to_string(cert.samples) + " samples"});

  std::optional<QuadraticData> qd;
  try {
    StageTimer t(report, "quadratic");
    qd = dual_form(log_hessian(p, cone));
    checklist.push_back({checks::kGradientVanishes, true, "exact"});
  } catch (const MethodInapplicable& e) {
    checklist.push_back({checks::kGradientVanishes, false, e.what()});
    report.error = e.what();
    mark_skipped(report, "quadratic", e.what());
    mark_skipped(report, "estimate", e.what());
    finish_verdict(report, std::nullopt, cert, std::move(checklist));
    return live;
  }
  QuadraticReport qr;
  qr.m = strings_of(qd->m);
  qr.inertia = {qd->inertia.positive, qd->inertia.negative, qd->inertia.zero};
  qr.det = to_string(qd->det);
  qr.minv = strings_of(qd->minv);
  qr.qstar_one = to_string(qd->qstar_one);
  qr.q = form_polynomial(qd->m).to_string(r_names(d));
  qr.qstar = form_polynomial(qd->minv).to_string(r_names(d));
  report.quadratic = qr;

  const bool lorentzian = qd->inertia == Inertia{1, static_cast<int>(d) - 1, 0};
  const int rank = qd->inertia.positive + qd->inertia.negative;
  checklist.push_back({checks::kLorentzian, lorentzian, "inertia " + to_string(qd->inertia)});
  checklist.push_back({checks::kIrreducible, rank >= 3, "rank " + std::to_string(rank)});
  const bool in_cone = lorentzian && diagonal_in_cone(*qd);
  checklist.push_back({checks::kDiagonalInCone, in_cone, "q*(1) = " + to_string(qd->qstar_one)});
  if (!lorentzian || rank < 3 || !in_cone) {
    mark_skipped(report, "estimate", "quadratic hypotheses fail");
    finish_verdict(report, std::nullopt, cert, std::move(checklist));
    return live;
  }

  try {
    StageTimer t(report, "asymptotic_estimate");
    live.estimate = asymptotic_estimate(*live.spec, cone, *qd);
    checklist.push_back({checks::kGammaFinite, true, "Gamma(" + live.estimate->gamma_arg1 + "), Gamma(" +
                                                         live.estimate->gamma_arg2 + ")"});
  } catch (const DegenerateCase& e) {
    checklist.push_back({checks::kGammaFinite, false, e.what()});
    report.error = e.what();
    mark_skipped(report, "estimate", e.what());
    finish_verdict(report, std::nullopt, cert, std::move(checklist));
    return live;
  }
  const auto& est = *live.estimate;
  EstimateReport er;
  er.c_full = est.c_full * live.normalization;
  er.c_exact_square = to_string(est.c_exact_square);
  er.rho = strings_of(est.rho);
  er.alpha = est.alpha ? to_string(*est.alpha) : sig17(est.alpha_value);
  er.gamma_arg1 = est.gamma_arg1;
  er.gamma_arg2 = est.gamma_arg2;
  er.gamma1 = est.gamma1;
  er.gamma2 = est.gamma2;
  er.normalization = live.normalization;
  {
    std::ostringstream f;
    f << sig17(er.c_full) << " * n^(" << er.alpha << ")";
    for (std::size_t j = 0; j < d; ++j) f << " * (" << er.rho[j] << ")^n";
    er.formula = f.str();
  }
  report.estimate = er;
  finish_verdict(report, live.estimate, cert, std::move(checklist));
  return live;
}

AnalysisReport start(const JobConfig& config) {
  AnalysisReport r;
  r.command = to_string(config.command);
  return r;
}

}  // namespace

AnalysisReport cmd_analyze(const JobConfig& config) {
  AnalysisReport report = start(config);
  analyze_into(config, report);
  mark_skipped(report, "validation", "not requested");
  mark_skipped(report, "scan", "not requested");
  return report;
}

AnalysisReport cmd_validate(const JobConfig& config) {
  AnalysisReport report = start(config);
  Analysis live = analyze_into(config, report);
  mark_skipped(report, "scan", "not requested");
  if (!live.estimate) {
    mark_skipped(report, "validation", "no asymptotic estimate");
    return report;
  }
  const auto& est = *live.estimate;
  const std::size_t d = live.spec->dim();
  std::vector<unsigned> orders = config.orders.empty() ? default_orders(d) : config.orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  std::optional<DiagonalSequence> seq;
  try {
    StageTimer t(report, "expand_power");
    const std::vector<unsigned> bounds(d, orders.back());
    seq.emplace(diagonal_of(expand_power(*live.spec, bounds, config.backend)));
  } catch (const CapacityError& e) {
    report.exit_code = exit_code::kInputError;
    report.error = e.what();
    mark_skipped(report, "validation", e.what());
    return report;
  }

  ValidationReport vr;
  vr.backend = to_string(seq->backend());
  const bool scaled = live.normalization != 1.0;
  double last_gap = INFINITY;
  for (unsigned n : orders) {
    ValidationRow row;
    row.n = n;
    if (seq->backend() == Backend::Exact && !scaled) row.empirical = to_string(seq->exact(n));
    else row.empirical = sig17(seq->value(n) * live.normalization);
    if (n > 0) {
      row.predicted = est.predicted(n) * live.normalization;
      const int s = seq->sign(n) * est.sign_predicted(n);
      row.ratio = s * std::exp(seq->log_abs(n) - est.log_abs_predicted(n));
      const double gap = std::fabs(*row.ratio - 1);
      if (gap > last_gap) vr.monotone_tail = false;
      last_gap = gap;
    }
    vr.rows.push_back(std::move(row));
  }
  report.validation = vr;
  return report;
}

AnalysisReport cmd_scan(const JobConfig& config) {
  AnalysisReport report = start(config);
  for (const auto& s : {"cone", "certificate", "quadratic", "estimate", "verdict", "validation"})
    mark_skipped(report, s, "not requested");
  double normalization = 1.0;
  std::optional<QuasiRationalSpec> spec;
  try {
    StageTimer t(report, "normalize");
    spec.emplace(prepare(config, report, normalization));
    if (!spec->beta().is_rational()) throw InputError("scan needs a rational beta");
  } catch (const std::exception& e) {
    report.exit_code = exit_code::kInputError;
    report.error = e.what();
    if (!report.input) mark_skipped(report, "input", "input error");
    mark_skipped(report, "scan", "input error");
    return report;
  }
  ScanReport sr;
  sr.depth = config.scan_depth;
  try {
    StageTimer t(report, "scan");
    const std::vector<unsigned> bounds(spec->dim(), config.scan_depth);
    const auto seq = diagonal_of(expand_power(*spec, bounds, Backend::Exact));
    const int flip = normalization < 0 ? -1 : 1;
    for (std::size_t n = 0; n < seq.size(); ++n) {
      sr.signs.push_back(flip * seq.sign(n));
      if (!sr.first_nonpositive && sr.signs.back() <= 0) sr.first_nonpositive = n;
    }
  } catch (const CapacityError& e) {
    report.exit_code = exit_code::kInputError;
    report.error = e.what();
    mark_skipped(report, "scan", e.what());
    return report;
  }
  report.scan = sr;
  return report;
}

AnalysisReport run(const JobConfig& config) {
  switch (config.command) {
    case Command::Analyze: return cmd_analyze(config);
    case Command::Validate: return cmd_validate(config);
    case Command::Scan: return cmd_scan(config);
  }
  return cmd_analyze(config);
}

void write_report(std::ostream& out, const AnalysisReport& r, OutputFormat format) {
  if (format == OutputFormat::Json) {
    out << json(r).dump(2) << '\n';
    return;
  }
  if (r.validation) {
    out << "n\tempirical\tpredicted\tratio\n";
    for (const auto& row : r.validation->rows)
      out << row.n << '\t' << row.empirical << '\t' << (row.predicted ? sig17(*row.predicted) : "-") << '\t'
          << (row.ratio ? sig17(*row.ratio) : "-") << '\n';
  } else if (r.scan) {
    out << "n\tsign\n";
    for (std::size_t n = 0; n < r.scan->signs.size(); ++n) out << n << '\t' << r.scan->signs[n] << '\n';
  } else if (r.verdict) {
    out << "item\tpassed\tevidence\n";
    for (const auto& c : r.verdict->checklist) out << c.name << '\t' << (c.passed ? "yes" : "no") << '\t' << c.evidence << '\n';
    out << "verdict\t" << r.verdict->status << '\t' << r.verdict->reason << '\n';
  } else {
    out << "error\t" << r.error << '\n';
  }
}

}  // namespace acsv
