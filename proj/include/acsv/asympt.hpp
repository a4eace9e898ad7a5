#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acsv/geometry.hpp"
#include "acsv/rational.hpp"
#include "acsv/series.hpp"

namespace acsv {

/// Dense square matrix of rationals, row-major rows.
using RatMatrix = std::vector<std::vector<Rat>>;

RatMatrix identity_matrix(std::size_t n);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
RatMatrix transpose(const RatMatrix& a);
/// r^T M r.
Rat quadratic_form(const RatMatrix& m, std::span<const Rat> r);
/// r^T M r as a polynomial in r_1..r_n.
Polynomial form_polynomial(const RatMatrix& m);

/// Matrix of the quadratic part of w -> P(Z* exp(w)) at w = 0, so that the
/// leading homogeneous part is q(w) = w^T M w. Requires a rational cone point
/// with vanishing gradient and a nonzero quadratic part.
RatMatrix log_hessian(const Polynomial& p, const ConePoint& cone);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;

  friend bool operator==(const Inertia&, const Inertia&) = default;
};

std::string to_string(const Inertia& in);

struct Congruence {
  /// S with S^T M S = diag(diagonal).
  RatMatrix transform;
  std::vector<Rat> diagonal;
  Inertia inertia;
};

/// Lagrange reduction by symmetric row/column operations over the rationals.
/// A zero pivot with a nonzero entry in its row is repaired by adding that
/// row and column into the pivot position first.
Congruence diagonalize_congruence(const RatMatrix& m);

Inertia inertia(const RatMatrix& m);

struct QuadraticData {
  RatMatrix m;
  Inertia inertia;
  Rat det;
  /// Matrix of the dual form q*.
  RatMatrix minv;
  /// q*(1, ..., 1).
  Rat qstar_one;
};

/// Exact determinant and inverse by fraction-free elimination. A singular
/// matrix raises MethodInapplicable.
QuadraticData dual_form(const RatMatrix& m);

/// True iff q*(1) > 0. Requires inertia (1, d-1, 0).
bool diagonal_in_cone(const QuadraticData& qd);

/// Gamma function; a pole raises DegenerateCase.
double gamma_value(double x);
/// Exact pole detection: x is a pole iff it is an integer <= 0.
double gamma_value(const Rat& x);

struct AsymptoticEstimate {
  /// Leading constant including the q*(1)^(beta - d/2) factor.
  double c_full = 0.0;
  /// ((-1)^(d-1) det M)^(-1): the exact square of the determinant factor.
  Rat c_exact_square;
  /// Per-variable exponential bases 1 / Z*_j.
  std::vector<Rat> rho;
  /// Exponent of n, 2 beta - d; exact when beta is rational.
  std::optional<Rat> alpha;
  double alpha_value = 0.0;
  Rat qstar_one;
  /// (beta, beta + 1 - d/2) as printed strings and values.
  std::string gamma_arg1, gamma_arg2;
  double gamma1 = 0.0, gamma2 = 0.0;

  int sign() const { return (c_full > 0) - (c_full < 0); }
  /// log |predicted(n)| for n >= 1.
  double log_abs_predicted(unsigned n) const;
  /// Sign of predicted(n).
  int sign_predicted(unsigned n) const;
  double predicted(unsigned n) const;
};

/// a_(n,...,n) ~ C_full * n^(2 beta - d) * prod_j (1/Z*_j)^n, with
/// C_full = ((-1)^(d-1) det M)^(-1/2) q*(1)^(beta - d/2)
///          / (2^(2 beta - 1) pi^(d/2 - 1) Gamma(beta) Gamma(beta + 1 - d/2)).
/// Raises DegenerateCase on a Gamma pole and MethodInapplicable when the
/// quadratic hypotheses fail.
AsymptoticEstimate asymptotic_estimate(const QuasiRationalSpec& spec, const ConePoint& cone, const QuadraticData& qd);

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string evidence;
};

enum class VerdictStatus { UltimatelyPositive, UltimatelyNegative, Inconclusive };

enum class InconclusiveReason { None, DegenerateGamma, HypothesisFailed };

std::string to_string(VerdictStatus s);
std::string to_string(InconclusiveReason r);

struct Verdict {
  VerdictStatus status = VerdictStatus::Inconclusive;
  InconclusiveReason reason = InconclusiveReason::None;
  /// Set when minimality was only not falsified.
  bool conditional = false;
  /// Name of the failing checklist item, if any.
  std::string failed_item;
  std::vector<CheckItem> checklist;
};

namespace checks {
inline constexpr const char* kConeFound = "cone point found";
inline constexpr const char* kConeRational = "cone point rational";
inline constexpr const char* kConeUnique = "cone point unique on its torus";
inline constexpr const char* kGradientVanishes = "gradient vanishes";
inline constexpr const char* kNoSmoothCritical = "no smooth critical point on the torus";
inline constexpr const char* kMinimality = "minimality";
inline constexpr const char* kLorentzian = "Lorentzian signature";
inline constexpr const char* kIrreducible = "irreducible quadratic";
inline constexpr const char* kDiagonalInCone = "q*(1) > 0";
inline constexpr const char* kGammaFinite = "Gamma finite";
inline constexpr const char* kRealBase = "non-oscillating exponential base";
}  // namespace checks

/// Combines the checklist with the minimality certificate. The estimate is
/// absent whenever an earlier stage failed; the certificate is only added to
/// the checklist when the estimate is present and the item is missing.
Verdict verdict(const std::optional<AsymptoticEstimate>& est, const MinimalityCertificate& cert,
                std::vector<CheckItem> checklist);

}  // namespace acsv
