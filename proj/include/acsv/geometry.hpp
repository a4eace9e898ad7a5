#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acsv/error.hpp"
#include "acsv/polynomial.hpp"

namespace acsv {

/// A point of V_P where P and its whole gradient vanish.
struct ConePoint {
  /// Coordinates when rational (verified exactly); otherwise empty.
  std::optional<std::vector<Rat>> exact;
  std::vector<Complex> zstar;
  /// Diagonal parameter when found on the diagonal (Z* = (t*, ..., t*)).
  std::optional<Rat> tstar;
  /// ReLog(Z*).
  std::vector<double> xmin;
  /// How the point was found ("diagonal-double-root" or "newton") and the
  /// numeric size of P and its gradient there.
  std::string method;
  double value_modulus = 0.0;
  double gradient_norm = 0.0;

  bool is_rational() const { return exact.has_value(); }
  std::vector<double> modulus() const;
};

struct ConeSearchOptions {
  unsigned seeds = 512;
  std::uint64_t seed = 42;
  double tolerance = 1e-12;
  double dedupe_radius = 1e-8;
  /// Largest denominator tried when snapping a Newton solution to rationals.
  long max_denominator = 10000;
};

/// Cone points sorted by max_j |Z*_j| ascending. Symmetric P get an exact
/// search along the diagonal (double roots of P(t,...,t)); every P also gets
/// a Newton multistart on {P = 0, grad P = 0}, which is not complete.
/// Throws MethodInapplicable when nothing is found.
std::vector<ConePoint> find_cone_point(const Polynomial& p, const ConeSearchOptions& options = {});

struct SmoothCriticalPoint {
  std::vector<Complex> z;
  /// |P(Z)| followed by |Z_1 dP/dZ_1 - Z_k dP/dZ_k| for k = 2..d.
  std::vector<double> residuals;
  double gradient_norm = 0.0;

  double max_residual() const;
};

struct CriticalSearchOptions {
  unsigned seeds = 512;
  std::uint64_t seed = 42;
  double tolerance = 1e-12;
  double dedupe_radius = 1e-8;
  double modulus_tolerance = 1e-6;
  /// Gradients smaller than this are treated as singular points.
  double min_gradient = 1e-6;
  unsigned max_iterations = 200;
};

/// Solutions of P = 0, Z_j dP/dZ_j = Z_k dP/dZ_k with nonzero gradient whose
/// coordinate moduli match `torus_modulus`.
std::vector<SmoothCriticalPoint> solve_smooth_critical(const Polynomial& p, std::span<const double> torus_modulus,
                                                       const CriticalSearchOptions& options = {});

/// Numerator of P(1 + 1/Z_1, ..., 1 + 1/Z_d) after multiplying by
/// prod_j Z_j^(deg_j P). A zero of P in the open unit polydisk corresponds to
/// a zero of this numerator with Re Z_j < -1/2 for every j.
Polynomial mobius_numerator(const Polynomial& p);

enum class PatternResult { Proven, Unknown };

/// Proven when the numerator is a same-sign combination of degree-1
/// monomials: its real part then has a fixed strict sign on Re Z_j < -1/2.
PatternResult pattern_lemma_check(const Polynomial& numerator);

struct Elimination {
  Polynomial num;
  Polynomial den;
};

/// Solves numerator = 0 for the variable with 0-based index j, which must
/// appear with degree exactly 1: Z_j = num / den.
Elimination eliminate_variable(const Polynomial& numerator, std::size_t j);

enum class MinimalityStatus { ProvenByPattern, NotFalsified, Falsified };

std::string to_string(MinimalityStatus s);

struct MinimalityCertificate {
  MinimalityStatus status = MinimalityStatus::NotFalsified;
  std::size_t samples = 0;
  /// Smallest |P| observed by the falsifier and where.
  double min_modulus = 0.0;
  std::vector<Complex> argmin;
  /// Interior zero of P, when Falsified.
  std::vector<Complex> witness;
  Polynomial transform_numerator{1};
};

struct FalsifierOptions {
  std::size_t samples = 4096;
  std::uint64_t seed = 42;
  std::size_t starts = 100;
  unsigned descent_iterations = 200;
  /// |P(witness)| must fall below this.
  double witness_tolerance = 1e-12;
  /// Witness coordinates must satisfy |w_j| <= (1 - margin) |Z*_j|.
  double interior_margin = 1e-4;
};

/// Checks that P has no zero in the open polydisk {|Z_j| < |Z*_j|}.
MinimalityCertificate certify_minimality(const Polynomial& p, const ConePoint& cone,
                                         const FalsifierOptions& options = {});

}  // namespace acsv
