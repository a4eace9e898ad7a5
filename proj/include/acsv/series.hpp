#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "acsv/polynomial.hpp"
#include "acsv/rational.hpp"

namespace acsv {

/// The exponent beta of F = P^(-beta). Rational when known exactly; an
/// irrational value is carried as a double only.
class Beta {
 public:
  static Beta exact(const Rat& value);
  static Beta approximate(double value);
  /// "num/den" or a decimal; decimals are read exactly.
  static Beta parse(const std::string& text);

  bool is_rational() const { return rational_.has_value(); }
  const Rat& rational() const;
  double value() const { return value_; }
  std::string to_string() const;

 private:
  std::optional<Rat> rational_;
  double value_ = 0.0;
};

/// F = P^(-beta) with P(0) = 1 and beta not in {0, -1, -2, ...}.
class QuasiRationalSpec {
 public:
  QuasiRationalSpec(Polynomial p, Beta beta, std::optional<std::vector<Rat>> scaling = std::nullopt);

  const Polynomial& polynomial() const { return p_; }
  const Beta& beta() const { return beta_; }
  std::size_t dim() const { return p_.dim(); }
  /// Coordinate scaling already applied to reach this P, if any.
  const std::optional<std::vector<Rat>>& scaling() const { return scaling_; }

 private:
  Polynomial p_;
  Beta beta_;
  std::optional<std::vector<Rat>> scaling_;
};

enum class Backend { Exact, Float };

std::string to_string(Backend b);

/// Dense truncated power series: coefficients a_r for 0 <= r_j <= bounds_j.
class SeriesBox {
 public:
  SeriesBox(std::vector<unsigned> bounds, Backend backend);

  std::size_t dim() const { return bounds_.size(); }
  const std::vector<unsigned>& bounds() const { return bounds_; }
  Backend backend() const { return backend_; }
  std::size_t size() const { return size_; }

  std::size_t index(std::span<const unsigned> r) const;
  bool contains(std::span<const unsigned> r) const;

  /// Exact coefficient; exact backend only.
  const Rat& exact(std::span<const unsigned> r) const;
  /// Coefficient as a double on either backend.
  double value(std::span<const unsigned> r) const;

  const std::vector<Rat>& exact_values() const { return exact_; }
  const std::vector<double>& float_values() const { return approx_; }

 private:
  friend class SeriesFiller;

  std::vector<unsigned> bounds_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  Backend backend_;
  std::vector<Rat> exact_;
  std::vector<double> approx_;
};

struct ExpandOptions {
  /// Axis used by the recurrence whenever r has a positive entry there.
  std::size_t preferred_axis = 0;
  std::size_t max_coefficients = std::size_t{1} << 27;
};

/// Fills the box through the recurrence obtained from
/// P * (Z_j dF/dZ_j) = -beta * (Z_j dP/dZ_j) * F, in graded order.
/// An irrational beta forces the float backend.
SeriesBox expand_power(const QuasiRationalSpec& spec, std::span<const unsigned> bounds,
                       Backend backend = Backend::Exact, const ExpandOptions& options = {});

/// Sum_k binom(-beta, k) (P - 1)^k truncated at total degree D, computed by
/// direct polynomial powering. Needs rational beta.
Polynomial brute_force_oracle(const QuasiRationalSpec& spec, unsigned total_degree, unsigned degree_cap = 8);

class DiagonalSequence {
 public:
  DiagonalSequence(Backend backend, std::vector<Rat> exact, std::vector<double> approx);

  Backend backend() const { return backend_; }
  std::size_t size() const { return backend_ == Backend::Exact ? exact_.size() : approx_.size(); }
  const Rat& exact(std::size_t n) const;
  double value(std::size_t n) const;
  /// Sign of the n-th term; exact on the exact backend.
  int sign(std::size_t n) const;
  /// log|a_n|, safe for terms beyond double range.
  double log_abs(std::size_t n) const;

 private:
  Backend backend_;
  std::vector<Rat> exact_;
  std::vector<double> approx_;
};

DiagonalSequence diagonal_of(const SeriesBox& box);

/// Smallest n with a_n <= 0, if any.
std::optional<std::size_t> positivity_scan(const DiagonalSequence& seq);

struct CauchyOptions {
  double shrink_factor = 0.9;
  int max_retries = 5;
  /// |P(node)| below this counts as a collision with the singular variety.
  double collision_tolerance = 1e-12;
};

struct CauchyResult {
  Complex value;
  std::vector<double> radius_used;
  int retries = 0;
};

/// Equal-angle product trapezoidal rule for the Cauchy integral of
/// F(Z) / Z^(r+1) over the torus with the given polyradius.
CauchyResult cauchy_coefficient(const QuasiRationalSpec& spec, std::span<const unsigned> r,
                                std::span<const double> radius, unsigned grid,
                                const CauchyOptions& options = {});

/// log P(z) on the branch continuous along the segment from the origin,
/// where P(0) = 1. Requires P to be nonzero on that segment.
Complex continued_log(const NumericPolynomial& p, std::span<const Complex> z);

/// One row per nonzero coefficient: `r_1 ... r_d<TAB>value`.
void write_box_tsv(std::ostream& out, const SeriesBox& box);
/// `n<TAB>value` rows.
void write_diagonal_tsv(std::ostream& out, const DiagonalSequence& seq);

}  // namespace acsv
