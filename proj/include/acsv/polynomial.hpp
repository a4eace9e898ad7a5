#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acsv/rational.hpp"

namespace acsv {

using Complex = std::complex<double>;

/// Exponent tuple of a monomial; its length is the ambient dimension.
using Monomial = std::vector<unsigned>;

unsigned total_degree(const Monomial& m);

/// Graded order used for canonical printing: lower total degree first, then
/// lexicographically larger exponent vectors first (Z1 before Z2).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Values are immutable once built; every operation returns a new
/// polynomial. No stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rat, GradedLexLess>;

  explicit Polynomial(std::size_t dim);
  Polynomial(std::size_t dim, TermMap terms);

  static Polynomial constant(std::size_t dim, const Rat& c);
  /// The coordinate function Z_{j+1} (0-based index).
  static Polynomial variable(std::size_t dim, std::size_t j);

  std::size_t dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  Rat coefficient(const Monomial& m) const;
  Rat constant_term() const;
  unsigned total_degree() const;
  unsigned degree_in(std::size_t j) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rat& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rat& c) { return a *= c; }
  friend Polynomial operator*(const Rat& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned k) const;

  /// Exact value at a rational point.
  Rat evaluate(std::span<const Rat> point) const;
  /// Floating value at a complex point.
  Complex evaluate(std::span<const Complex> point) const;

  /// Canonical text, e.g. `1 - 2/3*Z1 + 1/3*Z1*Z2`. Default names are Z1..Zd.
  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_dim(const Polynomial& other) const;

  std::size_t dim_;
  TermMap terms_;
};

std::vector<std::string> default_variable_names(std::size_t dim);

/// Parses a `+ - * / ^` expression over the given variable names. Division is
/// only allowed by a nonzero constant, which covers literals like `3/4`.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables);

/// Formal derivative with respect to the variable with 0-based index j.
Polynomial partial_derivative(const Polynomial& p, std::size_t j);

/// P(c_1 Z_1, ..., c_d Z_d).
Polynomial scale_coordinates(const Polynomial& p, std::span<const Rat> factors);

/// p(t) = P(t, ..., t) as a dim-1 polynomial.
Polynomial diagonal_restriction(const Polynomial& p);

bool is_symmetric(const Polynomial& p);

/// (P / P(0), P(0)).
std::pair<Polynomial, Rat> normalize_constant(const Polynomial& p);

/// Double-precision copy of a polynomial for fast repeated complex evaluation.
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const Polynomial& p);

  std::size_t dim() const { return dim_; }
  Complex evaluate(std::span<const Complex> z) const;
  /// Value and gradient in one pass; `grad` must have length dim.
  Complex evaluate_with_gradient(std::span<const Complex> z, std::span<Complex> grad) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coeffs_;
  std::vector<unsigned> exps_;  // row-major, dim_ per term
  unsigned max_exp_ = 0;
};

}  // namespace acsv
