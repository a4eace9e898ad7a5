#include <cmath>
#include <numbers>

#include "acsv/error.hpp"
#include "acsv/series.hpp"

namespace acsv {

Complex continued_log(const NumericPolynomial& p, std::span<const Complex> z) {
  std::vector<Complex> point(z.size());
  for (unsigned steps = 16; steps <= (1u << 16); steps *= 2) {
    Complex log_sum = 0.0;
    Complex prev = 1.0;
    bool ok = true;
    for (unsigned k = 1; k <= steps; ++k) {
      const double t = static_cast<double>(k) / steps;
      for (std::size_t i = 0; i < z.size(); ++i) point[i] = t * z[i];
      const Complex cur = p.evaluate(point);
      if (cur == 0.0) throw DomainError("P vanishes on the segment from the origin");
      const Complex step = std::log(cur / prev);
      if (std::fabs(step.imag()) > std::numbers::pi / 2) {
        ok = false;
        break;
      }
      log_sum += step;
      prev = cur;
    }
    if (ok) return log_sum;
  }
  throw DomainError("could not track the branch of log P");
}

namespace {

Complex integer_power(Complex base, long k) {
  Complex result = 1.0;
  bool invert = k < 0;
  unsigned long e = static_cast<unsigned long>(invert ? -k : k);
  while (e) {
    if (e & 1ul) result *= base;
    e >>= 1ul;
    if (e) base *= base;
  }
  return invert ? 1.0 / result : result;
}

}  // namespace

CauchyResult cauchy_coefficient(const QuasiRationalSpec& spec, std::span<const unsigned> r,
                                std::span<const double> radius_in, unsigned grid, const CauchyOptions& options) {
  const std::size_t d = spec.dim();
  if (r.size() != d || radius_in.size() != d) throw DimensionError("index or radius has wrong length");
  if (grid < 8) throw DomainError("quadrature grid must have at least 8 points per axis");
  for (double rho : radius_in)
    if (!(rho > 0)) throw DomainError("quadrature radius must be positive");

  const NumericPolynomial p(spec.polynomial());
  const Beta& beta = spec.beta();
  const bool integer_beta = beta.is_rational() && is_integer(beta.rational());
  const long int_beta = integer_beta ? beta.rational().get_num().get_si() : 0;

  std::vector<Complex> roots_of_unity(grid);
  for (unsigned k = 0; k < grid; ++k)
    roots_of_unity[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / grid);

  std::vector<double> radius(radius_in.begin(), radius_in.end());
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    std::vector<unsigned> node(d, 0);
    std::vector<Complex> z(d);
    Complex sum = 0.0;
    bool collided = false;
    for (;;) {
      // e^{-i r.theta} at this node is the conjugate root power.
      Complex phase = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        z[i] = radius[i] * roots_of_unity[node[i]];
        phase *= std::conj(roots_of_unity[(static_cast<std::size_t>(r[i]) * node[i]) % grid]);
      }
      const Complex pz = p.evaluate(z);
      if (std::abs(pz) < options.collision_tolerance) {
        collided = true;
        break;
      }
      const Complex f = integer_beta ? integer_power(pz, -int_beta) : std::exp(-beta.value() * continued_log(p, z));
      sum += f * phase;

      std::size_t i = d;
      while (i-- > 0) {
        if (++node[i] < grid) break;
        node[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    if (!collided) {
      double scale = std::pow(static_cast<double>(grid), -static_cast<double>(d));
      for (std::size_t i = 0; i < d; ++i) scale *= std::pow(radius[i], -static_cast<double>(r[i]));
      return {sum * scale, radius, attempt};
    }
    for (double& rho : radius) rho *= options.shrink_factor;
  }
  throw DomainError("P vanishes at a quadrature node after " + std::to_string(options.max_retries) +
                    " radius reductions");
}

}  // namespace acsv
