#include "acsv/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "acsv/univariate.hpp"

namespace acsv {

std::vector<double> ConePoint::modulus() const {
  std::vector<double> m;
  for (const auto& z : zstar) m.push_back(std::abs(z));
  return m;
}

double SmoothCriticalPoint::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

namespace {

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

double max_modulus(const std::vector<Complex>& z) {
  double m = 0;
  for (const auto& v : z) m = std::max(m, std::abs(v));
  return m;
}

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool lex_less(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// Value, gradient and Hessian of P at z.
struct Derivatives {
  explicit Derivatives(const Polynomial& p) : value(p) {
    for (std::size_t j = 0; j < p.dim(); ++j) partials.emplace_back(partial_derivative(p, j));
  }

  Complex eval(std::span<const Complex> z, VectorXc& grad, MatrixXc& hess) const {
    const std::size_t d = partials.size();
    grad.resize(d);
    hess.resize(d, d);
    std::vector<Complex> row(d);
    for (std::size_t j = 0; j < d; ++j) {
      grad[j] = partials[j].evaluate_with_gradient(z, row);
      for (std::size_t k = 0; k < d; ++k) hess(j, k) = row[k];
    }
    return value.evaluate(z);
  }

  NumericPolynomial value;
  std::vector<NumericPolynomial> partials;
};

std::vector<Complex> random_seed_point(std::mt19937_64& rng, std::span<const double> modulus) {
  std::uniform_real_distribution<double> log_mod(std::log(0.25), std::log(4.0));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> z(modulus.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double r = modulus[i] * std::exp(log_mod(rng));
    z[i] = std::polar(r, angle(rng));
  }
  return z;
}

// Best rational approximation with bounded denominator (continued fractions).
std::optional<Rat> snap_rational(double x, long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(rem);
    if (std::fabs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return make_rat(h1, k1);
    const double frac = rem - a;
    if (frac == 0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

bool exact_cone(const Polynomial& p, const std::vector<Rat>& z) {
  if (p.evaluate(z) != 0) return false;
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (partial_derivative(p, j).evaluate(z) != 0) return false;
  return true;
}

ConePoint make_cone(std::vector<Complex> z, std::string method, const Derivatives& der) {
  ConePoint c;
  VectorXc g;
  MatrixXc h;
  c.value_modulus = std::abs(der.eval(z, g, h));
  c.gradient_norm = g.norm();
  for (const auto& v : z) c.xmin.push_back(std::log(std::abs(v)));
  c.zstar = std::move(z);
  c.method = std::move(method);
  return c;
}

// Gauss-Newton on the overdetermined system {P = 0, grad P = 0}.
std::optional<std::vector<Complex>> newton_singular(const Derivatives& der, std::vector<Complex> z,
                                                    double tol) {
  const std::size_t d = z.size();
  VectorXc g;
  MatrixXc h;
  VectorXc f(d + 1);
  MatrixXc jac(d + 1, d);
  for (int it = 0; it < 100; ++it) {
    const Complex v = der.eval(z, g, h);
    f[0] = v;
    f.tail(d) = g;
    if (!f.allFinite()) return std::nullopt;
    if (f.cwiseAbs().maxCoeff() <= tol) return z;
    jac.row(0) = g.transpose();
    jac.bottomRows(d) = h;
    VectorXc step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    for (std::size_t i = 0; i < d; ++i) z[i] += step[i];
    if (max_modulus(z) > 1e8) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ConePoint> find_cone_point(const Polynomial& p, const ConeSearchOptions& options) {
  const std::size_t d = p.dim();
  const Derivatives der(p);
  std::vector<ConePoint> found;
  auto already = [&](const std::vector<Complex>& z) {
    return std::any_of(found.begin(), found.end(),
                       [&](const ConePoint& c) { return distance(c.zstar, z) <= 1e-6 * std::max(1.0, max_modulus(z)); });
  };

  if (is_symmetric(p) && !p.is_constant()) {
    namespace uv = univariate;
    const auto diag = uv::from_polynomial(diagonal_restriction(p));
    const auto g = uv::gcd(diag, uv::derivative(diag));
    if (uv::degree(g) >= 1) {
      const auto sq = uv::squarefree_part(g);
      const auto rational = uv::rational_roots(sq);
      for (const Rat& t : rational) {
        if (t == 0) continue;
        std::vector<Rat> zr(d, t);
        if (!exact_cone(p, zr)) continue;
        ConePoint c = make_cone(std::vector<Complex>(d, Complex(to_double(t), 0.0)), "diagonal-double-root", der);
        c.exact = std::move(zr);
        c.tstar = t;
        found.push_back(std::move(c));
      }
      for (const Complex& t : uv::numeric_roots(sq)) {
        if (std::abs(t) == 0) continue;
        std::vector<Complex> z(d, t);
        if (already(z)) continue;
        ConePoint c = make_cone(std::move(z), "diagonal-double-root", der);
        if (c.value_modulus <= 1e-9 && c.gradient_norm <= 1e-9) found.push_back(std::move(c));
      }
    }
  }

  if (!p.is_constant()) {
    std::mt19937_64 rng(options.seed);
    const std::vector<double> unit(d, 1.0);
    for (unsigned s = 0; s < options.seeds; ++s) {
      auto seed = random_seed_point(rng, unit);
      auto sol = newton_singular(der, std::move(seed), options.tolerance);
      if (!sol || already(*sol)) continue;
      if (std::any_of(sol->begin(), sol->end(), [](const Complex& v) { return std::abs(v) == 0; })) continue;
      std::vector<Rat> zr;
      for (const auto& v : *sol) {
        if (std::fabs(v.imag()) > 1e-9) break;
        auto r = snap_rational(v.real(), options.max_denominator, 1e-9);
        if (!r) break;
        zr.push_back(*r);
      }
      if (zr.size() == d && exact_cone(p, zr)) {
        std::vector<Complex> z;
        for (const auto& r : zr) z.emplace_back(to_double(r), 0.0);
        if (already(z)) continue;
        ConePoint c = make_cone(std::move(z), "newton", der);
        c.exact = std::move(zr);
        found.push_back(std::move(c));
      } else {
        found.push_back(make_cone(std::move(*sol), "newton", der));
      }
    }
  }

  std::erase_if(found, [](const ConePoint& c) {
    return std::any_of(c.zstar.begin(), c.zstar.end(), [](const Complex& v) { return std::abs(v) == 0; });
  });
  if (found.empty()) throw MethodInapplicable("no cone point found; method inapplicable");
  std::sort(found.begin(), found.end(), [](const ConePoint& a, const ConePoint& b) {
    const double ma = max_modulus(a.zstar), mb = max_modulus(b.zstar);
    if (ma != mb) return ma < mb;
    return lex_less(a.zstar, b.zstar);
  });
  return found;
}

std::vector<SmoothCriticalPoint> solve_smooth_critical(const Polynomial& p, std::span<const double> torus_modulus,
                                                       const CriticalSearchOptions& options) {
  const std::size_t d = p.dim();
  if (torus_modulus.size() != d) throw DimensionError("torus modulus has wrong length");
  const Derivatives der(p);
  std::mt19937_64 rng(options.seed);
  std::vector<SmoothCriticalPoint> out;

  auto residual = [&](const std::vector<Complex>& z, VectorXc& f, MatrixXc& jac, VectorXc& g) {
    MatrixXc h;
    const Complex v = der.eval(z, g, h);
    f.resize(d);
    jac.resize(d, d);
    f[0] = v;
    jac.row(0) = g.transpose();
    for (std::size_t k = 1; k < d; ++k) {
      f[k] = z[0] * g[0] - z[k] * g[k];
      for (std::size_t m = 0; m < d; ++m) {
        Complex e = z[0] * h(0, m) - z[k] * h(k, m);
        if (m == 0) e += g[0];
        if (m == k) e -= g[k];
        jac(k, m) = e;
      }
    }
  };

  VectorXc f, g;
  MatrixXc jac;
  for (unsigned s = 0; s < options.seeds; ++s) {
    std::vector<Complex> z = random_seed_point(rng, torus_modulus);
    // Keep stepping after the residual test passes: near a singular root the
    // residual is quadratic in the distance, so only the step size tells
    // whether the iterate has settled.
    bool converged = false;
    for (unsigned it = 0; it < options.max_iterations; ++it) {
      residual(z, f, jac, g);
      if (!f.allFinite()) break;
      converged = f.cwiseAbs().maxCoeff() <= options.tolerance;
      VectorXc step = jac.completeOrthogonalDecomposition().solve(-f);
      if (!step.allFinite()) break;
      for (std::size_t i = 0; i < d; ++i) z[i] += step[i];
      if (max_modulus(z) > 1e8) {
        converged = false;
        break;
      }
      if (converged && step.norm() <= 1e-15 * std::max(1.0, max_modulus(z))) break;
    }
    residual(z, f, jac, g);
    converged = converged && f.allFinite() && f.cwiseAbs().maxCoeff() <= options.tolerance;
    if (!converged) continue;
    if (g.norm() < options.min_gradient) continue;
    bool on_torus = true;
    for (std::size_t i = 0; i < d; ++i)
      on_torus = on_torus && std::fabs(std::abs(z[i]) - torus_modulus[i]) <= options.modulus_tolerance;
    if (!on_torus) continue;
    if (std::any_of(out.begin(), out.end(),
                    [&](const SmoothCriticalPoint& c) { return distance(c.z, z) <= options.dedupe_radius; }))
      continue;
    SmoothCriticalPoint c;
    c.residuals.reserve(d);
    for (std::size_t k = 0; k < d; ++k) c.residuals.push_back(std::abs(f[k]));
    c.gradient_norm = g.norm();
    c.z = std::move(z);
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return lex_less(a.z, b.z); });
  return out;
}

Polynomial mobius_numerator(const Polynomial& p) {
  const std::size_t d = p.dim();
  std::vector<unsigned> deg(d);
  std::vector<std::vector<Polynomial>> one_plus(d), plain(d);
  for (std::size_t j = 0; j < d; ++j) {
    deg[j] = p.degree_in(j);
    const Polynomial zj = Polynomial::variable(d, j);
    const Polynomial shifted = Polynomial::constant(d, 1) + zj;
    one_plus[j].push_back(Polynomial::constant(d, 1));
    plain[j].push_back(Polynomial::constant(d, 1));
    for (unsigned k = 1; k <= deg[j]; ++k) {
      one_plus[j].push_back(one_plus[j].back() * shifted);
      plain[j].push_back(plain[j].back() * zj);
    }
  }
  Polynomial result(d);
  for (const auto& [m, c] : p.terms()) {
    Polynomial term = Polynomial::constant(d, c);
    for (std::size_t j = 0; j < d; ++j) term = term * one_plus[j][m[j]] * plain[j][deg[j] - m[j]];
    result += term;
  }
  return result;
}

PatternResult pattern_lemma_check(const Polynomial& numerator) {
  if (numerator.is_zero()) return PatternResult::Unknown;
  const int s = sgn(numerator.terms().begin()->second);
  for (const auto& [m, c] : numerator.terms()) {
    if (total_degree(m) != 1 || sgn(c) != s) return PatternResult::Unknown;
  }
  return PatternResult::Proven;
}

Elimination eliminate_variable(const Polynomial& numerator, std::size_t j) {
  if (j >= numerator.dim()) throw DimensionError("variable index out of range");
  if (numerator.degree_in(j) != 1) throw DomainError("variable must appear with degree exactly 1");
  Polynomial::TermMap linear, rest;
  for (const auto& [m, c] : numerator.terms()) {
    if (m[j] == 1) {
      Monomial reduced = m;
      reduced[j] = 0;
      linear.emplace(std::move(reduced), c);
    } else {
      rest.emplace(m, c);
    }
  }
  return {-Polynomial(numerator.dim(), std::move(rest)), Polynomial(numerator.dim(), std::move(linear))};
}

std::string to_string(MinimalityStatus s) {
  switch (s) {
    case MinimalityStatus::ProvenByPattern:
      return "ProvenByPattern";
    case MinimalityStatus::NotFalsified:
      return "NotFalsified";
    case MinimalityStatus::Falsified:
      return "Falsified";
  }
  return "?";
}

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0, f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151};

}  // namespace

MinimalityCertificate certify_minimality(const Polynomial& p, const ConePoint& cone,
                                         const FalsifierOptions& options) {
  const std::size_t d = p.dim();
  if (cone.zstar.size() != d) throw DimensionError("cone point has wrong length");
  if (2 * d > std::size(kPrimes)) throw DimensionError("dimension too large for the Halton sampler");
  MinimalityCertificate cert;
  cert.transform_numerator = Polynomial(d);

  if (cone.exact) {
    std::vector<Rat> radii;
    for (const auto& z : *cone.exact) radii.push_back(abs(z));
    cert.transform_numerator = mobius_numerator(scale_coordinates(p, radii));
    if (pattern_lemma_check(cert.transform_numerator) == PatternResult::Proven) {
      cert.status = MinimalityStatus::ProvenByPattern;
      return cert;
    }
  }

  const NumericPolynomial np(p);
  const std::vector<double> radius = cone.modulus();
  std::vector<double> cap(d);
  for (std::size_t i = 0; i < d; ++i) cap[i] = (1.0 - options.interior_margin) * radius[i];

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(2 * d);
  for (auto& s : shift) s = unit(rng);

  struct Sample {
    double modulus;
    std::vector<Complex> z;
  };
  std::vector<Sample> samples;
  samples.reserve(options.samples);
  for (std::size_t k = 0; k < options.samples; ++k) {
    std::vector<Complex> z(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double u = std::fmod(radical_inverse(k + 1, kPrimes[2 * i]) + shift[2 * i], 1.0);
      const double v = std::fmod(radical_inverse(k + 1, kPrimes[2 * i + 1]) + shift[2 * i + 1], 1.0);
      z[i] = std::polar(radius[i] * std::sqrt(u), 2.0 * std::numbers::pi * v);
    }
    samples.push_back({std::abs(np.evaluate(z)), std::move(z)});
  }
  cert.samples = samples.size();

  const std::size_t starts = std::min(options.starts, samples.size());
  std::partial_sort(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(starts), samples.end(),
                    [](const Sample& a, const Sample& b) { return a.modulus < b.modulus; });

  double best = samples.empty() ? std::abs(np.evaluate(std::vector<Complex>(d))) : samples.front().modulus;
  std::vector<Complex> best_point = samples.empty() ? std::vector<Complex>(d) : samples.front().z;

  auto project = [&](std::vector<Complex>& z) {
    for (std::size_t i = 0; i < d; ++i)
      if (std::abs(z[i]) > cap[i]) z[i] *= cap[i] / std::abs(z[i]);
  };

  std::vector<Complex> grad(d), trial(d);
  for (std::size_t s = 0; s < starts; ++s) {
    std::vector<Complex> z = samples[s].z;
    project(z);
    Complex val = np.evaluate_with_gradient(z, grad);
    for (unsigned it = 0; it < options.descent_iterations; ++it) {
      if (std::abs(val) < options.witness_tolerance * 1e-2) break;
      double gn = 0;
      for (const auto& g : grad) gn += std::norm(g);
      if (gn == 0) break;
      bool improved = false;
      for (double alpha = 1.0; alpha > 1e-9; alpha *= 0.5) {
        for (std::size_t i = 0; i < d; ++i) trial[i] = z[i] - alpha * val * std::conj(grad[i]) / gn;
        project(trial);
        if (std::abs(np.evaluate(trial)) < std::abs(val)) {
          z = trial;
          val = np.evaluate_with_gradient(z, grad);
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (std::abs(val) < best) {
      best = std::abs(val);
      best_point = z;
    }
  }

  cert.min_modulus = best;
  cert.argmin = best_point;
  bool interior = true;
  for (std::size_t i = 0; i < d; ++i) interior = interior && std::abs(best_point[i]) <= cap[i];
  if (best < options.witness_tolerance && interior) {
    cert.status = MinimalityStatus::Falsified;
    cert.witness = best_point;
  } else {
    cert.status = MinimalityStatus::NotFalsified;
  }
  return cert;
}

}  // namespace acsv
