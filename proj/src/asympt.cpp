#include "acsv/asympt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "acsv/error.hpp"

namespace acsv {

RatMatrix identity_matrix(std::size_t n) {
  RatMatrix m(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  RatMatrix c(n, std::vector<Rat>(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RatMatrix transpose(const RatMatrix& a) {
  if (a.empty()) return {};
  RatMatrix t(a[0].size(), std::vector<Rat>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Rat quadratic_form(const RatMatrix& m, std::span<const Rat> r) {
  if (r.size() != m.size()) throw DimensionError("quadratic form: vector length does not match the matrix");
  Rat acc = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) acc += r[i] * m[i][j] * r[j];
  return acc;
}

Polynomial form_polynomial(const RatMatrix& m) {
  const std::size_t n = m.size();
  Polynomial q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q += Polynomial::variable(n, i) * Polynomial::variable(n, j) * m[i][j];
  return q;
}

RatMatrix log_hessian(const Polynomial& p, const ConePoint& cone) {
  if (!cone.is_rational()) throw MethodInapplicable("cone point is not rational");
  const auto& z = *cone.exact;
  const std::size_t d = p.dim();
  if (z.size() != d) throw DimensionError("cone point dimension does not match the polynomial");
  if (p.evaluate(z) != 0) throw MethodInapplicable("P does not vanish at the cone point");
  std::vector<Polynomial> grad;
  for (std::size_t j = 0; j < d; ++j) {
    grad.push_back(partial_derivative(p, j));
    if (grad[j].evaluate(z) != 0) throw MethodInapplicable("gradient does not vanish at the cone point");
  }
  RatMatrix m(d, std::vector<Rat>(d, Rat(0)));
  bool nonzero = false;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j; k < d; ++k) {
      // The first-order term Z_j dP/dZ_j on the diagonal is zero here.
      Rat v = partial_derivative(grad[j], k).evaluate(z) * z[j] * z[k] / 2;
      m[j][k] = m[k][j] = v;
      nonzero = nonzero || v != 0;
    }
  if (!nonzero) throw MethodInapplicable("quadratic part of P vanishes at the cone point");
  return m;
}

std::string to_string(const Inertia& in) {
  return "(" + std::to_string(in.positive) + ", " + std::to_string(in.negative) + ", " + std::to_string(in.zero) + ")";
}

Congruence diagonalize_congruence(const RatMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw DimensionError("square matrix expected");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw DomainError("symmetric matrix expected");

  RatMatrix a = m;
  RatMatrix s = identity_matrix(n);
  auto swap_index = [&](std::size_t i, std::size_t k) {
    std::swap(a[i], a[k]);
    for (auto& row : a) std::swap(row[i], row[k]);
    for (auto& row : s) std::swap(row[i], row[k]);
  };
  // Column i += column j, row i += row j.
  auto add_into = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) a[r][i] += a[r][j];
    for (std::size_t c = 0; c < n; ++c) a[i][c] += a[j][c];
    for (auto& row : s) row[i] += row[j];
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] == 0) {
      std::size_t k = i + 1;
      while (k < n && a[k][k] == 0) ++k;
      if (k < n) {
        swap_index(i, k);
      } else {
        std::size_t j = i + 1;
        while (j < n && a[i][j] == 0) ++j;
        if (j == n) continue;
        add_into(i, j);  // a[i][i] becomes 2 a[i][j] since a[j][j] = 0
      }
    }
    const Rat pivot = a[i][i];
    for (std::size_t k = i + 1; k < n; ++k) {
      if (a[k][i] == 0) continue;
      const Rat f = a[k][i] / pivot;
      for (std::size_t r = 0; r < n; ++r) a[r][k] -= f * a[r][i];
      for (std::size_t c = 0; c < n; ++c) a[k][c] -= f * a[i][c];
      for (auto& row : s) row[k] -= f * row[i];
    }
  }

  Congruence out;
  out.transform = std::move(s);
  for (std::size_t i = 0; i < n; ++i) {
    out.diagonal.push_back(a[i][i]);
    const int sg = sgn(a[i][i]);
    if (sg > 0) ++out.inertia.positive;
    else if (sg < 0) ++out.inertia.negative;
    else ++out.inertia.zero;
  }
  return out;
}

Inertia inertia(const RatMatrix& m) { return diagonalize_congruence(m).inertia; }

QuadraticData dual_form(const RatMatrix& m) {
  const std::size_t n = m.size();
  QuadraticData qd;
  qd.m = m;
  qd.inertia = inertia(m);
  if (qd.inertia.zero != 0) throw MethodInapplicable("quadratic form is degenerate");

  // Clear denominators, then run fraction-free Gauss-Jordan on [N | I].
  mpz_class scale = 1;
  for (const auto& row : m)
    for (const auto& v : row) scale = lcm(scale, v.get_den());
  std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = mpz_class(m[i][j] * Rat(scale));
    a[i][n + i] = 1;
  }
  mpz_class prev = 1;
  int swaps = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) throw MethodInapplicable("quadratic form is degenerate");
      std::swap(a[k], a[r]);
      ++swaps;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        mpz_class t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = t;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  // Left block is prev * I and the right block is prev * N^(-1).
  const mpz_class det_n = swaps % 2 ? mpz_class(-prev) : prev;
  mpz_class scale_pow;
  mpz_pow_ui(scale_pow.get_mpz_t(), scale.get_mpz_t(), n);
  qd.det = Rat(det_n) / Rat(scale_pow);
  qd.minv.assign(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat v(a[i][n + j] * scale, prev);
      v.canonicalize();
      qd.minv[i][j] = v;
    }
  if (multiply(m, qd.minv) != identity_matrix(n)) throw std::logic_error("dual_form: inverse check failed");
  const std::vector<Rat> ones(n, Rat(1));
  qd.qstar_one = quadratic_form(qd.minv, ones);
  return qd;
}

bool diagonal_in_cone(const QuadraticData& qd) {
  const int d = static_cast<int>(qd.m.size());
  if (!(qd.inertia == Inertia{1, d - 1, 0}))
    throw MethodInapplicable("inertia " + to_string(qd.inertia) + " is not Lorentzian");
  return qd.qstar_one > 0;
}

double gamma_value(double x) {
  if (x <= 0 && std::floor(x) == x) throw DegenerateCase("Gamma pole at " + std::to_string(x));
  return std::tgamma(x);
}

double gamma_value(const Rat& x) {
  if (x <= 0 && is_integer(x)) throw DegenerateCase("Gamma pole at " + to_string(x));
  return std::tgamma(to_double(x));
}

double AsymptoticEstimate::log_abs_predicted(unsigned n) const {
  double acc = std::log(std::fabs(c_full)) + alpha_value * std::log(static_cast<double>(n));
  for (const auto& r : rho) acc += static_cast<double>(n) * log_abs(r);
  return acc;
}

int AsymptoticEstimate::sign_predicted(unsigned n) const {
  int s = sign();
  for (const auto& r : rho)
    if (sgn(r) < 0 && n % 2 == 1) s = -s;
  return s;
}

double AsymptoticEstimate::predicted(unsigned n) const { return sign_predicted(n) * std::exp(log_abs_predicted(n)); }

AsymptoticEstimate asymptotic_estimate(const QuasiRationalSpec& spec, const ConePoint& cone, const QuadraticData& qd) {
  const std::size_t d = qd.m.size();
  if (!cone.is_rational()) throw MethodInapplicable("cone point is not rational");
  if (!diagonal_in_cone(qd)) throw MethodInapplicable("q*(1) is not positive");
  const Rat radicand = (d % 2 == 1 ? Rat(1) : Rat(-1)) * qd.det;
  // For Lorentzian inertia the sign of det is (-1)^(d-1), so this cannot fail.
  if (radicand <= 0) throw MethodInapplicable("determinant has the wrong sign");

  AsymptoticEstimate est;
  const Beta& beta = spec.beta();
  const double b = beta.value();
  const double dd = static_cast<double>(d);
  if (beta.is_rational()) {
    const Rat br = beta.rational();
    const Rat arg2 = br + 1 - make_rat(static_cast<long>(d), 2);
    est.gamma_arg1 = to_string(br);
    est.gamma_arg2 = to_string(arg2);
    est.gamma1 = gamma_value(br);
    est.gamma2 = gamma_value(arg2);
    est.alpha = 2 * br - static_cast<long>(d);
  } else {
    est.gamma_arg1 = beta.to_string();
    est.gamma_arg2 = std::to_string(b + 1 - dd / 2);
    est.gamma1 = gamma_value(b);
    est.gamma2 = gamma_value(b + 1 - dd / 2);
  }
  est.alpha_value = 2 * b - dd;
  est.c_exact_square = 1 / radicand;
  est.qstar_one = qd.qstar_one;
  for (const auto& z : *cone.exact) {
    if (z == 0) throw MethodInapplicable("cone point has a zero coordinate");
    est.rho.push_back(1 / z);
  }
  const double log_c = -0.5 * log_abs(radicand) + (b - dd / 2) * log_abs(qd.qstar_one) - (2 * b - 1) * std::log(2.0) -
                       (dd / 2 - 1) * std::log(std::numbers::pi) - std::log(std::fabs(est.gamma1)) -
                       std::log(std::fabs(est.gamma2));
  const int sign_c = (est.gamma1 < 0 ? -1 : 1) * (est.gamma2 < 0 ? -1 : 1);
  est.c_full = sign_c * std::exp(log_c);
  return est;
}

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::UltimatelyPositive: return "UltimatelyPositive";
    case VerdictStatus::UltimatelyNegative: return "UltimatelyNegative";
    case VerdictStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::None: return "none";
    case InconclusiveReason::DegenerateGamma: return "DegenerateGamma";
    case InconclusiveReason::HypothesisFailed: return "HypothesisFailed";
  }
  return "?";
}

Verdict verdict(const std::optional<AsymptoticEstimate>& est, const MinimalityCertificate& cert,
                std::vector<CheckItem> checklist) {
  Verdict v;
  bool has_minimality = false;
  for (const auto& item : checklist) has_minimality = has_minimality || item.name == checks::kMinimality;
  if (est && !has_minimality) {
    checklist.push_back({checks::kMinimality, cert.status != MinimalityStatus::Falsified,
                         to_string(cert.status) + ", " + std::to_string(cert.samples) + " samples"});
  }
  if (est) {
    bool real_base = true;
    int negatives = 0;
    for (const auto& r : est->rho) negatives += sgn(r) < 0;
    real_base = negatives % 2 == 0;
    checklist.push_back({checks::kRealBase, real_base, "rho has " + std::to_string(negatives) + " negative entries"});
  }
  v.checklist = std::move(checklist);

  for (const auto& item : v.checklist) {
    if (item.passed) continue;
    v.failed_item = item.name;
    v.reason = item.name == checks::kGammaFinite ? InconclusiveReason::DegenerateGamma
                                                 : InconclusiveReason::HypothesisFailed;
    return v;
  }
  if (!est) {
    v.reason = InconclusiveReason::HypothesisFailed;
    return v;
  }
  v.conditional = cert.status == MinimalityStatus::NotFalsified;
  v.status = est->sign() > 0 ? VerdictStatus::UltimatelyPositive : VerdictStatus::UltimatelyNegative;
  return v;
}

}  // namespace acsv
