#include "acsv/univariate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "acsv/error.hpp"

namespace acsv::univariate {

namespace {

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Coeffs make_monic(Coeffs c) {
  trim(c);
  if (c.empty()) return c;
  const Rat lead = c.back();
  for (auto& v : c) v /= lead;
  return c;
}

}  // namespace

Coeffs from_polynomial(const Polynomial& p) {
  if (p.dim() != 1) throw DimensionError("univariate polynomial expected");
  Coeffs c(p.total_degree() + 1, Rat(0));
  for (const auto& [m, v] : p.terms()) c[m[0]] = v;
  trim(c);
  return c;
}

Polynomial to_polynomial(const Coeffs& c) {
  Polynomial::TermMap terms;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) terms.emplace(Monomial{static_cast<unsigned>(k)}, c[k]);
  return Polynomial(1, std::move(terms));
}

int degree(const Coeffs& c) { return static_cast<int>(c.size()) - 1; }

Coeffs derivative(const Coeffs& c) {
  Coeffs d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<long>(k));
  trim(d);
  return d;
}

Rat evaluate(const Coeffs& c, const Rat& t) {
  Rat acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
  return acc;
}

std::pair<Coeffs, Coeffs> divide(const Coeffs& a, const Coeffs& b_in) {
  Coeffs b = b_in;
  trim(b);
  if (b.empty()) throw DomainError("division by the zero polynomial");
  Coeffs rem = a;
  trim(rem);
  if (rem.size() < b.size()) return {Coeffs{}, rem};
  Coeffs quot(rem.size() - b.size() + 1, Rat(0));
  while (!rem.empty() && rem.size() >= b.size()) {
    const std::size_t shift = rem.size() - b.size();
    const Rat f = rem.back() / b.back();
    quot[shift] = f;
    for (std::size_t k = 0; k < b.size(); ++k) rem[shift + k] -= f * b[k];
    trim(rem);
  }
  trim(quot);
  return {quot, rem};
}

Coeffs gcd(Coeffs a, Coeffs b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a));
}

Coeffs squarefree_part(const Coeffs& a) {
  Coeffs g = gcd(a, derivative(a));
  if (g.empty()) return make_monic(a);
  return make_monic(divide(a, g).first);
}

std::vector<Complex> numeric_roots(const Coeffs& c_in) {
  Coeffs c = c_in;
  trim(c);
  const int n = degree(c);
  if (n < 1) return {};
  const long double lead = c.back().get_d();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i].get_d() / static_cast<double>(lead);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> roots;
  for (int i = 0; i < n; ++i) {
    std::complex<long double> x(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
    for (int it = 0; it < 50; ++it) {
      std::complex<long double> f = 0, df = 0;
      for (int k = n; k >= 0; --k) {
        df = df * x + f;
        f = f * x + static_cast<long double>(c[k].get_d());
      }
      if (std::abs(df) == 0) break;
      auto step = f / df;
      x -= step;
      if (std::abs(step) <= 1e-18L * std::max<long double>(1, std::abs(x))) break;
    }
    roots.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  }
  return roots;
}

std::vector<Rat> rational_roots(const Coeffs& squarefree) {
  Coeffs c = squarefree;
  trim(c);
  if (degree(c) < 1) return {};
  // Scale to a primitive integer polynomial; a rational root p/q then has q | lead.
  mpz_class lcm_den = 1;
  for (const auto& v : c) lcm_den = lcm(lcm_den, v.get_den());
  std::vector<mpz_class> ints;
  for (const auto& v : c) ints.push_back(mpz_class(v * Rat(lcm_den)));
  mpz_class content = 0;
  for (const auto& v : ints) content = gcd(content, v);
  const mpz_class lead = abs(ints.back() / content);

  std::vector<Rat> found;
  for (const Complex& x : numeric_roots(c)) {
    if (std::fabs(x.imag()) > 1e-6 * std::max(1.0, std::abs(x))) continue;
    mpf_class scaled(x.real(), 128);
    scaled *= mpf_class(lead, 128);
    mpz_class nearest(floor(scaled + 0.5));
    Rat t(nearest, lead);
    t.canonicalize();
    if (evaluate(c, t) == 0 && std::find(found.begin(), found.end(), t) == found.end()) found.push_back(t);
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace acsv::univariate
