#include "acsv/polynomial.hpp"

#include <algorithm>
#include <numeric>

#include "acsv/error.hpp"

namespace acsv {

unsigned total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); }

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Polynomial::Polynomial(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DimensionError("polynomial dimension must be positive");
}

Polynomial::Polynomial(std::size_t dim, TermMap terms) : Polynomial(dim) {
  for (auto& [m, c] : terms) {
    if (m.size() != dim) throw DimensionError("monomial length does not match dimension");
    if (c != 0) terms_.emplace(m, c);
  }
}

Polynomial Polynomial::constant(std::size_t dim, const Rat& c) {
  Polynomial p(dim);
  if (c != 0) p.terms_.emplace(Monomial(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t j) {
  if (j >= dim) throw DimensionError("variable index out of range");
  Polynomial p(dim);
  Monomial m(dim, 0);
  m[j] = 1;
  p.terms_.emplace(std::move(m), Rat(1));
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && acsv::total_degree(terms_.begin()->first) == 0);
}

Rat Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

Rat Polynomial::constant_term() const { return coefficient(Monomial(dim_, 0)); }

unsigned Polynomial::total_degree() const {
  // Graded order: the last term has the largest degree.
  return terms_.empty() ? 0 : acsv::total_degree(terms_.rbegin()->first);
}

unsigned Polynomial::degree_in(std::size_t j) const {
  if (j >= dim_) throw DimensionError("variable index out of range");
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[j]);
  return d;
}

void Polynomial::check_dim(const Polynomial& other) const {
  if (other.dim_ != dim_) throw DimensionError("polynomial dimensions differ");
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_dim(other);
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial& Polynomial::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_dim(b);
  Polynomial r(a.dim_);
  Monomial m(a.dim_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      auto [it, inserted] = r.terms_.try_emplace(m, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(dim_, 1);
  Polynomial base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return result;
}

Rat Polynomial::evaluate(std::span<const Rat> point) const {
  if (point.size() != dim_) throw DimensionError("evaluation point has wrong length");
  Rat sum = 0;
  Rat term;
  for (const auto& [m, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (m[i] == 0) continue;
      Rat pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), m[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), m[i]);
      term *= pw;
    }
    sum += term;
  }
  return sum;
}

Complex Polynomial::evaluate(std::span<const Complex> point) const {
  return NumericPolynomial(*this).evaluate(point);
}

std::vector<std::string> default_variable_names(std::size_t dim) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) names.push_back("Z" + std::to_string(i + 1));
  return names;
}

std::string Polynomial::to_string(const std::vector<std::string>& names_in) const {
  const auto names = names_in.empty() ? default_variable_names(dim_) : names_in;
  if (names.size() != dim_) throw DimensionError("variable name list has wrong length");
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat mag = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += acsv::to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += acsv::to_string(mag) + "*" + mono;
    }
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& p, std::size_t j) {
  if (j >= p.dim()) throw DimensionError("derivative index out of range");
  Polynomial::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    if (m[j] == 0) continue;
    Monomial dm = m;
    dm[j] -= 1;
    out.emplace(std::move(dm), c * m[j]);
  }
  return Polynomial(p.dim(), std::move(out));
}

Polynomial scale_coordinates(const Polynomial& p, std::span<const Rat> factors) {
  if (factors.size() != p.dim()) throw DimensionError("scaling vector has wrong length");
  for (const auto& f : factors)
    if (f == 0) throw DomainError("scaling factor must be nonzero");
  Polynomial::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    Rat v = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      Rat pw;
      mpz_pow_ui(pw.get_num_mpz_t(), factors[i].get_num_mpz_t(), m[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), factors[i].get_den_mpz_t(), m[i]);
      pw.canonicalize();
      v *= pw;
    }
    out.emplace(m, v);
  }
  return Polynomial(p.dim(), std::move(out));
}

Polynomial diagonal_restriction(const Polynomial& p) {
  Polynomial::TermMap out;
  for (const auto& [m, c] : p.terms()) {
    auto [it, inserted] = out.try_emplace(Monomial{total_degree(m)}, c);
    if (!inserted) it->second += c;
  }
  return Polynomial(1, std::move(out));
}

bool is_symmetric(const Polynomial& p) {
  for (std::size_t i = 0; i + 1 < p.dim(); ++i) {
    for (const auto& [m, c] : p.terms()) {
      Monomial sm = m;
      std::swap(sm[i], sm[i + 1]);
      if (p.coefficient(sm) != c) return false;
    }
  }
  return true;
}

std::pair<Polynomial, Rat> normalize_constant(const Polynomial& p) {
  Rat c0 = p.constant_term();
  if (c0 == 0) throw DomainError("constant term is zero; P^(-beta) is not analytic at the origin");
  return {p * Rat(1 / c0), c0};
}

NumericPolynomial::NumericPolynomial(const Polynomial& p) : dim_(p.dim()) {
  coeffs_.reserve(p.size());
  exps_.reserve(p.size() * dim_);
  for (const auto& [m, c] : p.terms()) {
    coeffs_.push_back(to_double(c));
    exps_.insert(exps_.end(), m.begin(), m.end());
    for (unsigned e : m) max_exp_ = std::max(max_exp_, e);
  }
}

namespace {

// powers[i * (max_exp + 1) + k] = z_i^k
void fill_powers(std::span<const Complex> z, unsigned max_exp, std::vector<Complex>& powers) {
  const std::size_t stride = max_exp + 1;
  powers.resize(z.size() * stride);
  for (std::size_t i = 0; i < z.size(); ++i) {
    powers[i * stride] = 1.0;
    for (unsigned k = 1; k <= max_exp; ++k) powers[i * stride + k] = powers[i * stride + k - 1] * z[i];
  }
}

}  // namespace

Complex NumericPolynomial::evaluate(std::span<const Complex> z) const {
  if (z.size() != dim_) throw DimensionError("evaluation point has wrong length");
  thread_local std::vector<Complex> powers;
  fill_powers(z, max_exp_, powers);
  const std::size_t stride = max_exp_ + 1;
  Complex sum = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    Complex term = coeffs_[t];
    const unsigned* e = &exps_[t * dim_];
    for (std::size_t i = 0; i < dim_; ++i)
      if (e[i]) term *= powers[i * stride + e[i]];
    sum += term;
  }
  return sum;
}

Complex NumericPolynomial::evaluate_with_gradient(std::span<const Complex> z, std::span<Complex> grad) const {
  if (z.size() != dim_ || grad.size() != dim_) throw DimensionError("evaluation point has wrong length");
  thread_local std::vector<Complex> powers;
  fill_powers(z, max_exp_, powers);
  const std::size_t stride = max_exp_ + 1;
  std::fill(grad.begin(), grad.end(), Complex(0.0));
  Complex sum = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    const unsigned* e = &exps_[t * dim_];
    Complex term = coeffs_[t];
    for (std::size_t i = 0; i < dim_; ++i)
      if (e[i]) term *= powers[i * stride + e[i]];
    sum += term;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (e[j] == 0) continue;
      Complex g = coeffs_[t] * static_cast<double>(e[j]);
      for (std::size_t i = 0; i < dim_; ++i) {
        unsigned k = i == j ? e[i] - 1 : e[i];
        if (k) g *= powers[i * stride + k];
      }
      grad[j] += g;
    }
  }
  return sum;
}

}  // namespace acsv
