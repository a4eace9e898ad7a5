#pragma once

#include <random>
#include <string>
#include <vector>

#include "acsv/polynomial.hpp"

namespace acsv::testing {

inline std::vector<std::string> vars(std::size_t d) { return default_variable_names(d); }

// Three-variable example in original coordinates and after Z -> (2/3) Z.
inline Polynomial ex1_original() {
  return parse_polynomial("1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)", vars(3));
}
inline Polynomial ex1_scaled() {
  return parse_polynomial("1 - 2/3*(Z1+Z2+Z3) + 1/3*(Z1*Z2+Z1*Z3+Z2*Z3)", vars(3));
}

// Four-variable example in original coordinates and after Z -> (3/8) Z.
inline Polynomial ex2_original() {
  return parse_polynomial("1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)", vars(4));
}
inline Polynomial ex2_scaled() {
  return parse_polynomial("1 - 3/8*(Z1+Z2+Z3+Z4) + 1/8*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)", vars(4));
}

inline Rat random_rat(std::mt19937_64& rng, long max_num = 9, long max_den = 6) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  Rat r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Rat random_nonzero_rat(std::mt19937_64& rng) {
  for (;;) {
    Rat r = random_rat(rng);
    if (r != 0) return r;
  }
}

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t dim, unsigned max_terms = 5,
                                    unsigned max_exp = 3) {
  std::uniform_int_distribution<unsigned> nterms(0, max_terms);
  std::uniform_int_distribution<unsigned> ex(0, max_exp);
  Polynomial p(dim);
  for (unsigned t = nterms(rng); t > 0; --t) {
    Polynomial::TermMap one;
    Monomial m(dim);
    for (auto& e : m) e = ex(rng);
    one.emplace(m, random_nonzero_rat(rng));
    p += Polynomial(dim, one);
  }
  return p;
}

// Symmetric polynomial 1 + sum_k c_k e_k(Z) + c' p_2(Z) with small rational
// coefficients; e_k are elementary symmetric, p_2 the power sum of squares.
inline Polynomial random_symmetric(std::mt19937_64& rng, std::size_t dim) {
  Polynomial p = Polynomial::constant(dim, 1);
  for (std::size_t k = 1; k <= dim; ++k) {
    Rat c = random_rat(rng, 4, 4);
    if (c == 0) continue;
    Polynomial ek(dim);
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
      Polynomial::TermMap one;
      Monomial m(dim, 0);
      for (std::size_t i = 0; i < dim; ++i) m[i] = (mask >> i) & 1u;
      one.emplace(m, Rat(1));
      ek += Polynomial(dim, one);
    }
    p += ek * c;
  }
  Rat c2 = random_rat(rng, 3, 4);
  for (std::size_t i = 0; i < dim; ++i) p += Polynomial::variable(dim, i).pow(2) * c2;
  return p;
}

}  // namespace acsv::testing
