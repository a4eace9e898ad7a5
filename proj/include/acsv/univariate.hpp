#pragma once

#include <vector>

#include "acsv/polynomial.hpp"

namespace acsv::univariate {

/// Dense coefficients, lowest degree first, no trailing zeros. Empty is 0.
using Coeffs = std::vector<Rat>;

Coeffs from_polynomial(const Polynomial& p);
Polynomial to_polynomial(const Coeffs& c);

int degree(const Coeffs& c);
Coeffs derivative(const Coeffs& c);
Rat evaluate(const Coeffs& c, const Rat& t);
/// Quotient and remainder of a by b (b nonzero).
std::pair<Coeffs, Coeffs> divide(const Coeffs& a, const Coeffs& b);
/// Monic gcd; gcd(0, 0) = 0.
Coeffs gcd(Coeffs a, Coeffs b);
/// a / gcd(a, a'), monic.
Coeffs squarefree_part(const Coeffs& a);

/// Numeric roots via the companion matrix, polished by Newton steps.
std::vector<Complex> numeric_roots(const Coeffs& c);

/// Exact rational roots of a squarefree polynomial, found by rounding the
/// numeric roots onto the lattice allowed by the leading coefficient.
std::vector<Rat> rational_roots(const Coeffs& squarefree);

}  // namespace acsv::univariate
