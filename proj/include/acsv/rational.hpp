#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace acsv {

/// Exact rational number, always canonical (lowest terms, positive denominator).
using Rat = mpq_class;

Rat make_rat(long num, long den = 1);

/// Accepts "n", "n/d" and decimal forms such as "-0.55" or "1.5e-3".
/// Decimals are converted exactly, so "0.55" becomes 11/20.
Rat parse_rat(std::string_view text);

/// "num/den", with the denominator omitted when it is 1.
std::string to_string(const Rat& r);

double to_double(const Rat& r);

/// log|r| without overflow for huge numerators or denominators. r != 0.
double log_abs(const Rat& r);

inline int sign(const Rat& r) { return sgn(r); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

}  // namespace acsv
