#include "acsv/rational.hpp"

#include <cctype>
#include <cmath>

#include "acsv/error.hpp"

namespace acsv {

Rat make_rat(long num, long den) {
  if (den == 0) throw DomainError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

mpz_class parse_digits(std::string_view s, std::size_t offset) {
  if (s.empty()) throw ParseError("expected digits", offset);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) throw ParseError("expected digit", offset + i);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  std::size_t end = text.size();
  while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  std::string_view s = text.substr(pos, end - pos);
  if (s.empty()) throw ParseError("empty number", pos);

  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    i = 1;
  }
  Rat result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_digits(s.substr(i, slash - i), pos + i);
    mpz_class den = parse_digits(s.substr(slash + 1), pos + slash + 1);
    if (den == 0) throw ParseError("zero denominator", pos + slash + 1);
    result = Rat(num, den);
    result.canonicalize();
  } else {
    std::size_t epos = s.find_first_of("eE");
    std::string_view mantissa = s.substr(i, (epos == std::string_view::npos ? s.size() : epos) - i);
    long exponent = 0;
    if (epos != std::string_view::npos) {
      std::string_view es = s.substr(epos + 1);
      bool eneg = false;
      std::size_t k = 0;
      if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
        eneg = es[0] == '-';
        k = 1;
      }
      mpz_class e = parse_digits(es.substr(k), pos + epos + 1 + k);
      if (!e.fits_slong_p() || abs(e) > 100000) throw ParseError("exponent too large", pos + epos);
      exponent = e.get_si() * (eneg ? -1 : 1);
    }
    std::size_t dot = mantissa.find('.');
    std::string digits;
    long frac_len = 0;
    if (dot == std::string_view::npos) {
      digits = std::string(mantissa);
    } else {
      digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
      frac_len = static_cast<long>(mantissa.size() - dot - 1);
    }
    mpz_class num = parse_digits(digits, pos + i);
    long scale = exponent - frac_len;
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    result = scale >= 0 ? Rat(num * p) : Rat(num, p);
    result.canonicalize();
  }
  return negative ? Rat(-result) : result;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

double to_double(const Rat& r) { return r.get_d(); }

double log_abs(const Rat& r) {
  if (r == 0) throw DomainError("log of zero");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  return std::log(std::fabs(mn)) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

}  // namespace acsv
