#include <cmath>
#include <sstream>

#include "acsv/error.hpp"
#include "acsv/series.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace acsv;
using namespace acsv::testing;

namespace {

Rat R(long n, long d = 1) { return make_rat(n, d); }

QuasiRationalSpec spec_of(const Polynomial& p, const Rat& beta) { return QuasiRationalSpec(p, Beta::exact(beta)); }

// Every coefficient of total degree <= D must match between the recurrence
// and the direct expansion.
void check_oracle_equivalence(const QuasiRationalSpec& spec, unsigned degree) {
  const std::size_t d = spec.dim();
  std::vector<unsigned> bounds(d, degree);
  auto box = expand_power(spec, bounds);
  auto oracle = brute_force_oracle(spec, degree);
  std::vector<unsigned> r(d, 0);
  for (;;) {
    if (total_degree(r) <= degree) REQUIRE(box.exact(r) == oracle.coefficient(r));
    std::size_t i = d;
    while (i-- > 0) {
      if (++r[i] <= degree) break;
      r[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
}

}  // namespace

TEST_CASE("Beta and input validation") {
  CHECK(Beta::parse("0.55").rational() == R(11, 20));
  CHECK(Beta::parse("7/3").to_string() == "7/3");
  CHECK_FALSE(Beta::approximate(std::sqrt(2.0)).is_rational());
  CHECK_THROWS_AS(spec_of(ex1_scaled(), R(0)), DomainError);
  CHECK_THROWS_AS(spec_of(ex1_scaled(), R(-2)), DomainError);
  CHECK_THROWS_AS(QuasiRationalSpec(ex1_scaled(), Beta::approximate(-1.0)), DomainError);
  CHECK_THROWS_AS(spec_of(parse_polynomial("2 - Z1", vars(1)), R(1)), DomainError);
  CHECK_NOTHROW(spec_of(ex1_scaled(), R(-1, 2)));
}

TEST_CASE("expand_power on the worked examples") {
  auto box1 = expand_power(spec_of(ex1_original(), R(1)), std::vector<unsigned>{1, 1, 1});
  CHECK(box1.exact(std::vector<unsigned>{0, 0, 0}) == 1);
  CHECK(box1.exact(std::vector<unsigned>{1, 1, 1}) == R(3, 2));

  auto box2 = expand_power(spec_of(ex2_original(), R(1)), std::vector<unsigned>{1, 1, 1, 1});
  CHECK(box2.exact(std::vector<unsigned>{1, 1, 1, 1}) == R(136, 27));

  auto geo = expand_power(spec_of(parse_polynomial("1 - Z1", vars(1)), R(1)), std::vector<unsigned>{7});
  for (unsigned n = 0; n <= 7; ++n) CHECK(geo.exact(std::vector<unsigned>{n}) == 1);
}

TEST_CASE("expand_power errors") {
  auto spec = spec_of(ex1_scaled(), R(1));
  ExpandOptions small;
  small.max_coefficients = 100;
  CHECK_THROWS_AS(expand_power(spec, std::vector<unsigned>{5, 5, 5}, Backend::Exact, small), CapacityError);
  CHECK_THROWS_AS(expand_power(spec, std::vector<unsigned>{5, 5}), DimensionError);
}

TEST_CASE("brute_force_oracle") {
  auto o = brute_force_oracle(spec_of(ex1_original(), R(1)), 3);
  CHECK(o.coefficient({1, 1, 1}) == R(3, 2));
  auto o0 = brute_force_oracle(spec_of(ex2_original(), R(7, 3)), 0);
  CHECK(o0 == Polynomial::constant(4, 1));
  auto geo = brute_force_oracle(spec_of(parse_polynomial("1 - Z1", vars(1)), R(1)), 5);
  for (unsigned n = 0; n <= 5; ++n) CHECK(geo.coefficient({n}) == 1);
  CHECK_THROWS_AS(brute_force_oracle(spec_of(ex1_original(), R(1)), 9), CapacityError);
  CHECK_THROWS_AS(brute_force_oracle(QuasiRationalSpec(ex1_original(), Beta::approximate(std::sqrt(2.0))), 2),
                  DomainError);
}

TEST_CASE("oracle equivalence: worked examples") {
  for (const Rat& beta : {R(1, 2), R(1), R(2), R(7, 3)}) {
    check_oracle_equivalence(spec_of(ex1_original(), beta), 6);
    check_oracle_equivalence(spec_of(ex1_scaled(), beta), 6);
    check_oracle_equivalence(spec_of(ex2_original(), beta), 6);
  }
}

TEST_CASE("oracle equivalence: random symmetric polynomials") {
  std::mt19937_64 rng(42);
  const Rat betas[] = {R(1, 2), R(1), R(2), R(7, 3)};
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 2;
    check_oracle_equivalence(spec_of(random_symmetric(rng, d), betas[trial % 4]), 6);
  }
}

TEST_CASE("diagonal and positivity scan") {
  auto box = expand_power(spec_of(ex1_original(), R(1)), std::vector<unsigned>{30, 30, 30});
  auto diag = diagonal_of(box);
  CHECK(diag.size() == 31);
  CHECK(diag.exact(0) == 1);
  CHECK(diag.exact(1) == R(3, 2));
  CHECK_FALSE(positivity_scan(diag).has_value());

  DiagonalSequence tiny(Backend::Exact, {R(1), R(-1)}, {});
  CHECK(positivity_scan(tiny) == std::optional<std::size_t>(1));

  auto ragged = expand_power(spec_of(ex1_original(), R(1)), std::vector<unsigned>{2, 3, 2});
  CHECK_THROWS_AS(diagonal_of(ragged), DimensionError);

  auto box2 = expand_power(spec_of(ex2_original(), R(1)), std::vector<unsigned>{1, 1, 1, 1});
  CHECK(diagonal_of(box2).exact(1) == R(136, 27));
}

TEST_CASE("four-variable diagonal positive up to 20") {
  auto box = expand_power(spec_of(ex2_original(), R(1)), std::vector<unsigned>{20, 20, 20, 20});
  CHECK_FALSE(positivity_scan(diagonal_of(box)).has_value());
}

TEST_CASE("axis independence of the recurrence") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto spec = spec_of(random_symmetric(rng, 3), trial % 2 ? R(7, 3) : R(1, 2));
    ExpandOptions a, b;
    a.preferred_axis = 0;
    b.preferred_axis = 2;
    std::vector<unsigned> bounds{4, 3, 5};
    CHECK(expand_power(spec, bounds, Backend::Exact, a).exact_values() ==
          expand_power(spec, bounds, Backend::Exact, b).exact_values());
  }
}

TEST_CASE("scaling covariance of coefficients") {
  const Rat c = R(2, 3);
  auto base = expand_power(spec_of(ex1_original(), R(7, 3)), std::vector<unsigned>{6, 6, 6});
  auto scaled = expand_power(spec_of(scale_coordinates(ex1_original(), std::vector<Rat>(3, c)), R(7, 3)),
                             std::vector<unsigned>{6, 6, 6});
  std::vector<unsigned> r(3);
  for (r[0] = 0; r[0] <= 6; ++r[0])
    for (r[1] = 0; r[1] <= 6; ++r[1])
      for (r[2] = 0; r[2] <= 6; ++r[2]) {
        Rat factor;
        mpz_pow_ui(factor.get_num_mpz_t(), c.get_num_mpz_t(), total_degree(r));
        mpz_pow_ui(factor.get_den_mpz_t(), c.get_den_mpz_t(), total_degree(r));
        REQUIRE(scaled.exact(r) == factor * base.exact(r));
      }
}

TEST_CASE("float backend agrees with exact backend") {
  auto spec = spec_of(ex1_original(), R(1));
  std::vector<unsigned> bounds{10, 10, 10};
  auto exact = expand_power(spec, bounds, Backend::Exact);
  auto approx = expand_power(spec, bounds, Backend::Float);
  CHECK(approx.backend() == Backend::Float);
  double worst = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    double e = to_double(exact.exact_values()[i]);
    double f = approx.float_values()[i];
    double scale = std::max(std::fabs(e), 1e-300);
    if (e == 0) {
      worst = std::max(worst, std::fabs(f));
    } else {
      worst = std::max(worst, std::fabs(f - e) / scale);
    }
  }
  CHECK(worst <= 1e-9);

  // Irrational beta is routed to the float backend.
  auto irr = expand_power(QuasiRationalSpec(ex1_original(), Beta::approximate(std::sqrt(2.0))), bounds);
  CHECK(irr.backend() == Backend::Float);
}

TEST_CASE("cauchy_coefficient against exact coefficients") {
  auto spec1 = spec_of(ex1_original(), R(1));
  std::vector<double> rad1(3, 0.3);
  CHECK(std::abs(cauchy_coefficient(spec1, std::vector<unsigned>{1, 1, 1}, rad1, 32).value - 1.5) < 1e-8);
  CHECK(std::abs(cauchy_coefficient(spec1, std::vector<unsigned>{0, 0, 0}, rad1, 32).value - 1.0) < 1e-10);

  auto spec2 = spec_of(ex2_original(), R(1));
  std::vector<double> rad2(4, 0.15);
  CHECK(std::abs(cauchy_coefficient(spec2, std::vector<unsigned>{1, 1, 1, 1}, rad2, 24).value - 136.0 / 27) < 1e-6);

  // Non-integer beta exercises the continued branch of log P.
  auto spec3 = spec_of(ex1_original(), R(3, 4));
  auto box = expand_power(spec3, std::vector<unsigned>{2, 2, 2});
  std::vector<unsigned> r{2, 1, 2};
  CHECK(std::abs(cauchy_coefficient(spec3, r, rad1, 24).value - to_double(box.exact(r))) < 1e-8);

  CHECK_THROWS_AS(cauchy_coefficient(spec1, std::vector<unsigned>{1, 1, 1}, rad1, 4), DomainError);
}

TEST_CASE("cauchy_coefficient shrinks the radius on a node collision") {
  // 1 - Z1 has its zero at the node Z1 = 1 of any grid.
  auto spec = spec_of(parse_polynomial("1 - Z1", vars(1)), R(1));
  auto res = cauchy_coefficient(spec, std::vector<unsigned>{3}, std::vector<double>{1.0}, 256);
  CHECK(res.retries == 1);
  CHECK(res.radius_used[0] == doctest::Approx(0.9));
  CHECK(std::abs(res.value - 1.0) < 1e-6);
}

TEST_CASE("continued_log follows the branch through the negative real axis") {
  // arg (1 + 2i)^3 exceeds pi, so the principal log is off by 2 pi i.
  NumericPolynomial p(parse_polynomial("(1 + Z1)^3", vars(1)));
  std::vector<Complex> z{Complex(0.0, 2.0)};
  Complex expected = 3.0 * std::log(1.0 + z[0]);
  CHECK(std::abs(continued_log(p, z) - expected) < 1e-12);
  CHECK(std::abs(std::log(p.evaluate(z)) - expected) > 1.0);
}

TEST_CASE("TSV export") {
  auto box = expand_power(spec_of(parse_polynomial("1 - Z1 - Z2", vars(2)), R(1)), std::vector<unsigned>{1, 1});
  std::ostringstream out;
  write_box_tsv(out, box);
  CHECK(out.str() == "0 0\t1\n0 1\t1\n1 0\t1\n1 1\t2\n");
  std::ostringstream dout;
  write_diagonal_tsv(dout, diagonal_of(box));
  CHECK(dout.str() == "0\t1\n1\t2\n");
}
