#include "acsv/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "acsv/error.hpp"

namespace acsv {

Beta Beta::exact(const Rat& value) {
  Beta b;
  b.rational_ = value;
  b.value_ = to_double(value);
  return b;
}

Beta Beta::approximate(double value) {
  if (!std::isfinite(value)) throw DomainError("beta must be finite");
  Beta b;
  b.value_ = value;
  return b;
}

Beta Beta::parse(const std::string& text) { return exact(parse_rat(text)); }

const Rat& Beta::rational() const {
  if (!rational_) throw DomainError("beta is not rational");
  return *rational_;
}

std::string Beta::to_string() const {
  if (rational_) return acsv::to_string(*rational_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

QuasiRationalSpec::QuasiRationalSpec(Polynomial p, Beta beta, std::optional<std::vector<Rat>> scaling)
    : p_(std::move(p)), beta_(std::move(beta)), scaling_(std::move(scaling)) {
  if (p_.constant_term() != 1) throw DomainError("P must be normalized to constant term 1");
  if (beta_.is_rational()) {
    const Rat& b = beta_.rational();
    if (is_integer(b) && b <= 0) throw DomainError("beta must not be a nonpositive integer");
  } else if (beta_.value() <= 0 && std::nearbyint(beta_.value()) == beta_.value()) {
    throw DomainError("beta must not be a nonpositive integer");
  }
  if (scaling_ && scaling_->size() != p_.dim()) throw DimensionError("scaling vector has wrong length");
}

std::string to_string(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

SeriesBox::SeriesBox(std::vector<unsigned> bounds, Backend backend)
    : bounds_(std::move(bounds)), strides_(bounds_.size()), backend_(backend) {
  if (bounds_.empty()) throw DimensionError("series box needs at least one axis");
  for (std::size_t i = bounds_.size(); i-- > 0;) {
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(bounds_[i]) + 1;
  }
}

bool SeriesBox::contains(std::span<const unsigned> r) const {
  if (r.size() != bounds_.size()) return false;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] > bounds_[i]) return false;
  return true;
}

std::size_t SeriesBox::index(std::span<const unsigned> r) const {
  if (!contains(r)) throw DimensionError("index outside the series box");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < r.size(); ++i) idx += r[i] * strides_[i];
  return idx;
}

const Rat& SeriesBox::exact(std::span<const unsigned> r) const {
  if (backend_ != Backend::Exact) throw DomainError("exact coefficient requested from float backend");
  return exact_[index(r)];
}

double SeriesBox::value(std::span<const unsigned> r) const {
  std::size_t i = index(r);
  return backend_ == Backend::Exact ? to_double(exact_[i]) : approx_[i];
}

namespace {

// Calls visit(r) for every r in the box with |r| = degree.
void for_each_of_degree(const std::vector<unsigned>& bounds, unsigned degree,
                        const std::function<void(const std::vector<unsigned>&)>& visit) {
  const std::size_t d = bounds.size();
  std::vector<unsigned> tail_cap(d + 1, 0);
  for (std::size_t i = d; i-- > 0;) tail_cap[i] = tail_cap[i + 1] + bounds[i];
  std::vector<unsigned> r(d, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == d) {
      if (left <= bounds[i]) {
        r[i] = left;
        visit(r);
      }
      return;
    }
    unsigned lo = left > tail_cap[i + 1] ? left - tail_cap[i + 1] : 0;
    unsigned hi = std::min(left, bounds[i]);
    for (unsigned v = lo; v <= hi; ++v) {
      r[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, degree);
}

struct TermData {
  Monomial exps;
  std::size_t offset;  // linear index of s in the box
  Rat coeff;
  double coeff_d;
};

}  // namespace

class SeriesFiller {
 public:
  static SeriesBox run(const QuasiRationalSpec& spec, std::span<const unsigned> bounds_in, Backend backend,
                       const ExpandOptions& options) {
    const std::size_t d = spec.dim();
    if (bounds_in.size() != d) throw DimensionError("bounds vector has wrong length");
    if (options.preferred_axis >= d) throw DimensionError("preferred axis out of range");
    if (!spec.beta().is_rational()) backend = Backend::Float;

    double count = 1;
    for (unsigned b : bounds_in) count *= static_cast<double>(b) + 1;
    if (count > static_cast<double>(options.max_coefficients))
      throw CapacityError("series box of " + std::to_string(static_cast<long long>(count)) +
                          " coefficients exceeds the cap of " + std::to_string(options.max_coefficients));

    SeriesBox box(std::vector<unsigned>(bounds_in.begin(), bounds_in.end()), backend);
    std::vector<TermData> terms;
    for (const auto& [m, c] : spec.polynomial().terms()) {
      // Terms reaching outside the box never contribute.
      if (total_degree(m) == 0 || !box.contains(m)) continue;
      terms.push_back({m, box.index(m), c, to_double(c)});
    }

    if (backend == Backend::Exact) {
      fill_exact(box, terms, spec.beta().rational(), options.preferred_axis);
    } else {
      fill_float(box, terms, spec.beta().value(), options.preferred_axis);
    }
    return box;
  }

 private:
  static std::size_t pick_axis(const std::vector<unsigned>& r, std::size_t preferred) {
    if (r[preferred] > 0) return preferred;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] > 0) return i;
    return preferred;
  }

  static bool dominated(const Monomial& s, const std::vector<unsigned>& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      if (s[i] > r[i]) return false;
    return true;
  }

  static unsigned total_bound(const SeriesBox& box) {
    unsigned t = 0;
    for (unsigned b : box.bounds_) t += b;
    return t;
  }

  // With beta = u/v: v r_j a_r = -sum_s p_s (v (r_j - s_j) + u s_j) a_{r-s}.
  static void fill_exact(SeriesBox& box, const std::vector<TermData>& terms, const Rat& beta,
                         std::size_t preferred) {
    box.exact_.assign(box.size_, Rat(0));
    box.exact_[0] = 1;
    const mpz_class u = beta.get_num();
    const mpz_class v = beta.get_den();
    Rat acc, t;
    mpz_class weight, denom;
    const unsigned top = total_bound(box);
    for (unsigned k = 1; k <= top; ++k) {
      for_each_of_degree(box.bounds_, k, [&](const std::vector<unsigned>& r) {
        const std::size_t j = pick_axis(r, preferred);
        const std::size_t idx = box.index(r);
        acc = 0;
        for (const auto& term : terms) {
          if (!dominated(term.exps, r)) continue;
          const Rat& prev = box.exact_[idx - term.offset];
          if (prev == 0) continue;
          weight = v * static_cast<long>(r[j] - term.exps[j]) + u * static_cast<long>(term.exps[j]);
          if (weight == 0) continue;
          t = term.coeff * prev;
          t *= Rat(weight);
          acc += t;
        }
        denom = v * static_cast<long>(r[j]);
        acc /= Rat(denom);
        box.exact_[idx] = -acc;
      });
    }
  }

  static void fill_float(SeriesBox& box, const std::vector<TermData>& terms, double beta,
                         std::size_t preferred) {
    box.approx_.assign(box.size_, 0.0);
    box.approx_[0] = 1.0;
    const unsigned top = total_bound(box);
    for (unsigned k = 1; k <= top; ++k) {
      for_each_of_degree(box.bounds_, k, [&](const std::vector<unsigned>& r) {
        const std::size_t j = pick_axis(r, preferred);
        const std::size_t idx = box.index(r);
        double acc = 0.0;
        for (const auto& term : terms) {
          if (!dominated(term.exps, r)) continue;
          const double w = static_cast<double>(r[j]) - term.exps[j] + beta * term.exps[j];
          acc += term.coeff_d * w * box.approx_[idx - term.offset];
        }
        box.approx_[idx] = -acc / r[j];
      });
    }
  }
};

SeriesBox expand_power(const QuasiRationalSpec& spec, std::span<const unsigned> bounds, Backend backend,
                       const ExpandOptions& options) {
  return SeriesFiller::run(spec, bounds, backend, options);
}

Polynomial brute_force_oracle(const QuasiRationalSpec& spec, unsigned degree, unsigned degree_cap) {
  if (degree > degree_cap)
    throw CapacityError("oracle degree " + std::to_string(degree) + " exceeds cap " + std::to_string(degree_cap));
  const Rat& beta = spec.beta().rational();
  const std::size_t d = spec.dim();
  auto truncate = [degree](const Polynomial& p) {
    Polynomial::TermMap kept;
    for (const auto& [m, c] : p.terms())
      if (total_degree(m) <= degree) kept.emplace(m, c);
    return Polynomial(p.dim(), std::move(kept));
  };
  const Polynomial u = truncate(spec.polynomial() - Polynomial::constant(d, 1));
  Polynomial result = Polynomial::constant(d, 1);
  Polynomial power = Polynomial::constant(d, 1);
  Rat binom = 1;
  for (unsigned k = 1; k <= degree; ++k) {
    // binom(-beta, k) = binom(-beta, k-1) * (-beta - k + 1) / k
    binom *= (-beta - (k - 1));
    binom /= k;
    power = truncate(power * u);
    if (power.is_zero()) break;
    result += power * binom;
  }
  return result;
}

DiagonalSequence::DiagonalSequence(Backend backend, std::vector<Rat> exact, std::vector<double> approx)
    : backend_(backend), exact_(std::move(exact)), approx_(std::move(approx)) {}

const Rat& DiagonalSequence::exact(std::size_t n) const {
  if (backend_ != Backend::Exact) throw DomainError("exact term requested from float backend");
  return exact_.at(n);
}

double DiagonalSequence::value(std::size_t n) const {
  return backend_ == Backend::Exact ? to_double(exact_.at(n)) : approx_.at(n);
}

int DiagonalSequence::sign(std::size_t n) const {
  if (backend_ == Backend::Exact) return sgn(exact_.at(n));
  double v = approx_.at(n);
  return (v > 0) - (v < 0);
}

double DiagonalSequence::log_abs(std::size_t n) const {
  return backend_ == Backend::Exact ? acsv::log_abs(exact_.at(n)) : std::log(std::fabs(approx_.at(n)));
}

DiagonalSequence diagonal_of(const SeriesBox& box) {
  const auto& b = box.bounds();
  if (std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) != b.end())
    throw DimensionError("diagonal needs equal bounds on every axis");
  std::vector<Rat> exact;
  std::vector<double> approx;
  std::vector<unsigned> r(box.dim());
  for (unsigned n = 0; n <= b[0]; ++n) {
    std::fill(r.begin(), r.end(), n);
    if (box.backend() == Backend::Exact) {
      exact.push_back(box.exact(r));
    } else {
      approx.push_back(box.value(r));
    }
  }
  return DiagonalSequence(box.backend(), std::move(exact), std::move(approx));
}

std::optional<std::size_t> positivity_scan(const DiagonalSequence& seq) {
  for (std::size_t n = 0; n < seq.size(); ++n)
    if (seq.sign(n) <= 0) return n;
  return std::nullopt;
}

void write_box_tsv(std::ostream& out, const SeriesBox& box) {
  const std::size_t d = box.dim();
  std::vector<unsigned> r(d, 0);
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    // Row-major decode.
    std::size_t rem = idx;
    for (std::size_t i = d; i-- > 0;) {
      r[i] = static_cast<unsigned>(rem % (box.bounds()[i] + 1));
      rem /= box.bounds()[i] + 1;
    }
    std::string value;
    if (box.backend() == Backend::Exact) {
      if (box.exact_values()[idx] == 0) continue;
      value = to_string(box.exact_values()[idx]);
    } else {
      if (box.float_values()[idx] == 0.0) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", box.float_values()[idx]);
      value = buf;
    }
    for (std::size_t i = 0; i < d; ++i) out << r[i] << (i + 1 < d ? " " : "\t");
    out << value << '\n';
  }
}

void write_diagonal_tsv(std::ostream& out, const DiagonalSequence& seq) {
  for (std::size_t n = 0; n < seq.size(); ++n) {
    out << n << '\t';
    if (seq.backend() == Backend::Exact) {
      out << to_string(seq.exact(n));
    } else {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", seq.value(n));
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace acsv
