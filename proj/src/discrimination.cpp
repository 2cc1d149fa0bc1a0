#include "qisc/discrimination.hpp"

#include <cmath>

namespace qisc {

namespace {

void check_bound_inputs(double exponent, std::int64_t m) {
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw InvalidParams("exponent must be finite and >= 0");
  }
  if (m < 1) throw InvalidParams("m must be >= 1");
}

}  // namespace

double chernoff_upper(double exponent, std::int64_t m) {
  check_bound_inputs(exponent, m);
  return 0.5 * std::exp(-static_cast<double>(m) * exponent);
}

double error_lower(double exponent, std::int64_t m) {
  check_bound_inputs(exponent, m);
  const double two_m_e = 2.0 * static_cast<double>(m) * exponent;
  // 1 - sqrt(1 - y) = y / (1 + sqrt(1 - y)), y = exp(-2 M E)
  const double y = std::exp(-two_m_e);
  const double one_minus_y = -std::expm1(-two_m_e);
  return 0.5 * y / (1.0 + std::sqrt(one_minus_y));
}

double opa_exponent(const OpaSpec& spec) {
  const long double n0 = spec.n0;
  const long double n1 = spec.n1;
  if (!(n1 >= 0.0L) || !(n0 >= n1) || !std::isfinite(spec.n0)) {
    throw InvalidParams("opa_exponent: requires n0 >= n1 >= 0");
  }
  const long double half_gap = (n0 - n1) / 2;
  if (half_gap == 0.0L) return 0.0;
  // a - b - 1 with a = sqrt((n0+1)(n1+1)), b = sqrt(n0 n1), expanded about
  // the mean so the result carries no cancellation:
  //   a - b - 1 = gap^2 (a - b + 1) / ((b + mean)(a + mean + 1))
  const long double mean = (n0 + n1) / 2;
  const long double a = std::sqrt((n0 + 1) * (n1 + 1));
  const long double b = std::sqrt(n0 * n1);
  const long double excess =
      half_gap * half_gap * (a - b + 1) / ((b + mean) * (a + mean + 1));
  return static_cast<double>(std::log1p(excess));
}

BoundSet make_bounds(double exponent, std::int64_t m) {
  return {exponent, chernoff_upper(exponent, m), error_lower(exponent, m), m};
}

AsymptoticExponents asymptotic_exponents(const ProtocolParams& p) {
  validate(p);
  if (!(p.n_b > 0.0)) {
    throw InvalidParams("asymptotic_exponents: requires n_b > 0");
  }
  const double base = p.kappa * p.n_s / p.n_b;
  AsymptoticExponents a;
  a.alice = 4.0 * base;
  a.eve = 4.0 * base * (1.0 - p.kappa) * p.n_s;
  a.homodyne = base;
  a.opa = 2.0 * base;
  a.valid = p.n_s <= 0.01 && p.kappa * p.n_b >= 10.0;
  return a;
}

double alice_exponent(const ProtocolParams& p) {
  using Ld = long double;
  return static_cast<double>(qcb_exponent<Ld>(alice_conditional_cov<Ld>(p, 0),
                                              alice_conditional_cov<Ld>(p, 1)));
}

double eve_exponent(const ProtocolParams& p) {
  using Ld = long double;
  return static_cast<double>(qcb_exponent<Ld>(eve_conditional_cov<Ld>(p, 0),
                                              eve_conditional_cov<Ld>(p, 1)));
}

double alice_homodyne_exponent(const ProtocolParams& p) {
  using Ld = long double;
  return static_cast<double>(
      homodyne_exponent<Ld>(homodyne_cov<Ld>(p, 0), homodyne_cov<Ld>(p, 1)));
}

ReceiverExponents exact_exponents(const ProtocolParams& p) {
  ReceiverExponents r;
  r.alice = alice_exponent(p);
  r.eve = eve_exponent(p);
  r.homodyne = alice_homodyne_exponent(p);
  if (p.n_b > 0.0) r.opa = opa_exponent(opa_spec(p));
  return r;
}

}  // namespace qisc
