#pragma once

// Error exponents and error-probability bounds for binary discrimination of
// M iid copies of zero-mean Gaussian states.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "qisc/errors.hpp"
#include "qisc/protocol.hpp"
#include "qisc/symplectic.hpp"

namespace qisc {

template <typename Scalar>
struct OverlapResult {
  Scalar s;
  Scalar q_s;    // tr(rho0^s rho1^(1-s)), in (0, 1]
  Scalar log_q;  // ln q_s, kept separately to avoid rounding near 1
};

namespace detail {

// For a single-mode thermal factor with symplectic eigenvalue x >= 1
// (vacuum = 1 units) and power p in (0, 1):
//   G_p(x)      = 2^p / [(x+1)^p - (x-1)^p]
//   Lambda_p(x) = [(x+1)^p + (x-1)^p] / [(x+1)^p - (x-1)^p]
// Both are written through r = (x-1)/(x+1) so neither the pure-state edge
// x = 1 nor large x loses precision.
template <typename Scalar>
struct PowerTerms {
  Scalar log_g;
  Scalar lambda;
};

template <typename Scalar>
PowerTerms<Scalar> power_terms(Scalar x, Scalar p) {
  using std::exp;
  using std::expm1;
  using std::log;
  using std::log1p;
  using std::max;
  x = max(x, Scalar(1));
  const Scalar ln2 = log(Scalar(2));
  Scalar r_pow = 0;
  Scalar one_minus = 1;
  if (x > Scalar(1)) {
    const Scalar log_r = log1p(Scalar(-2) / (x + 1));
    r_pow = exp(p * log_r);
    one_minus = -expm1(p * log_r);
  }
  return {p * ln2 - p * log(x + 1) - log(one_minus), (1 + r_pow) / one_minus};
}

}  // namespace detail

/// tr(rho0^s rho1^(1-s)) for the zero-mean Gaussian states with the given
/// covariances. With Williamson pairs (S0, alpha) and (S1, beta) in
/// vacuum-1 units,
///   Q_s = 4 prod_k G_s(alpha_k) G_{1-s}(beta_k) / sqrt(det Sigma),
///   Sigma = S0 Lambda_s(alpha) S0^T + S1 Lambda_{1-s}(beta) S1^T.
template <typename Scalar>
OverlapResult<Scalar> gaussian_s_overlap(const CovMat4<Scalar>& cov0,
                                         const CovMat4<Scalar>& cov1,
                                         Scalar s) {
  using std::exp;
  using std::log;
  if (!(s > Scalar(0) && s < Scalar(1))) {
    throw DomainError("gaussian_s_overlap: s must lie in (0, 1)");
  }
  const auto w0 = williamson<Scalar>(cov0);
  if (cov0 == cov1) return {s, Scalar(1), Scalar(0)};
  const auto w1 = williamson<Scalar>(cov1);

  Scalar log_q = 2 * log(Scalar(2));
  Vec4<Scalar> lam0;
  Vec4<Scalar> lam1;
  for (int i = 0; i < 2; ++i) {
    const auto t0 = detail::power_terms<Scalar>(4 * w0.nu(i), s);
    const auto t1 = detail::power_terms<Scalar>(4 * w1.nu(i), 1 - s);
    log_q += t0.log_g + t1.log_g;
    lam0(2 * i) = lam0(2 * i + 1) = t0.lambda;
    lam1(2 * i) = lam1(2 * i + 1) = t1.lambda;
  }
  const Mat4<Scalar> sigma = w0.S * lam0.asDiagonal() * w0.S.transpose() +
                             w1.S * lam1.asDiagonal() * w1.S.transpose();
  Eigen::LLT<Mat4<Scalar>> llt((sigma + sigma.transpose()) / Scalar(2));
  if (llt.info() != Eigen::Success) {
    throw NumericalInstability("gaussian_s_overlap: Sigma is not positive definite");
  }
  // ln det Sigma = 2 sum ln L_ii
  const Mat4<Scalar> l = llt.matrixL();
  Scalar half_log_det = 0;
  for (int i = 0; i < 4; ++i) half_log_det += log(l(i, i));
  log_q -= half_log_det;
  return {s, exp(log_q), log_q};
}

/// Quantum Chernoff exponent at s = 1/2, which is optimal for pairs related
/// by the BPSK sign flip.
template <typename Scalar>
Scalar qcb_exponent(const CovMat4<Scalar>& cov0, const CovMat4<Scalar>& cov1) {
  const auto r = gaussian_s_overlap<Scalar>(cov0, cov1, Scalar(1) / Scalar(2));
  return std::max(Scalar(0), -r.log_q);
}

struct ChernoffScan {
  double s_star = 0.5;
  double max_exponent = 0.0;
  double exponent_at_half = 0.0;
  bool optimum_at_half = false;  // s_star == 0.5 to grid resolution
};

/// Evaluates E(s) = -ln Q_s on s = 0.05, 0.10, ..., 0.95.
template <typename Scalar>
ChernoffScan chernoff_scan(const CovMat4<Scalar>& cov0,
                           const CovMat4<Scalar>& cov1) {
  ChernoffScan scan;
  scan.max_exponent = -1.0;
  for (int i = 1; i <= 19; ++i) {
    const Scalar s = Scalar(i) / Scalar(20);
    const double e = static_cast<double>(-gaussian_s_overlap<Scalar>(cov0, cov1, s).log_q);
    if (i == 10) scan.exponent_at_half = e;
    if (e > scan.max_exponent) {
      scan.max_exponent = e;
      scan.s_star = static_cast<double>(s);
    }
  }
  scan.optimum_at_half = std::abs(scan.s_star - 0.5) < 1e-12 ||
                         scan.max_exponent - scan.exponent_at_half <=
                             1e-12 * std::max(1e-300, scan.max_exponent);
  return scan;
}

/// Classical Chernoff exponent at s = 1/2 (Bhattacharyya) for two zero-mean
/// bivariate Gaussians:
///   (1/2) ln det((C0 + C1)/2) - (1/4) ln det C0 - (1/4) ln det C1.
/// For the mirrored homodyne pair this equals (1/2) ln(AS / (AS - C_a^2)).
template <typename Scalar>
Scalar homodyne_exponent(const Mat2<Scalar>& cov0, const Mat2<Scalar>& cov1) {
  using std::log;
  const Scalar d0 = cov0.determinant();
  const Scalar d1 = cov1.determinant();
  const Scalar dm = ((cov0 + cov1) / Scalar(2)).determinant();
  if (!(d0 > Scalar(0) && d1 > Scalar(0) && cov0(0, 0) > Scalar(0) &&
        cov1(0, 0) > Scalar(0))) {
    throw DomainError("homodyne_exponent: singular or indefinite covariance");
  }
  return std::max(Scalar(0), log(dm) / 2 - (log(d0) + log(d1)) / 4);
}

/// exp(-M exponent) / 2.
double chernoff_upper(double exponent, std::int64_t m);

/// (1 - sqrt(1 - exp(-2 M exponent))) / 2, valid for any receiver.
double error_lower(double exponent, std::int64_t m);

/// Per-mode Bhattacharyya exponent of two Bose-Einstein count laws with
/// means n0 and n1: ln[sqrt((n0+1)(n1+1)) - sqrt(n0 n1)].
double opa_exponent(const OpaSpec& spec);

struct BoundSet {
  double exponent = 0.0;
  double upper = 0.5;
  double lower = 0.5;
  std::int64_t m = 1;
};

BoundSet make_bounds(double exponent, std::int64_t m);

/// Leading-order exponents for N_S << 1, kappa N_B >> 1.
struct AsymptoticExponents {
  double alice = 0.0;     // 4 kappa N_S / N_B
  double eve = 0.0;       // 4 kappa (1 - kappa) N_S^2 / N_B
  double homodyne = 0.0;  // kappa N_S / N_B
  double opa = 0.0;       // 2 kappa N_S / N_B
  bool valid = false;     // N_S <= 0.01 and kappa N_B >= 10
};

AsymptoticExponents asymptotic_exponents(const ProtocolParams& p);

/// Exact per-mode-pair exponents of all four receivers. The quantum
/// exponents are evaluated in extended precision. opa is empty when N_B = 0.
struct ReceiverExponents {
  double alice = 0.0;
  double eve = 0.0;
  double homodyne = 0.0;
  std::optional<double> opa;
};

double alice_exponent(const ProtocolParams& p);
double eve_exponent(const ProtocolParams& p);
double alice_homodyne_exponent(const ProtocolParams& p);
ReceiverExponents exact_exponents(const ProtocolParams& p);

}  // namespace qisc
