#pragma once

// Second-moment model of the quantum-illumination link.
//
// Alice keeps the idler of a two-mode squeezed vacuum and sends the signal
// through a pure-loss channel (transmissivity kappa) to Bob. Bob applies a
// BPSK sign (-1)^k, adds classical Gaussian noise of N_B photons, and returns
// the mode through the same channel. Eve holds both loss taps. Every map is
// affine on covariance matrices:
//   pure loss      V -> kappa V + (1 - kappa) I/4     (on the lossy mode)
//   classical noise V -> V + (N_B / 2) I              (on the noisy mode)
//   BPSK           flips the sign of the signal/idler cross block

#include <cmath>
#include <cstdint>
#include <sstream>

#include "qisc/errors.hpp"
#include "qisc/symplectic.hpp"

namespace qisc {

struct ProtocolParams {
  double kappa = 0.1;     // channel transmissivity, (0, 1]
  double n_s = 0.004;     // mean photons per signal mode
  double n_b = 100.0;     // Bob's added noise photons per mode
  std::int64_t m = 1;     // mode pairs per bit

  static ProtocolParams figure1() { return {0.1, 0.004, 100.0, 2'000'000}; }
};

/// Throws InvalidParams when any field is out of range.
inline void validate(const ProtocolParams& p) {
  std::ostringstream why;
  if (!std::isfinite(p.kappa) || !(p.kappa > 0.0) || p.kappa > 1.0) {
    why << "kappa must lie in (0, 1], got " << p.kappa;
  } else if (!std::isfinite(p.n_s) || p.n_s < 0.0) {
    why << "n_s must be finite and >= 0, got " << p.n_s;
  } else if (!std::isfinite(p.n_b) || p.n_b < 0.0) {
    why << "n_b must be finite and >= 0, got " << p.n_b;
  } else if (p.m < 1) {
    why << "m must be >= 1, got " << p.m;
  } else {
    return;
  }
  throw InvalidParams(why.str());
}

/// Scalar symbols of the conditional covariances.
template <typename Scalar>
struct DerivedSymbols {
  Scalar S;    // 2 N_S + 1
  Scalar Cq;   // 2 sqrt(N_S (N_S + 1))
  Scalar A;    // 2 kappa^2 N_S + 2 kappa N_B + 1
  Scalar Ca;   // kappa Cq
  Scalar D;    // 2 (1 - kappa) N_S + 1
  Scalar E;    // 2 (1 - kappa) kappa N_S + 2 (1 - kappa) N_B + 1
  Scalar Ce;   // 2 (1 - kappa) sqrt(kappa) N_S
};

template <typename Scalar = double>
DerivedSymbols<Scalar> derive_symbols(const ProtocolParams& p) {
  using std::sqrt;
  validate(p);
  const Scalar kappa = p.kappa;
  const Scalar ns = p.n_s;
  const Scalar nb = p.n_b;
  const Scalar loss = Scalar(1) - kappa;
  DerivedSymbols<Scalar> d;
  d.S = 2 * ns + 1;
  d.Cq = 2 * sqrt(ns * (ns + 1));
  d.A = 2 * kappa * kappa * ns + 2 * kappa * nb + 1;
  d.Ca = kappa * d.Cq;
  d.D = 2 * loss * ns + 1;
  d.E = 2 * loss * kappa * ns + 2 * loss * nb + 1;
  d.Ce = 2 * loss * sqrt(kappa) * ns;
  return d;
}

inline int bpsk_sign(int k) {
  if (k != 0 && k != 1) throw InvalidParams("bit must be 0 or 1");
  return k == 0 ? 1 : -1;
}

/// Signal-idler source covariance.
template <typename Scalar = double>
CovMat4<Scalar> tmsv_cov(double n_s) {
  using std::sqrt;
  if (!std::isfinite(n_s) || n_s < 0.0) {
    throw InvalidParams("tmsv_cov: n_s must be >= 0");
  }
  const Scalar ns = n_s;
  const Scalar s = 2 * ns + 1;
  const Scalar cq = 2 * sqrt(ns * (ns + 1));
  CovMat4<Scalar> v;
  v << s, 0, cq, 0,
       0, s, 0, -cq,
       cq, 0, s, 0,
       0, -cq, 0, s;
  return v / Scalar(4);
}

/// Covariance of Alice's (return, idler) mode pair given Bob's bit.
template <typename Scalar = double>
CovMat4<Scalar> alice_conditional_cov(const ProtocolParams& p, int k) {
  const auto d = derive_symbols<Scalar>(p);
  const Scalar c = Scalar(bpsk_sign(k)) * d.Ca;
  CovMat4<Scalar> v;
  v << d.A, 0, c, 0,
       0, d.A, 0, -c,
       c, 0, d.S, 0,
       0, -c, 0, d.S;
  return v / Scalar(4);
}

/// Covariance of Eve's (outbound tap, return tap) mode pair given Bob's bit.
/// The cross block is +/- C_e on both quadratures (phase-insensitive).
template <typename Scalar = double>
CovMat4<Scalar> eve_conditional_cov(const ProtocolParams& p, int k) {
  const auto d = derive_symbols<Scalar>(p);
  const Scalar c = Scalar(bpsk_sign(k)) * d.Ce;
  CovMat4<Scalar> v;
  v << d.D, 0, c, 0,
       0, d.D, 0, c,
       c, 0, d.E, 0,
       0, c, 0, d.E;
  return v / Scalar(4);
}

/// Covariance of (Re a_R, Re a_I) seen by Alice's homodyne receiver.
template <typename Scalar>
using HomodyneCov = Mat2<Scalar>;

template <typename Scalar = double>
HomodyneCov<Scalar> homodyne_cov(const ProtocolParams& p, int k) {
  const auto d = derive_symbols<Scalar>(p);
  const Scalar c = Scalar(bpsk_sign(k)) * d.Ca;
  HomodyneCov<Scalar> h;
  h << d.A, c, c, d.S;
  return h / Scalar(4);
}

/// Photon statistics at the output of Alice's OPA receiver,
/// a' = sqrt(G) a_I + sqrt(G - 1) a_R^dagger. Each output mode is thermal.
struct OpaSpec {
  double gain = 1.0;
  double n0 = 0.0;  // mean photons per mode, bit 0
  double n1 = 0.0;  // mean photons per mode, bit 1
};

inline OpaSpec opa_spec(const ProtocolParams& p) {
  validate(p);
  if (!(p.n_b > 0.0)) {
    throw InvalidParams("opa_spec: the OPA gain is undefined for n_b = 0");
  }
  const auto d = derive_symbols<long double>(p);
  const long double kappa = p.kappa;
  const long double ns = p.n_s;
  const long double excess = ns / std::sqrt(kappa * (long double)p.n_b);
  const long double g = 1 + excess;
  // <a_R a_R^dagger> = kappa^2 N_S + kappa N_B + 1
  const long double return_anti = kappa * kappa * ns + kappa * p.n_b + 1;
  const long double mix = std::sqrt(g * excess);
  const long double base = g * ns + excess * return_anti;
  OpaSpec out;
  out.gain = static_cast<double>(g);
  out.n0 = static_cast<double>(base + mix * d.Ca);
  out.n1 = static_cast<double>(base - mix * d.Ca);
  return out;
}

}  // namespace qisc
