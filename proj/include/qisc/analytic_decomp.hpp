#pragma once

// Closed-form symplectic diagonalizations of the two conditional covariance
// families. Alice's pair is diagonalized by a two-mode squeezer, Eve's by a
// beam-splitter rotation. Both spectra are independent of the bit k.

#include <cmath>

#include "qisc/protocol.hpp"
#include "qisc/symplectic.hpp"

namespace qisc {

template <typename Scalar>
struct SqueezerCoefficients {
  Scalar x_plus;
  Scalar x_minus;  // x_plus^2 - x_minus^2 = 1
};

template <typename Scalar>
SqueezerCoefficients<Scalar> alice_squeezer(const DerivedSymbols<Scalar>& d) {
  using std::sqrt;
  const Scalar sum = d.A + d.S;
  const Scalar disc = sum * sum - 4 * d.Ca * d.Ca;
  if (!(disc > Scalar(0))) {
    throw DomainError("alice_squeezer: (A + S)^2 <= 4 C_a^2");
  }
  const Scalar root = sqrt(disc);
  return {sqrt((sum + root) / (2 * root)), sqrt((sum - root) / (2 * root))};
}

template <typename Scalar>
WilliamsonDecomp<Scalar> analytic_decomp_alice(const DerivedSymbols<Scalar>& d,
                                               int k) {
  using std::sqrt;
  const Scalar sign = Scalar(bpsk_sign(k));
  const auto x = alice_squeezer(d);
  const Scalar root = sqrt((d.A + d.S) * (d.A + d.S) - 4 * d.Ca * d.Ca);
  const Scalar xm = sign * x.x_minus;

  WilliamsonDecomp<Scalar> out;
  out.S << x.x_plus, 0, xm, 0,
           0, x.x_plus, 0, -xm,
           xm, 0, x.x_plus, 0,
           0, -xm, 0, x.x_plus;
  // nu_n = [(-1)^n (S - A) + root] / 8 for n = 1, 2
  out.nu << ((d.A - d.S) + root) / 8, ((d.S - d.A) + root) / 8;
  canonicalize(out);
  return out;
}

/// Mixing angle theta of Eve's diagonalizing rotation, with
/// cos(2 theta) = (D - E) / R and sin(2 theta) = 2 C_e / R. theta = 0 when
/// R = 0 (both taps identical and uncorrelated).
template <typename Scalar>
Scalar eve_mixing_angle(const DerivedSymbols<Scalar>& d) {
  using std::atan2;
  if (d.Ce == Scalar(0) && d.D == d.E) return Scalar(0);
  return atan2(2 * d.Ce, d.D - d.E) / 2;
}

template <typename Scalar>
WilliamsonDecomp<Scalar> analytic_decomp_eve(const DerivedSymbols<Scalar>& d,
                                             int k) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar sign = Scalar(bpsk_sign(k));
  const Scalar theta = eve_mixing_angle(d);
  const Scalar c = cos(theta);
  const Scalar s = sin(theta);
  const Scalar root = sqrt((d.D - d.E) * (d.D - d.E) + 4 * d.Ce * d.Ce);

  WilliamsonDecomp<Scalar> out;
  out.S << c, 0, -sign * s, 0,
           0, c, 0, -sign * s,
           sign * s, 0, c, 0,
           0, sign * s, 0, c;
  // nu_n = [(D + E) - (-1)^n root] / 8 for n = 1, 2
  out.nu << ((d.D + d.E) + root) / 8, ((d.D + d.E) - root) / 8;
  canonicalize(out);
  return out;
}

}  // namespace qisc
