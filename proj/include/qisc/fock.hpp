#pragma once

// Truncated two-mode Fock-space density matrices. This is an independent
// check on the Gaussian formulas: states are built from their Schmidt form
// and Kraus-sum channels, and overlaps come from Hermitian eigensolves.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qisc/protocol.hpp"
#include "qisc/symplectic.hpp"

namespace qisc::fock {

/// Basis |n0, n1> with 0 <= n_i <= cutoff, flattened as n0 * (cutoff + 1) + n1.
struct FockState2 {
  Eigen::MatrixXcd rho;
  int cutoff = 0;

  int levels() const { return cutoff + 1; }
  int dim() const { return levels() * levels(); }
};

/// Largest truncated weight accepted by tmsv_fock.
constexpr double kSourceTruncationLimit = 1e-6;
/// Largest trace deficit accepted after additive noise.
constexpr double kNoiseTruncationLimit = 1e-5;

double trace_deficit(const FockState2& state);

/// sum_n sqrt((1 - x) x^n) |n, n>, x = N_S / (N_S + 1). Throws CutoffTooSmall
/// when x^(cutoff + 1) exceeds kSourceTruncationLimit.
FockState2 tmsv_fock(double n_s, int cutoff);

/// Beam-splitter loss with transmissivity kappa on one mode (0 or 1).
FockState2 apply_loss(const FockState2& state, int mode, double kappa);

/// Quantum-limited phase-insensitive amplifier with gain >= 1.
FockState2 apply_amplifier(const FockState2& state, int mode, double gain);

/// (-1)^(k n) on one mode.
FockState2 apply_bpsk(const FockState2& state, int mode, int k);

/// Classical Gaussian noise adding n_b photons: loss 1/(1 + n_b) followed by
/// amplification 1 + n_b.
FockState2 apply_additive_noise(const FockState2& state, int mode, double n_b);

/// tr(rho0^s rho1^(1-s)) with negative eigenvalues clipped to zero.
double s_overlap_fock(const FockState2& rho0, const FockState2& rho1, double s);

/// Same overlap for several s, sharing the two eigendecompositions.
std::vector<double> s_overlap_fock(const FockState2& rho0,
                                   const FockState2& rho1,
                                   std::span<const double> s_values);

struct Moments {
  CovMat4d cov;             // symmetrized quadrature covariance
  double mean_photons[2];   // <a_i^dagger a_i>
  double cross_sq;          // Re <a_0 a_1>
};

Moments moments(const FockState2& state);

/// Alice's (return, idler) state for bit k, built channel by channel.
FockState2 alice_state(const ProtocolParams& p, int k, int cutoff);

/// Smallest cutoff for which alice_state has trace deficit below target.
int choose_cutoff(const ProtocolParams& p, double target, int max_cutoff = 80);

}  // namespace qisc::fock
