#include "qisc/fock.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace qisc::fock {

namespace {

using Complex = std::complex<double>;

// One Kraus operator of a photon-number-shifting single-mode channel:
// K |n> = coef[n] |n + shift>.
struct ShiftKraus {
  int shift = 0;
  std::vector<double> coef;
};

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_mode(int mode) {
  if (mode != 0 && mode != 1) throw InvalidParams("mode must be 0 or 1");
}

FockState2 swap_modes(const FockState2& state) {
  const int d = state.levels();
  FockState2 out{Eigen::MatrixXcd(state.dim(), state.dim()), state.cutoff};
  for (int a0 = 0; a0 < d; ++a0)
    for (int a1 = 0; a1 < d; ++a1)
      for (int b0 = 0; b0 < d; ++b0)
        for (int b1 = 0; b1 < d; ++b1)
          out.rho(a1 * d + a0, b1 * d + b0) = state.rho(a0 * d + a1, b0 * d + b1);
  return out;
}

// rho -> sum_k (K_k (x) I) rho (K_k (x) I)^dagger, acting on mode 0.
FockState2 apply_on_first(const FockState2& state,
                          const std::vector<ShiftKraus>& kraus) {
  const int d = state.levels();
  FockState2 out{Eigen::MatrixXcd::Zero(state.dim(), state.dim()), state.cutoff};
  for (const auto& op : kraus) {
    for (int a = 0; a < d; ++a) {
      const int i = a + op.shift;
      if (i < 0 || i >= d || op.coef[a] == 0.0) continue;
      for (int b = 0; b < d; ++b) {
        const int j = b + op.shift;
        if (j < 0 || j >= d || op.coef[b] == 0.0) continue;
        out.rho.block(i * d, j * d, d, d) +=
            (op.coef[a] * op.coef[b]) * state.rho.block(a * d, b * d, d, d);
      }
    }
  }
  return out;
}

FockState2 apply_channel(const FockState2& state, int mode,
                         const std::vector<ShiftKraus>& kraus) {
  check_mode(mode);
  if (mode == 0) return apply_on_first(state, kraus);
  return swap_modes(apply_on_first(swap_modes(state), kraus));
}

// Eigen-decomposition of a density matrix, using the real solver when the
// matrix has no imaginary part (every state built here is real).
struct Spectral {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

Spectral decompose(const Eigen::MatrixXcd& rho) {
  Spectral sp;
  if (rho.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd re = rho.real();
    re = (re + re.transpose()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
    if (es.info() != Eigen::Success) {
      throw NumericalInstability("s_overlap_fock: eigensolver failed");
    }
    sp.values = es.eigenvalues();
    sp.vectors = es.eigenvectors().cast<Complex>();
  } else {
    Eigen::MatrixXcd h = (rho + rho.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) {
      throw NumericalInstability("s_overlap_fock: eigensolver failed");
    }
    sp.values = es.eigenvalues();
    sp.vectors = es.eigenvectors();
  }
  sp.values = sp.values.cwiseMax(0.0);
  return sp;
}

// Basis-state bookkeeping for moment evaluation.
struct Ket {
  int n[2];
  double amp;
};

Ket lower(Ket k, int mode) {
  k.amp *= std::sqrt(static_cast<double>(k.n[mode]));
  k.n[mode] -= 1;
  return k;
}

Ket raise(Ket k, int mode) {
  k.n[mode] += 1;
  k.amp *= std::sqrt(static_cast<double>(k.n[mode]));
  return k;
}

// tr(rho X) where X is a product of ladder operators, applied right to left.
template <typename Op>
Complex expect(const FockState2& state, Op&& apply) {
  const int d = state.levels();
  Complex total = 0.0;
  for (int n0 = 0; n0 < d; ++n0) {
    for (int n1 = 0; n1 < d; ++n1) {
      const Ket out = apply(Ket{{n0, n1}, 1.0});
      if (out.amp == 0.0 || out.n[0] < 0 || out.n[1] < 0 || out.n[0] >= d ||
          out.n[1] >= d) {
        continue;
      }
      // <j| rho X |j> = rho(j, i) X(i, j)
      total += state.rho(n0 * d + n1, out.n[0] * d + out.n[1]) * out.amp;
    }
  }
  return total;
}

}  // namespace

double trace_deficit(const FockState2& state) {
  return 1.0 - state.rho.trace().real();
}

FockState2 tmsv_fock(double n_s, int cutoff) {
  if (!std::isfinite(n_s) || n_s < 0.0) throw InvalidParams("tmsv_fock: n_s must be >= 0");
  if (cutoff < 1) throw InvalidParams("tmsv_fock: cutoff must be >= 1");
  const double x = n_s / (n_s + 1.0);
  const double lost = std::pow(x, cutoff + 1);
  if (lost > kSourceTruncationLimit) {
    throw CutoffTooSmall("tmsv_fock: cutoff " + std::to_string(cutoff) +
                         " discards weight " + std::to_string(lost));
  }
  const int d = cutoff + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (int n = 0; n < d; ++n) {
    psi(n * d + n) = std::sqrt((1.0 - x) * std::pow(x, n));
  }
  return {psi * psi.adjoint(), cutoff};
}

FockState2 apply_loss(const FockState2& state, int mode, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw InvalidParams("apply_loss: kappa outside [0, 1]");
  if (kappa == 1.0) {
    check_mode(mode);
    return state;
  }
  const int d = state.levels();
  std::vector<ShiftKraus> kraus;
  for (int k = 0; k < d; ++k) {
    ShiftKraus op{-k, std::vector<double>(d, 0.0)};
    for (int n = k; n < d; ++n) {
      // sqrt(C(n,k)) kappa^((n-k)/2) (1-kappa)^(k/2)
      op.coef[n] = std::exp(0.5 * log_binomial(n, k)) *
                   std::pow(kappa, 0.5 * (n - k)) * std::pow(1.0 - kappa, 0.5 * k);
    }
    kraus.push_back(std::move(op));
  }
  return apply_channel(state, mode, kraus);
}

FockState2 apply_amplifier(const FockState2& state, int mode, double gain) {
  if (!(gain >= 1.0) || !std::isfinite(gain)) throw InvalidParams("apply_amplifier: gain must be >= 1");
  if (gain == 1.0) {
    check_mode(mode);
    return state;
  }
  const int d = state.levels();
  const double ratio = (gain - 1.0) / gain;
  std::vector<ShiftKraus> kraus;
  for (int k = 0; k < d; ++k) {
    ShiftKraus op{k, std::vector<double>(d, 0.0)};
    for (int n = 0; n + k < d; ++n) {
      // sqrt(1/g) ((g-1)/g)^(k/2) sqrt(C(n+k,k)) g^(-n/2)
      op.coef[n] = std::exp(0.5 * log_binomial(n + k, k) - 0.5 * (n + 1) * std::log(gain) +
                            0.5 * k * std::log(ratio));
    }
    kraus.push_back(std::move(op));
  }
  return apply_channel(state, mode, kraus);
}

FockState2 apply_bpsk(const FockState2& state, int mode, int k) {
  check_mode(mode);
  bpsk_sign(k);
  if (k == 0) return state;
  const int d = state.levels();
  FockState2 out = state;
  for (int i = 0; i < state.dim(); ++i) {
    const int ni = mode == 0 ? i / d : i % d;
    for (int j = 0; j < state.dim(); ++j) {
      const int nj = mode == 0 ? j / d : j % d;
      if ((ni + nj) % 2 != 0) out.rho(i, j) = -out.rho(i, j);
    }
  }
  return out;
}

FockState2 apply_additive_noise(const FockState2& state, int mode, double n_b) {
  if (!std::isfinite(n_b) || n_b < 0.0) throw InvalidParams("apply_additive_noise: n_b must be >= 0");
  if (n_b == 0.0) {
    check_mode(mode);
    return state;
  }
  const double gain = 1.0 + n_b;
  FockState2 out = apply_amplifier(apply_loss(state, mode, 1.0 / gain), mode, gain);
  const double deficit = trace_deficit(out);
  if (deficit > kNoiseTruncationLimit) {
    throw CutoffTooSmall("apply_additive_noise: trace deficit " + std::to_string(deficit) +
                         " at cutoff " + std::to_string(state.cutoff));
  }
  return out;
}

std::vector<double> s_overlap_fock(const FockState2& rho0, const FockState2& rho1,
                                   std::span<const double> s_values) {
  if (rho0.cutoff != rho1.cutoff) throw InvalidParams("s_overlap_fock: cutoff mismatch");
  const Spectral a = decompose(rho0.rho);
  const Spectral b = decompose(rho1.rho);
  // tr(rho0^s rho1^(1-s)) = sum_ij a_i^s b_j^(1-s) |<u_i|v_j>|^2
  const Eigen::MatrixXd weight = (a.vectors.adjoint() * b.vectors).cwiseAbs2();
  std::vector<double> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s_overlap_fock: s must lie in (0, 1)");
    const Eigen::VectorXd pa = a.values.array().pow(s);
    const Eigen::VectorXd pb = b.values.array().pow(1.0 - s);
    out.push_back(pa.dot(weight * pb));
  }
  return out;
}

double s_overlap_fock(const FockState2& rho0, const FockState2& rho1, double s) {
  const double one[] = {s};
  return s_overlap_fock(rho0, rho1, one).front();
}

Moments moments(const FockState2& state) {
  auto number = [&](int m) {
    return expect(state, [m](Ket k) { return raise(lower(k, m), m); }).real();
  };
  auto square = [&](int m) {
    return expect(state, [m](Ket k) { return lower(lower(k, m), m); });
  };
  const Complex c = expect(state, [](Ket k) { return lower(lower(k, 1), 0); });   // <a0 a1>
  const Complex dd = expect(state, [](Ket k) { return raise(lower(k, 1), 0); });  // <a0^dag a1>

  Moments out;
  CovMat4d& v = out.cov;
  v.setZero();
  for (int m = 0; m < 2; ++m) {
    const double n = number(m);
    const Complex sq = square(m);
    out.mean_photons[m] = n;
    v(2 * m, 2 * m) = (2.0 * sq.real() + 2.0 * n + 1.0) / 4.0;
    v(2 * m + 1, 2 * m + 1) = (2.0 * n + 1.0 - 2.0 * sq.real()) / 4.0;
    v(2 * m, 2 * m + 1) = v(2 * m + 1, 2 * m) = sq.imag() / 2.0;
  }
  v(0, 2) = v(2, 0) = (c + dd).real() / 2.0;
  v(1, 3) = v(3, 1) = (dd - c).real() / 2.0;
  v(0, 3) = v(3, 0) = (c.imag() + dd.imag()) / 2.0;
  v(1, 2) = v(2, 1) = (c.imag() - dd.imag()) / 2.0;
  out.cross_sq = c.real();
  return out;
}

FockState2 alice_state(const ProtocolParams& p, int k, int cutoff) {
  validate(p);
  FockState2 st = tmsv_fock(p.n_s, cutoff);
  st = apply_loss(st, 0, p.kappa);
  st = apply_bpsk(st, 0, k);
  st = apply_additive_noise(st, 0, p.n_b);
  return apply_loss(st, 0, p.kappa);
}

int choose_cutoff(const ProtocolParams& p, double target, int max_cutoff) {
  for (int cutoff = 2; cutoff <= max_cutoff; ++cutoff) {
    try {
      if (trace_deficit(alice_state(p, 0, cutoff)) < target) return cutoff;
    } catch (const CutoffTooSmall&) {
    }
  }
  throw CutoffTooSmall("choose_cutoff: no cutoff up to " + std::to_string(max_cutoff) +
                       " reaches deficit " + std::to_string(target));
}

}  // namespace qisc::fock
