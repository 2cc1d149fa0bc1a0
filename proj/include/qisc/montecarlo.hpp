#pragma once

// Monte-Carlo error rates of Alice's two implementable receivers.
//
// Homodyne. Given k, each mode pair yields (x, y) ~ N(0, H_k) with
// H_k = (1/4) [[A, +/-C], [+/-C, S]]. Since det H_0 = det H_1 and
// H_0^{-1} - H_1^{-1} = (C / (2 det H)) [[0, -1], [-1, 0]] (the diagonal
// terms cancel), the log-likelihood ratio over M pairs is
//   ln p0/p1 = (C / (2 det H)) sum_m x_m y_m,
// so the minimum-error rule is: decide k = 0 iff sum_m x_m y_m >= 0.
// With standardized u, v of correlation r = +/- C / sqrt(AS),
// u v = [(1 + r) X - (1 - r) Y] / 2 where (u + v)^2 / (2(1 + r)) and
// (u - v)^2 / (2(1 - r)) are independent chi-square(1). Summing over M pairs,
// the statistic is exactly [(1 + r) X - (1 - r) Y] / 2 with X, Y ~ chi2(M).
//
// OPA. Each output mode is thermal with mean N_k, so the total count is a
// sum of M geometric variables, i.e. negative binomial(M, 1 / (N_k + 1)).
// The likelihood ratio is monotone in the count; decide k = 0 iff
// count >= n* = M ln[(N0+1)/(N1+1)] / ln[N0 (N1+1) / (N1 (N0+1))].
//
// Each trial draws from its own generator seeded by (seed, trial index), so
// results do not depend on the thread count.

#include <cstdint>

#include "qisc/protocol.hpp"

namespace qisc::mc {

enum class Sampling {
  kSufficientStatistic,  // exact law of the decision statistic
  kPerMode,              // draw every mode pair explicitly
};

struct McConfig {
  ProtocolParams params;  // params.m is the number of mode pairs
  std::int64_t trials = 10'000;
  std::uint64_t seed = 1;
  Sampling sampling = Sampling::kSufficientStatistic;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct McResult {
  std::int64_t errors = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  Interval ci95;

  /// Binomial standard error sqrt(p (1 - p) / n).
  double sigma() const;
};

/// Wilson score interval at 95% (z = 1.959964).
Interval wilson_interval(std::int64_t successes, std::int64_t trials);

McResult simulate_homodyne(const McConfig& cfg);
McResult simulate_opa(const McConfig& cfg);

/// SplitMix64 finalizer of (seed, index); the per-trial generator seed.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qisc::mc
