#include "qisc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace qisc::mc {

namespace {

using Engine = std::mt19937_64;

void validate_config(const McConfig& cfg) {
  validate(cfg.params);
  if (cfg.trials < 100) throw InvalidParams("mc: trials must be >= 100");
}

// Runs trial(i, engine) -> bool (true = error) over all trials, splitting the
// index range across threads and summing the error counts.
McResult run_trials(const McConfig& cfg,
                    const std::function<bool(Engine&)>& trial) {
  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials)));

  std::vector<std::int64_t> errors(threads, 0);
  auto work = [&](unsigned t) {
    const std::int64_t begin = cfg.trials * t / threads;
    const std::int64_t end = cfg.trials * (t + 1) / threads;
    std::int64_t local = 0;
    for (std::int64_t i = begin; i < end; ++i) {
      Engine engine(trial_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      if (trial(engine)) ++local;
    }
    errors[t] = local;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  McResult r;
  r.trials = cfg.trials;
  for (auto e : errors) r.errors += e;
  r.p_hat = static_cast<double>(r.errors) / static_cast<double>(r.trials);
  r.ci95 = wilson_interval(r.errors, r.trials);
  return r;
}

int draw_bit(Engine& engine) { return static_cast<int>(engine() >> 63); }

}  // namespace

double McResult::sigma() const {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials) {
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  // The endpoints are exact at 0 and n successes; rounding would leave them off by ulps.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

McResult simulate_homodyne(const McConfig& cfg) {
  validate_config(cfg);
  const auto d = derive_symbols<double>(cfg.params);
  const double rho = d.Ca / std::sqrt(d.A * d.S);
  const std::int64_t m = cfg.params.m;
  const Sampling sampling = cfg.sampling;

  return run_trials(cfg, [=](Engine& engine) {
    const int k = draw_bit(engine);
    const double r = k == 0 ? rho : -rho;
    double statistic = 0.0;
    if (sampling == Sampling::kSufficientStatistic) {
      std::chi_squared_distribution<double> chi2(static_cast<double>(m));
      const double x = chi2(engine);
      const double y = chi2(engine);
      statistic = 0.5 * ((1.0 + r) * x - (1.0 - r) * y);
    } else {
      // Correlation sign is all that matters, so draw standardized pairs.
      std::normal_distribution<double> normal;
      const double tail = std::sqrt(1.0 - r * r);
      for (std::int64_t i = 0; i < m; ++i) {
        const double u = normal(engine);
        const double v = r * u + tail * normal(engine);
        statistic += u * v;
      }
    }
    const int decided = statistic >= 0.0 ? 0 : 1;
    return decided != k;
  });
}

McResult simulate_opa(const McConfig& cfg) {
  validate_config(cfg);
  const OpaSpec spec = opa_spec(cfg.params);
  const std::int64_t m = cfg.params.m;
  const Sampling sampling = cfg.sampling;

  // Decision: k = 0 iff count >= threshold (or count > 0 when N1 = 0).
  const long double n0 = spec.n0;
  const long double n1 = spec.n1;
  const bool identical = !(n0 > n1);
  const bool dark_one = n1 == 0.0L;
  long double threshold = 0.0L;
  if (!identical && !dark_one) {
    threshold = static_cast<long double>(m) * std::log((n0 + 1) / (n1 + 1)) /
                std::log(n0 * (n1 + 1) / (n1 * (n0 + 1)));
  }
  const double p_success[2] = {1.0 / (spec.n0 + 1.0), 1.0 / (spec.n1 + 1.0)};

  return run_trials(cfg, [=](Engine& engine) {
    const int k = draw_bit(engine);
    if (identical) return k != 0;
    long long count = 0;
    if (p_success[k] >= 1.0) {
      count = 0;
    } else if (sampling == Sampling::kSufficientStatistic) {
      std::negative_binomial_distribution<long long> nb(m, p_success[k]);
      count = nb(engine);
    } else {
      std::geometric_distribution<long long> geo(p_success[k]);
      for (std::int64_t i = 0; i < m; ++i) count += geo(engine);
    }
    int decided = 0;
    if (dark_one) {
      decided = count > 0 ? 0 : 1;
    } else {
      decided = static_cast<long double>(count) >= threshold ? 0 : 1;
    }
    return decided != k;
  });
}

}  // namespace qisc::mc
