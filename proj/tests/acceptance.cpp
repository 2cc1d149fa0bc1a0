// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qisc/analytic_decomp.hpp"
#include "qisc/discrimination.hpp"
#include "qisc/montecarlo.hpp"
#include "qisc/report.hpp"
#include "qisc/symplectic.hpp"
#include "test_util.hpp"

namespace {

using namespace qisc;
using qisc::testing::Mat4d;
using qisc::testing::rel_err;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

Outcome golden_numbers() {
  const auto t0 = Clock::now();
  const ProtocolParams p = ProtocolParams::figure1();
  const double opa_upper = chernoff_upper(opa_exponent(opa_spec(p)), p.m);
  const auto eve = make_bounds(eve_exponent(p), p.m);
  const double secs = seconds_since(t0);
  const bool pass = opa_upper <= 7.15e-6 && within(opa_upper, 7.15e-6, 0.05) &&
                    within(eve.lower, 0.285, 0.05) && within(eve.upper, 0.451, 0.05) &&
                    secs < 1.0;
  return {pass, fmt("opa_upper=%.4e eve_lower=%.4f eve_upper=%.4f (%.1f ms)", opa_upper,
                    eve.lower, eve.upper, secs * 1e3)};
}

Outcome exponent_ratios() {
  const ProtocolParams p = ProtocolParams::figure1();
  const auto ex = exact_exponents(p);
  const double r_hom = ex.alice / ex.homodyne;
  const double r_opa = ex.alice / *ex.opa;
  const double r_eve = ex.alice / ex.eve;
  const double eve_target = 1.0 / ((1.0 - p.kappa) * p.n_s);
  const bool ok_hom = within(r_hom, 4.0, 0.05);
  const bool ok_opa = within(r_opa, 2.0, 0.05);
  const bool ok_eve = within(r_eve, eve_target, 0.10);
  return {ok_hom && ok_opa && ok_eve,
          fmt("alice/homodyne=%.3f (4 +/- 5%%: %s) alice/opa=%.3f (2 +/- 5%%: %s) "
              "alice/eve=%.1f (%.1f +/- 10%%: %s)",
              r_hom, ok_hom ? "ok" : "miss", r_opa, ok_opa ? "ok" : "miss", r_eve, eve_target,
              ok_eve ? "ok" : "miss")};
}

Outcome asymptotic_agreement() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> log_ns(std::log(1e-4), std::log(5e-3));
  std::uniform_real_distribution<double> kappa_dist(0.05, 0.95);
  std::uniform_real_distribution<double> log_knb(std::log(20.0), std::log(2000.0));
  const char* names[4] = {"alice", "eve", "homodyne", "opa"};
  int misses[4] = {0, 0, 0, 0};
  double worst[4] = {0, 0, 0, 0};
  for (int i = 0; i < 50; ++i) {
    ProtocolParams p;
    p.kappa = kappa_dist(rng);
    p.n_s = std::exp(log_ns(rng));
    p.n_b = std::exp(log_knb(rng)) / p.kappa;
    const auto ex = exact_exponents(p);
    const auto as = asymptotic_exponents(p);
    const double exact[4] = {ex.alice, ex.eve, ex.homodyne, *ex.opa};
    const double approx[4] = {as.alice, as.eve, as.homodyne, as.opa};
    for (int j = 0; j < 4; ++j) {
      const double dev = rel_err(exact[j], approx[j]);
      worst[j] = std::max(worst[j], dev);
      if (dev > 0.10) ++misses[j];
    }
  }
  const double secs = seconds_since(t0);
  std::string detail;
  bool pass = secs < 1.0;
  for (int j = 0; j < 4; ++j) {
    pass = pass && misses[j] == 0;
    detail += fmt("%s %d/50 off by >10%% (worst %.1f%%); ", names[j], misses[j], 100 * worst[j]);
  }
  detail += fmt("(%.0f ms)", secs * 1e3);
  return {pass, detail};
}

Outcome figure2_regimes() {
  const auto dark = report::find_preset("figure2")->params;
  const auto bright = report::find_preset("figure2-bright")->params;
  const double a0 = alice_exponent(dark);
  const double e0 = eve_exponent(dark);
  const double a1 = alice_exponent(bright);
  const double e1 = eve_exponent(bright);
  const double factor = std::max(a1, e1) / std::min(a1, e1);
  return {e0 > a0 && factor <= 1.5,
          fmt("N_B=0: eve=%.4e > alice=%.4e; N_S=10,N_B=100: factor %.3f <= 1.5", e0, a0,
              factor)};
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto rows = report::oracle_check(report::OracleGrid{});
  const double secs = seconds_since(t0);
  double max_dev = 0.0;
  double max_deficit = 0.0;
  double max_identical = 0.0;
  bool all_ok = true;
  for (const auto& r : rows) {
    all_ok = all_ok && r.ok && r.error.empty();
    max_dev = std::max(max_dev, r.deviation);
    max_deficit = std::max(max_deficit, r.deficit);
    if (r.identical) max_identical = std::max(max_identical, r.deviation);
  }
  const bool pass = all_ok && max_dev < 1e-4 && max_deficit < 1e-7 && secs < 120.0;
  return {pass, fmt("%zu rows, max |dQ|=%.2e, max deficit=%.2e, identical rows %.1e (%.1f s)",
                    rows.size(), max_dev, max_deficit, max_identical, secs)};
}

Outcome symplectic_suite() {
  std::mt19937_64 rng(6);
  double worst_rec = 0.0;
  double worst_symp = 0.0;
  double worst_inv = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto rc = qisc::testing::random_physical_cov(rng);
    const auto d = williamson(rc.cov);
    worst_rec = std::max(worst_rec, (d.reconstruct() - rc.cov).cwiseAbs().maxCoeff() /
                                        rc.cov.cwiseAbs().maxCoeff());
    const Mat4d omega = symplectic_form<double>();
    worst_symp = std::max(worst_symp, (d.S * omega * d.S.transpose() - omega).cwiseAbs().maxCoeff());
    const Mat4d t = qisc::testing::random_symplectic(rng, 0.5);
    Mat4d moved = t * rc.cov * t.transpose();
    moved = (moved + moved.transpose()) / 2.0;
    const auto a = symplectic_spectrum(rc.cov);
    const auto b = symplectic_spectrum(moved);
    worst_inv = std::max({worst_inv, rel_err(b(0), a(0)), rel_err(b(1), a(1))});
  }
  double worst_analytic = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto p = qisc::testing::random_params(rng);
    const auto sym = derive_symbols<double>(p);
    for (int k : {0, 1}) {
      const auto na = williamson(alice_conditional_cov<double>(p, k));
      const auto ca = analytic_decomp_alice(sym, k);
      const auto ne = williamson(eve_conditional_cov<double>(p, k));
      const auto ce = analytic_decomp_eve(sym, k);
      for (int j = 0; j < 2; ++j) {
        worst_analytic = std::max({worst_analytic, rel_err(ca.nu(j), na.nu(j)),
                                   rel_err(ce.nu(j), ne.nu(j))});
      }
    }
  }
  const bool pass = worst_rec <= 1e-8 && worst_symp <= 1e-9 && worst_inv <= 1e-10 &&
                    worst_analytic <= 1e-10;
  return {pass, fmt("reconstruction %.1e, symplecticity %.1e, invariance %.1e, "
                    "analytic vs numeric %.1e",
                    worst_rec, worst_symp, worst_inv, worst_analytic)};
}

struct Fit {
  double slope = 0.0;
  bool dominated = true;
  std::vector<std::int64_t> errors;
};

// Weighted least squares of -ln(2 p_hat) against M; the weight of each point
// is its error count, the inverse variance of ln p_hat to leading order.
Fit fit_exponent(const std::function<mc::McResult(const ProtocolParams&)>& run,
                 double exponent) {
  Fit fit;
  const ProtocolParams base = ProtocolParams::figure1();
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double scale : {1.25, 2.5, 5.0, 10.0}) {
    ProtocolParams p = base;
    p.m = static_cast<std::int64_t>(scale * 1e5);
    const auto r = run(p);
    fit.errors.push_back(r.errors);
    fit.dominated = fit.dominated && r.p_hat - 3 * r.sigma() <= chernoff_upper(exponent, p.m);
    if (r.errors == 0) continue;
    const double w = static_cast<double>(r.errors);
    const double x = static_cast<double>(p.m);
    const double y = -std::log(2 * r.p_hat);
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  fit.slope = (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
  return fit;
}

Outcome monte_carlo() {
  const auto t0 = Clock::now();
  const ProtocolParams ref = ProtocolParams::figure1();
  const double hom_target = ref.kappa * ref.n_s / ref.n_b;
  const double opa_target = 2 * hom_target;
  auto cfg_for = [](const ProtocolParams& p) {
    mc::McConfig cfg;
    cfg.params = p;
    cfg.trials = 10'000;
    cfg.seed = 20260101;
    return cfg;
  };
  const double hom_exact = alice_homodyne_exponent(ref);
  const double opa_exact = opa_exponent(opa_spec(ref));
  const auto hom = fit_exponent([&](const ProtocolParams& p) { return mc::simulate_homodyne(cfg_for(p)); },
                                hom_exact);
  const auto opa = fit_exponent([&](const ProtocolParams& p) { return mc::simulate_opa(cfg_for(p)); },
                                opa_exact);
  // Same seed must reproduce the same counts.
  ProtocolParams probe = ref;
  probe.m = 250'000;
  const bool deterministic =
      mc::simulate_homodyne(cfg_for(probe)).errors == hom.errors[1] &&
      mc::simulate_opa(cfg_for(probe)).errors == opa.errors[1];
  const double secs = seconds_since(t0);
  const bool hom_ok = hom.dominated && within(hom.slope, hom_target, 0.25);
  const bool opa_ok = opa.dominated && within(opa.slope, opa_target, 0.25);
  return {hom_ok && opa_ok && deterministic && secs < 300.0,
          fmt("homodyne slope %.3e vs %.1e (x%.3f; x%.3f of exact; dominance %s); "
              "opa slope %.3e vs %.1e (x%.3f; x%.3f of exact; dominance %s); "
              "deterministic %s (%.1f s)",
              hom.slope, hom_target, hom.slope / hom_target, hom.slope / hom_exact,
              hom.dominated ? "ok" : "violated", opa.slope, opa_target, opa.slope / opa_target,
              opa.slope / opa_exact, opa.dominated ? "ok" : "violated",
              deterministic ? "yes" : "no", secs)};
}

Outcome bound_ordering() {
  std::vector<double> exponents{0.0};
  for (int i = 0; i <= 120; ++i) exponents.push_back(std::pow(10.0, -12.0 + i * 0.1));
  std::vector<std::int64_t> ms;
  for (int i = 0; i <= 90; ++i) ms.push_back(static_cast<std::int64_t>(std::llround(std::pow(10.0, i * 0.1))));
  long checked = 0;
  long violations = 0;
  for (double e : exponents) {
    for (std::int64_t m : ms) {
      const double up = chernoff_upper(e, m);
      const double lo = error_lower(e, m);
      ++checked;
      if (lo > up) ++violations;
      if (e == 0.0 && !(up == 0.5 && lo == 0.5)) ++violations;
      // Strict ordering wherever the upper bound is representable.
      if (e > 0.0 && up > 0.0 && !(lo < up)) ++violations;
    }
  }
  return {violations == 0, fmt("%ld (exponent, M) pairs, %ld violations", checked, violations)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "golden numbers", golden_numbers},
      {2, "exponent ratios", exponent_ratios},
      {3, "asymptotic agreement", asymptotic_agreement},
      {4, "figure-2 regimes", figure2_regimes},
      {5, "oracle equivalence", oracle_equivalence},
      {6, "symplectic property suite", symplectic_suite},
      {7, "monte-carlo dominance and tracking", monte_carlo},
      {8, "universal bound ordering", bound_ordering},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
