#include "qisc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qisc/discrimination.hpp"
#include "qisc/fock.hpp"

namespace qisc::report {

namespace {

Json ratio_or_null(double num, double den) {
  if (!(den > 0.0)) return nullptr;
  return num / den;
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace

Json point_report(const ProtocolParams& p) {
  validate(p);
  const auto sym = derive_symbols<double>(p);
  const auto ex = exact_exponents(p);

  Json j;
  j["params"] = {{"kappa", p.kappa}, {"ns", p.n_s}, {"nb", p.n_b}, {"m", p.m}};
  j["symbols"] = {{"S", sym.S},   {"Cq", sym.Cq}, {"A", sym.A}, {"Ca", sym.Ca},
                  {"D", sym.D},   {"E", sym.E},   {"Ce", sym.Ce}};
  j["exponents"] = {{"alice_opt", ex.alice},
                    {"eve", ex.eve},
                    {"homodyne", ex.homodyne},
                    {"opa", ex.opa ? Json(*ex.opa) : Json(nullptr)}};
  if (p.n_b > 0.0) {
    const auto as = asymptotic_exponents(p);
    j["asymptotic"] = {{"alice_opt", as.alice}, {"eve", as.eve},
                       {"homodyne", as.homodyne}, {"opa", as.opa},
                       {"valid", as.valid}};
  } else {
    j["asymptotic"] = nullptr;
  }
  const auto alice = make_bounds(ex.alice, p.m);
  const auto eve = make_bounds(ex.eve, p.m);
  j["bounds"] = {
      {"alice_opt", {{"upper", alice.upper}, {"lower", alice.lower}}},
      {"eve", {{"upper", eve.upper}, {"lower", eve.lower}}},
      {"homodyne", {{"upper", chernoff_upper(ex.homodyne, p.m)}}},
      {"opa", ex.opa ? Json{{"upper", chernoff_upper(*ex.opa, p.m)}} : Json(nullptr)}};
  j["ratios"] = {{"alice_over_eve", ratio_or_null(ex.alice, ex.eve)},
                 {"alice_over_homodyne", ratio_or_null(ex.alice, ex.homodyne)},
                 {"alice_over_opa", ex.opa ? ratio_or_null(ex.alice, *ex.opa) : Json(nullptr)}};
  return j;
}

std::vector<std::int64_t> sweep_grid(const SweepSpec& spec) {
  if (spec.m_min < 1 || spec.m_max <= spec.m_min) {
    throw InvalidParams("sweep: require 1 <= m_min < m_max");
  }
  if (spec.points < 2) throw InvalidParams("sweep: points must be >= 2");
  std::vector<std::int64_t> grid;
  const double lo = static_cast<double>(spec.m_min);
  const double hi = static_cast<double>(spec.m_max);
  for (int i = 0; i < spec.points; ++i) {
    const double t = static_cast<double>(i) / (spec.points - 1);
    const double v = spec.log_scale ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
    auto m = static_cast<std::int64_t>(std::llround(v));
    m = std::clamp(m, spec.m_min, spec.m_max);
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  return grid;
}

std::vector<SweepRow> sweep(const ProtocolParams& p, const SweepSpec& spec) {
  validate(p);
  const auto ex = exact_exponents(p);
  std::vector<SweepRow> rows;
  for (std::int64_t m : sweep_grid(spec)) {
    SweepRow r;
    r.m = m;
    r.alice_opt_upper = chernoff_upper(ex.alice, m);
    r.alice_opt_lower = error_lower(ex.alice, m);
    r.eve_upper = chernoff_upper(ex.eve, m);
    r.eve_lower = error_lower(ex.eve, m);
    r.homodyne_upper = chernoff_upper(ex.homodyne, m);
    if (ex.opa) r.opa_upper = chernoff_upper(*ex.opa, m);
    rows.push_back(r);
  }
  return rows;
}

std::string sweep_csv_header() {
  return "M,alice_opt_upper,alice_opt_lower,eve_upper,eve_lower,homodyne_upper,opa_upper";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows) {
    out << r.m << ',' << sci(r.alice_opt_upper) << ',' << sci(r.alice_opt_lower) << ','
        << sci(r.eve_upper) << ',' << sci(r.eve_lower) << ',' << sci(r.homodyne_upper) << ','
        << (r.opa_upper ? sci(*r.opa_upper) : std::string()) << '\n';
  }
  return out.str();
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"figure1", {0.1, 0.004, 100.0, 2'000'000}, {10'000, 10'000'000, 61, true}},
      {"figure2", {0.1, 0.004, 0.0, 10'000}, {100, 100'000, 61, true}},
      {"figure2-bright", {0.1, 10.0, 100.0, 1'000}, {10, 10'000, 61, true}},
  };
  return all;
}

std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

std::optional<Receiver> parse_receiver(std::string_view name) {
  if (name == "homodyne") return Receiver::kHomodyne;
  if (name == "opa") return Receiver::kOpa;
  return std::nullopt;
}

McReport mc_report(const ProtocolParams& p, Receiver receiver,
                   std::int64_t trials, std::uint64_t seed) {
  mc::McConfig cfg;
  cfg.params = p;
  cfg.trials = trials;
  cfg.seed = seed;

  McReport rep;
  if (receiver == Receiver::kHomodyne) {
    rep.result = mc::simulate_homodyne(cfg);
    rep.exponent = alice_homodyne_exponent(p);
  } else {
    rep.result = mc::simulate_opa(cfg);
    rep.exponent = opa_exponent(opa_spec(p));
  }
  rep.analytic_upper = chernoff_upper(rep.exponent, p.m);
  const double sigma = rep.result.sigma();
  rep.dominance = rep.result.p_hat - 3.0 * sigma <= rep.analytic_upper;
  rep.json = {
      {"receiver", receiver == Receiver::kHomodyne ? "homodyne" : "opa"},
      {"params", {{"kappa", p.kappa}, {"ns", p.n_s}, {"nb", p.n_b}, {"m", p.m}}},
      {"trials", rep.result.trials},
      {"seed", seed},
      {"errors", rep.result.errors},
      {"p_hat", rep.result.p_hat},
      {"sigma", sigma},
      {"ci95", {rep.result.ci95.lo, rep.result.ci95.hi}},
      {"exponent", rep.exponent},
      {"analytic_upper", rep.analytic_upper},
      {"dominance_pass", rep.dominance}};
  return rep;
}

LinkDerived derive_link(const LinkBudget& lb) {
  if (!(lb.bandwidth_hz > 0.0) || !(lb.bit_duration_s > 0.0) || !(lb.fiber_km >= 0.0) ||
      !(lb.loss_db_per_km >= 0.0) || !std::isfinite(lb.bandwidth_hz * lb.bit_duration_s)) {
    throw InvalidParams("link budget: bandwidth and bit duration must be positive, "
                        "length and attenuation non-negative");
  }
  LinkDerived d;
  d.kappa = std::pow(10.0, -lb.fiber_km * lb.loss_db_per_km / 10.0);
  d.m = static_cast<std::int64_t>(std::llround(lb.bandwidth_hz * lb.bit_duration_s));
  d.bit_rate = 1.0 / lb.bit_duration_s;
  if (d.m < 1) throw InvalidParams("link budget: W T rounds to zero mode pairs");
  if (!(d.kappa > 0.0)) throw InvalidParams("link budget: transmissivity underflows to zero");
  return d;
}

Json link_budget_report(const LinkBudget& lb, double n_s, double n_b) {
  const LinkDerived d = derive_link(lb);
  const ProtocolParams p{d.kappa, n_s, n_b, d.m};
  Json j = point_report(p);
  j["link"] = {{"bandwidth_hz", lb.bandwidth_hz},
               {"bit_duration_s", lb.bit_duration_s},
               {"fiber_km", lb.fiber_km},
               {"loss_db_per_km", lb.loss_db_per_km},
               {"kappa", d.kappa},
               {"m", d.m},
               {"bit_rate", d.bit_rate}};
  return j;
}

std::vector<OracleRow> oracle_check(const OracleGrid& grid) {
  using Ld = long double;
  std::vector<OracleRow> rows;
  for (double ns : grid.n_s) {
    for (double kappa : grid.kappa) {
      for (double nb : grid.n_b) {
        const ProtocolParams p{kappa, ns, nb, 1};
        OracleRow base;
        base.n_s = ns;
        base.kappa = kappa;
        base.n_b = nb;

        std::vector<OracleRow> block;
        for (double s : grid.s) {
          OracleRow r = base;
          r.s = s;
          block.push_back(r);
        }
        OracleRow same = base;
        same.identical = true;

        try {
          const int cutoff = grid.cutoff ? *grid.cutoff
                                         : fock::choose_cutoff(p, grid.deficit_target);
          fock::FockState2 rho0 = fock::alice_state(p, 0, cutoff);
          fock::FockState2 rho1 = fock::alice_state(p, 1, cutoff);
          const double deficit = std::max(fock::trace_deficit(rho0), fock::trace_deficit(rho1));
          if (deficit >= grid.deficit_target) {
            throw CutoffTooSmall("trace deficit " + sci(deficit) + " at cutoff " +
                                 std::to_string(cutoff));
          }
          rho0.rho /= rho0.rho.trace().real();
          rho1.rho /= rho1.rho.trace().real();

          const auto cov0 = alice_conditional_cov<Ld>(p, 0);
          const auto cov1 = alice_conditional_cov<Ld>(p, 1);
          const auto fock_vals = fock::s_overlap_fock(rho0, rho1, grid.s);
          for (std::size_t i = 0; i < block.size(); ++i) {
            OracleRow& r = block[i];
            r.cutoff = cutoff;
            r.deficit = deficit;
            r.gaussian = static_cast<double>(
                gaussian_s_overlap<Ld>(cov0, cov1, static_cast<Ld>(r.s)).q_s);
            r.fock = fock_vals[i];
          }
          same.cutoff = cutoff;
          same.deficit = deficit;
          same.gaussian = static_cast<double>(
              gaussian_s_overlap<Ld>(cov0, cov0, Ld(0.5)).q_s);
          same.fock = fock::s_overlap_fock(rho0, rho0, 0.5);
          block.push_back(same);
          for (auto& r : block) {
            r.deviation = std::abs(r.gaussian - r.fock);
            r.ok = r.deviation <= grid.tolerance;
          }
        } catch (const Error& e) {
          if (block.size() == grid.s.size()) block.push_back(same);
          for (auto& r : block) {
            r.ok = false;
            r.error = e.what();
          }
        }
        rows.insert(rows.end(), block.begin(), block.end());
      }
    }
  }
  return rows;
}

std::string oracle_table(const std::vector<OracleRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-6s %-6s %-9s %-6s %-10s %-16s %-16s %-10s %s\n",
                "ns", "kappa", "nb", "s", "cutoff", "deficit", "gaussian", "fock",
                "deviation", "status");
  out << line;
  for (const auto& r : rows) {
    const std::string s_label = r.identical ? "same@0.5" : std::to_string(r.s).substr(0, 4);
    if (!r.error.empty()) {
      std::snprintf(line, sizeof line, "%-6g %-6g %-6g %-9s %-6s %-10s %-16s %-16s %-10s FAIL %s\n",
                    r.n_s, r.kappa, r.n_b, s_label.c_str(), "-", "-", "-", "-", "-",
                    r.error.c_str());
    } else {
      std::snprintf(line, sizeof line,
                    "%-6g %-6g %-6g %-9s %-6d %-10.2e %-16.12f %-16.12f %-10.2e %s\n", r.n_s,
                    r.kappa, r.n_b, s_label.c_str(), r.cutoff, r.deficit, r.gaussian, r.fock,
                    r.deviation, r.ok ? "ok" : "FAIL");
    }
    out << line;
  }
  return out.str();
}

}  // namespace qisc::report
