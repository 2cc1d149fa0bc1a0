// qisc: error-probability bounds for quantum-illumination secure
// communication.
//
//   qisc point        --kappa 0.1 --ns 0.004 --nb 100 --m 2000000
//   qisc sweep        --preset figure1 --out fig1.csv
//   qisc mc           --receiver homodyne --m 500000 --trials 10000 --seed 7
//   qisc link-budget  --bandwidth 1e12 --bit-duration 2e-6 --fiber-km 50
//   qisc oracle-check
//
// Every command also takes --config <file.json>; explicit flags win over the
// file. Exit status: 0 success, 1 usage error, 2 validation or oracle failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qisc/errors.hpp"
#include "qisc/report.hpp"

namespace {

using qisc::report::Json;

constexpr int kUsageError = 1;
constexpr int kValidationError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double kappa = 0.1;
  double ns = 0.004;
  double nb = 100.0;
  std::int64_t m = 2'000'000;
  std::int64_t trials = 10'000;
  std::uint64_t seed = 1;
  std::string preset;
  std::string config;
  std::string out;
  std::string receiver = "homodyne";
  std::int64_t m_min = 0;
  std::int64_t m_max = 0;
  int points = 0;
  std::string scale = "log";
  double bandwidth = 1e12;
  double bit_duration = 2e-6;
  double fiber_km = 50.0;
  double loss_db_per_km = 0.2;
  std::vector<double> grid_ns;
  std::vector<double> grid_kappa;
  std::vector<double> grid_nb;
  std::vector<double> grid_s;
  int cutoff = 0;
  double tolerance = 1e-4;
};

// Flags registered on a subcommand, keyed by the JSON config name.
struct Registered {
  std::vector<std::pair<std::string, CLI::Option*>> flags;
  CLI::Option* find(const std::string& key) const {
    for (const auto& [k, opt] : flags) {
      if (k == key) return opt;
    }
    return nullptr;
  }
};

template <typename T>
CLI::Option* add(CLI::App* cmd, Registered& reg, const std::string& key,
                 const std::string& flag, T& target, const std::string& help) {
  CLI::Option* opt = cmd->add_option(flag, target, help);
  reg.flags.emplace_back(key, opt);
  return opt;
}

void add_params(CLI::App* cmd, Registered& reg, Options& o) {
  add(cmd, reg, "kappa", "--kappa", o.kappa, "channel transmissivity in (0, 1]");
  add(cmd, reg, "ns", "--ns", o.ns, "mean signal photons per mode");
  add(cmd, reg, "nb", "--nb", o.nb, "Bob's added noise photons per mode");
  add(cmd, reg, "m", "--m", o.m, "mode pairs per bit");
  add(cmd, reg, "preset", "--preset", o.preset, "figure1 | figure2 | figure2-bright");
  cmd->add_option("--config", o.config, "JSON file with option values");
  cmd->add_option("--out", o.out, "write output to this file instead of stdout");
}

// Fill options from the config file, skipping anything given on the command
// line. A preset (from either source) is applied first.
void apply_config(const Registered& reg, Options& o) {
  Json cfg = Json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw UsageError("cannot open config file " + o.config);
    try {
      cfg = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
  }
  auto given = [&](const std::string& key) {
    const CLI::Option* opt = reg.find(key);
    return opt != nullptr && opt->count() > 0;
  };
  auto take = [&](const std::string& key, auto& target) {
    if (!cfg.contains(key) || given(key)) return;
    if (reg.find(key) == nullptr) throw UsageError("config key '" + key + "' does not apply");
    try {
      cfg.at(key).get_to(target);
    } catch (const Json::exception& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  };

  take("preset", o.preset);
  if (!o.preset.empty()) {
    auto preset = qisc::report::find_preset(o.preset);
    if (!preset) throw UsageError("unknown preset '" + o.preset + "'");
    if (!given("kappa")) o.kappa = preset->params.kappa;
    if (!given("ns")) o.ns = preset->params.n_s;
    if (!given("nb")) o.nb = preset->params.n_b;
    if (!given("m")) o.m = preset->params.m;
    if (!given("m_min")) o.m_min = preset->sweep.m_min;
    if (!given("m_max")) o.m_max = preset->sweep.m_max;
    if (!given("points")) o.points = preset->sweep.points;
  }
  for (const auto& [key, _] : cfg.items()) {
    if (reg.find(key) == nullptr) throw UsageError("config key '" + key + "' does not apply");
  }
  take("kappa", o.kappa);
  take("ns", o.ns);
  take("nb", o.nb);
  take("m", o.m);
  take("trials", o.trials);
  take("seed", o.seed);
  take("receiver", o.receiver);
  take("m_min", o.m_min);
  take("m_max", o.m_max);
  take("points", o.points);
  take("scale", o.scale);
  take("bandwidth", o.bandwidth);
  take("bit_duration", o.bit_duration);
  take("fiber_km", o.fiber_km);
  take("loss_db_per_km", o.loss_db_per_km);
  take("grid_ns", o.grid_ns);
  take("grid_kappa", o.grid_kappa);
  take("grid_nb", o.grid_nb);
  take("grid_s", o.grid_s);
  take("cutoff", o.cutoff);
  take("tolerance", o.tolerance);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw UsageError("cannot write " + o.out);
  file << text;
}

qisc::ProtocolParams params_of(const Options& o) { return {o.kappa, o.ns, o.nb, o.m}; }

int run_point(const Options& o) {
  emit(o, qisc::report::point_report(params_of(o)).dump(2) + "\n");
  return 0;
}

int run_sweep(const Options& o) {
  if (o.scale != "log" && o.scale != "linear") throw UsageError("--scale must be log or linear");
  if (o.m_min == 0 || o.m_max == 0 || o.points == 0) {
    throw UsageError("sweep needs --m-min, --m-max and --points (or a preset)");
  }
  const qisc::report::SweepSpec spec{o.m_min, o.m_max, o.points, o.scale == "log"};
  emit(o, qisc::report::sweep_csv(qisc::report::sweep(params_of(o), spec)));
  return 0;
}

int run_mc(const Options& o) {
  const auto receiver = qisc::report::parse_receiver(o.receiver);
  if (!receiver) throw UsageError("--receiver must be homodyne or opa");
  const auto rep = qisc::report::mc_report(params_of(o), *receiver, o.trials, o.seed);
  emit(o, rep.json.dump(2) + "\n");
  return rep.dominance ? 0 : kValidationError;
}

int run_link_budget(const Options& o) {
  const qisc::report::LinkBudget lb{o.bandwidth, o.bit_duration, o.fiber_km, o.loss_db_per_km};
  emit(o, qisc::report::link_budget_report(lb, o.ns, o.nb).dump(2) + "\n");
  return 0;
}

int run_oracle(const Options& o) {
  qisc::report::OracleGrid grid;
  if (!o.grid_ns.empty()) grid.n_s = o.grid_ns;
  if (!o.grid_kappa.empty()) grid.kappa = o.grid_kappa;
  if (!o.grid_nb.empty()) grid.n_b = o.grid_nb;
  if (!o.grid_s.empty()) grid.s = o.grid_s;
  if (o.cutoff > 0) grid.cutoff = o.cutoff;
  grid.tolerance = o.tolerance;
  const auto rows = qisc::report::oracle_check(grid);
  bool all_ok = true;
  double worst = 0.0;
  for (const auto& r : rows) {
    all_ok = all_ok && r.ok;
    if (r.error.empty()) worst = std::max(worst, r.deviation);
  }
  std::string text = qisc::report::oracle_table(rows);
  text += "max deviation " + std::to_string(worst) + (all_ok ? "  PASS\n" : "  FAIL\n");
  emit(o, text);
  return all_ok ? 0 : kValidationError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-probability bounds for quantum-illumination secure communication"};
  app.require_subcommand(1);
  Options o;

  Registered point_reg, sweep_reg, mc_reg, link_reg, oracle_reg;

  auto* point = app.add_subcommand("point", "exponents and bounds at one parameter point (JSON)");
  add_params(point, point_reg, o);

  auto* sweep = app.add_subcommand("sweep", "bounds versus M (CSV)");
  add_params(sweep, sweep_reg, o);
  add(sweep, sweep_reg, "m_min", "--m-min", o.m_min, "smallest M");
  add(sweep, sweep_reg, "m_max", "--m-max", o.m_max, "largest M");
  add(sweep, sweep_reg, "points", "--points", o.points, "number of M values");
  add(sweep, sweep_reg, "scale", "--scale", o.scale, "log | linear");

  auto* mc = app.add_subcommand("mc", "Monte-Carlo error rate of a receiver vs its bound (JSON)");
  add_params(mc, mc_reg, o);
  add(mc, mc_reg, "receiver", "--receiver", o.receiver, "homodyne | opa");
  add(mc, mc_reg, "trials", "--trials", o.trials, "number of simulated bits");
  add(mc, mc_reg, "seed", "--seed", o.seed, "RNG seed");

  auto* link = app.add_subcommand("link-budget", "bounds for a fiber link (JSON)");
  add_params(link, link_reg, o);
  add(link, link_reg, "bandwidth", "--bandwidth", o.bandwidth, "phase-matching bandwidth W [Hz]");
  add(link, link_reg, "bit_duration", "--bit-duration", o.bit_duration, "bit duration T [s]");
  add(link, link_reg, "fiber_km", "--fiber-km", o.fiber_km, "fiber length [km]");
  add(link, link_reg, "loss_db_per_km", "--loss-db-per-km", o.loss_db_per_km, "attenuation [dB/km]");

  auto* oracle = app.add_subcommand("oracle-check", "Gaussian formula vs truncated Fock space");
  oracle->add_option("--config", o.config, "JSON file with option values");
  oracle->add_option("--out", o.out, "write output to this file instead of stdout");
  add(oracle, oracle_reg, "grid_ns", "--grid-ns", o.grid_ns, "N_S values")->delimiter(',');
  add(oracle, oracle_reg, "grid_kappa", "--grid-kappa", o.grid_kappa, "kappa values")->delimiter(',');
  add(oracle, oracle_reg, "grid_nb", "--grid-nb", o.grid_nb, "N_B values")->delimiter(',');
  add(oracle, oracle_reg, "grid_s", "--grid-s", o.grid_s, "s values")->delimiter(',');
  add(oracle, oracle_reg, "cutoff", "--cutoff", o.cutoff, "force this Fock cutoff");
  add(oracle, oracle_reg, "tolerance", "--tolerance", o.tolerance, "allowed |deviation|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (point->parsed()) {
      apply_config(point_reg, o);
      return run_point(o);
    }
    if (sweep->parsed()) {
      apply_config(sweep_reg, o);
      return run_sweep(o);
    }
    if (mc->parsed()) {
      apply_config(mc_reg, o);
      return run_mc(o);
    }
    if (link->parsed()) {
      apply_config(link_reg, o);
      return run_link_budget(o);
    }
    if (oracle->parsed()) {
      apply_config(oracle_reg, o);
      return run_oracle(o);
    }
  } catch (const UsageError& e) {
    std::cerr << "qisc: " << e.what() << "\n";
    return kUsageError;
  } catch (const qisc::Error& e) {
    std::cerr << "qisc: " << e.what() << "\n";
    return kValidationError;
  }
  return kUsageError;
}
