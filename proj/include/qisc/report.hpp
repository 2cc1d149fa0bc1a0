#pragma once

// Report builders behind the qisc command-line tool. Everything here returns
// data (JSON documents, CSV text, row structs); the tool only parses flags
// and prints.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qisc/montecarlo.hpp"
#include "qisc/protocol.hpp"

namespace qisc::report {

using Json = nlohmann::json;

Json point_report(const ProtocolParams& p);

struct SweepRow {
  std::int64_t m = 1;
  double alice_opt_upper = 0.5;
  double alice_opt_lower = 0.5;
  double eve_upper = 0.5;
  double eve_lower = 0.5;
  double homodyne_upper = 0.5;
  std::optional<double> opa_upper;  // empty when N_B = 0
};

struct SweepSpec {
  std::int64_t m_min = 1;
  std::int64_t m_max = 2;
  int points = 2;
  bool log_scale = true;
};

/// Distinct, increasing M values between m_min and m_max inclusive.
std::vector<std::int64_t> sweep_grid(const SweepSpec& spec);

std::vector<SweepRow> sweep(const ProtocolParams& p, const SweepSpec& spec);

std::string sweep_csv_header();
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct Preset {
  std::string name;
  ProtocolParams params;
  SweepSpec sweep;
};

/// figure1, figure2 (N_B = 0) and figure2-bright (N_S = 10, N_B = 100).
const std::vector<Preset>& presets();
std::optional<Preset> find_preset(std::string_view name);

enum class Receiver { kHomodyne, kOpa };

std::optional<Receiver> parse_receiver(std::string_view name);

struct McReport {
  mc::McResult result;
  double exponent = 0.0;
  double analytic_upper = 0.5;
  bool dominance = true;  // p_hat - 3 sigma <= analytic_upper
  Json json;
};

McReport mc_report(const ProtocolParams& p, Receiver receiver,
                   std::int64_t trials, std::uint64_t seed);

struct LinkBudget {
  double bandwidth_hz = 1e12;
  double bit_duration_s = 2e-6;
  double fiber_km = 50.0;
  double loss_db_per_km = 0.2;
};

struct LinkDerived {
  double kappa = 1.0;
  std::int64_t m = 1;
  double bit_rate = 1.0;
};

LinkDerived derive_link(const LinkBudget& lb);
Json link_budget_report(const LinkBudget& lb, double n_s, double n_b);

struct OracleGrid {
  std::vector<double> n_s{0.05, 0.1, 0.3};
  std::vector<double> kappa{0.3, 0.6, 0.9};
  std::vector<double> n_b{0.0, 0.2, 0.5};
  std::vector<double> s{0.3, 0.5, 0.7};
  double tolerance = 1e-4;
  double deficit_target = 1e-7;
  std::optional<int> cutoff;  // forced cutoff; chosen per point when empty
};

struct OracleRow {
  double n_s = 0.0;
  double kappa = 0.0;
  double n_b = 0.0;
  double s = 0.5;
  bool identical = false;  // rho0 = rho1 = bit-0 state
  int cutoff = 0;
  double deficit = 0.0;
  double gaussian = 0.0;
  double fock = 0.0;
  double deviation = 0.0;
  bool ok = false;
  std::string error;  // set when the point could not be evaluated
};

/// Gaussian-formula overlap vs trace-normalized Fock overlap for Alice's
/// bit-0/bit-1 pair at every grid point, plus one identical-state row per
/// parameter triple.
std::vector<OracleRow> oracle_check(const OracleGrid& grid);
std::string oracle_table(const std::vector<OracleRow>& rows);

}  // namespace qisc::report
