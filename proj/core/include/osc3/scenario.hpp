#pragma once

#include "osc3/ermakov.hpp"
#include "osc3/model.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace osc3 {

/// A time sweep over one coupling schedule.
///
/// JSON layout (every key except `schedule` and `t_end` is optional):
///
///     {
///       "name": "fig1",
///       "schedule": {
///         "k0":  {"kind": "quench", "initial": 4, "final": 6},
///         "j12": {"kind": "constant", "value": 1},
///         "j13": {"kind": "tabulated", "times": [0, 1, 2], "values": [3, 3.5, 4]},
///         "j23": 8
///       },
///       "t_start": 0, "t_end": 5, "samples": 500,
///       "alphas": [0.5, 2, 3],
///       "reltol": 1e-10,
///       "oracle": false,
///       "outputs": {"csv": "fig1.csv", "plot": "fig1.gp"}
///     }
///
/// A bare number for a parameter means a constant profile.
struct ScenarioConfig {
  std::string name = "scenario";
  CouplingSchedule schedule;
  double t_start = 0.0;
  double t_end = 1.0;
  int samples = 100;
  std::vector<double> alphas{0.5, 2.0, 3.0};
  double reltol = kDefaultOdeTolerance;
  bool oracle = false;
  std::string csv_path;
  std::string plot_path;

  /// Throws ConfigError unless t_start ≥ 0, t_end > t_start, samples ≥ 2 and every α > 0.
  void validate() const;
  /// `samples` evenly spaced times from t_start to t_end inclusive.
  std::vector<double> times() const;
};

ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string to_json(const ScenarioConfig& c);

/// The three sudden-quench parameter sets `fig1`, `fig2`, `fig3`.
ScenarioConfig builtin_scenario(std::string_view name);
std::vector<std::string> builtin_names();

// --- sweep ------------------------------------------------------------------

struct SweepRow {
  double t = 0.0;
  std::array<double, 3> b{};
  double purity_c = 1.0;
  double purity_bc = 1.0;
  double xi_c = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;
  double s_von_c = 0.0;
  double s_von_bc = 0.0;
  std::vector<double> renyi_c;   // one per configured α
  std::vector<double> renyi_bc;
  double cross_route = 0.0;      // |S_von_BC − S_von via A|
};

struct SweepResult {
  std::vector<SweepRow> rows;          // in time order
  std::vector<std::string> skipped;    // one diagnostic per dropped sample
};

/// Worker count from OSC3_THREADS, else the hardware concurrency (at least 1).
int worker_count();

/// Evaluate every sample time; samples whose state is invalid are skipped
/// and reported instead of aborting the sweep. Output order never depends
/// on the number of workers.
SweepResult run_sweep(const ScenarioConfig& c, int workers = 0);

std::vector<std::string> csv_columns(const ScenarioConfig& c);
void write_csv(std::ostream& os, const ScenarioConfig& c, const SweepResult& r);
/// gnuplot script drawing the 2×2 panel figure from `csv_path`.
void write_plot_script(std::ostream& os, const ScenarioConfig& c, const std::string& csv_path);

// --- check ------------------------------------------------------------------

struct CheckItem {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct CheckReport {
  std::string scenario;
  std::vector<CheckItem> items;
  bool passed() const;
};

/// Run the invariant suite on the scenario, plus grid-oracle comparisons at
/// five evenly spaced times when `c.oracle` is set.
CheckReport run_check(const ScenarioConfig& c);
void print_report(std::ostream& os, const CheckReport& r);

}  // namespace osc3
