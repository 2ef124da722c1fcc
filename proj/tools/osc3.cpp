// osc3: sweeps, invariant checks and built-in quench scenarios for three
// coupled oscillators.
//
// Exit status: 0 success, 1 invariant failure, 2 configuration error.

#include "osc3/errors.hpp"
#include "osc3/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kConfigError = 2;

void emit_csv(const osc3::ScenarioConfig& c, const osc3::SweepResult& r, const std::string& path) {
  if (path.empty() || path == "-") {
    osc3::write_csv(std::cout, c, r);
    return;
  }
  std::ofstream out(path);
  if (!out) throw osc3::ConfigError(fmt::format("cannot write {}", path));
  osc3::write_csv(out, c, r);
}

void emit_plot(const osc3::ScenarioConfig& c, const std::string& plot, const std::string& csv) {
  if (plot.empty()) return;
  std::ofstream out(plot);
  if (!out) throw osc3::ConfigError(fmt::format("cannot write {}", plot));
  osc3::write_plot_script(out, c, csv.empty() || csv == "-" ? c.name + ".csv" : csv);
}

int sweep(osc3::ScenarioConfig c, const std::string& out) {
  if (!out.empty()) c.csv_path = out;
  const auto result = osc3::run_sweep(c);
  for (const auto& msg : result.skipped) fmt::print(std::cerr, "skipped {}\n", msg);
  emit_csv(c, result, c.csv_path);
  emit_plot(c, c.plot_path, c.csv_path);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement dynamics of three coupled harmonic oscillators"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string plot_path;
  std::string scenario_name;

  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate purities and entropies over the configured time range");
  sweep_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
  sweep_cmd->add_option("--out", out_path, "CSV output path ('-' for stdout)");

  auto* check_cmd = app.add_subcommand("check", "Run the invariant and oracle suite on a scenario");
  check_cmd->add_option("--config", config_path, "Scenario JSON file")->required();

  auto* scenario_cmd = app.add_subcommand("scenario", "Sweep a built-in quench scenario");
  scenario_cmd->add_option("name", scenario_name, "fig1, fig2 or fig3")
      ->required()
      ->check(CLI::IsMember(osc3::builtin_names()));
  scenario_cmd->add_option("--out", out_path, "CSV output path ('-' for stdout)");
  scenario_cmd->add_option("--plot", plot_path, "gnuplot script output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sweep_cmd) return sweep(osc3::load_config(config_path), out_path);
    if (*scenario_cmd) {
      auto c = osc3::builtin_scenario(scenario_name);
      c.plot_path = plot_path;
      return sweep(c, out_path);
    }
    if (*check_cmd) {
      const auto report = osc3::run_check(osc3::load_config(config_path));
      osc3::print_report(std::cout, report);
      return report.passed() ? kOk : kInvariantFailure;
    }
  } catch (const osc3::ConfigError& e) {
    fmt::print(std::cerr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kInvariantFailure;
  }
  return kOk;
}
