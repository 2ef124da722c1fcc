#include "osc3/pipeline.hpp"
#include "osc3/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

namespace osc3 {

namespace {

SweepRow make_row(const Sample& s, std::span<const double> alphas) {
  SweepRow r;
  r.t = s.t;
  for (int j = 0; j < 3; ++j) r.b[j] = s.kernel.modes[j].b;
  r.purity_c = s.purity_c;
  r.purity_bc = s.purity_bc;
  r.xi_c = s.spectrum_c.xi;
  r.xi1 = s.spectrum_bc.xi1;
  r.xi2 = s.spectrum_bc.xi2;
  r.s_von_c = s.entropy_c.von_neumann;
  r.s_von_bc = s.entropy_bc.von_neumann;
  for (double a : alphas) {
    r.renyi_c.push_back(s.entropy_c.renyi_at(a));
    r.renyi_bc.push_back(s.entropy_bc.renyi_at(a));
  }
  r.cross_route = s.cross_route();
  return r;
}

std::string alpha_label(double a) { return fmt::format("{:g}", a); }

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("OSC3_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepResult run_sweep(const ScenarioConfig& c, int workers) {
  c.validate();
  const auto times = c.times();
  const NormalModeDynamics dyn(c.schedule, c.t_end, c.reltol);

  const auto n = times.size();
  std::vector<std::optional<SweepRow>> rows(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = make_row(evaluate(dyn, times[i], c.alphas), c.alphas);
      } catch (const std::exception& e) {
        errors[i] = fmt::format("t = {:.12g}: {}", times[i], e.what());
      }
    }
  };

  if (workers <= 0) workers = worker_count();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  SweepResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) {
      out.rows.push_back(std::move(*rows[i]));
    } else {
      out.skipped.push_back(std::move(errors[i]));
    }
  }
  return out;
}

std::vector<std::string> csv_columns(const ScenarioConfig& c) {
  std::vector<std::string> cols{"t",    "b1",  "bplus", "bminus",  "purity_C", "purity_BC",
                                "xi_C", "xi1", "xi2",   "S_von_C", "S_von_BC"};
  for (double a : c.alphas) cols.push_back("S_alpha_C_" + alpha_label(a));
  for (double a : c.alphas) cols.push_back("S_alpha_BC_" + alpha_label(a));
  cols.push_back("S_von_BC_vs_A");
  return cols;
}

void write_csv(std::ostream& os, const ScenarioConfig& c, const SweepResult& r) {
  fmt::print(os, "{}\n", fmt::join(csv_columns(c), ","));
  for (const auto& row : r.rows) {
    std::vector<double> v{row.t,    row.b[0], row.b[1], row.b[2],   row.purity_c, row.purity_bc,
                          row.xi_c, row.xi1,  row.xi2,  row.s_von_c, row.s_von_bc};
    v.insert(v.end(), row.renyi_c.begin(), row.renyi_c.end());
    v.insert(v.end(), row.renyi_bc.begin(), row.renyi_bc.end());
    v.push_back(row.cross_route);
    fmt::print(os, "{:.12g}\n", fmt::join(v, ","));
  }
}

void write_plot_script(std::ostream& os, const ScenarioConfig& c, const std::string& csv_path) {
  fmt::print(os,
             "# gnuplot script for scenario {name}\n"
             "set datafile separator ','\n"
             "set key autotitle columnhead\n"
             "set terminal pngcairo size 1200,900\n"
             "set output '{name}.png'\n"
             "set multiplot layout 2,2 title '{name}'\n"
             "set xlabel 't'\n"
             "\n"
             "set title 'purity'\n"
             "plot '{csv}' using 1:6 with lines lc rgb 'blue' title 'tr ρ_{{BC}}^2', \\\n"
             "     '{csv}' using 1:5 with lines lc rgb 'red' title 'tr ρ_C^2'\n"
             "\n"
             "set title 'von Neumann entropy'\n"
             "plot '{csv}' using 1:10 with lines lc rgb 'red' title 'S_C', \\\n"
             "     '{csv}' using 1:11 with lines lc rgb 'blue' title 'S_{{BC}}'\n"
             "\n"
             "set title 'S_C'\n"
             "plot '{csv}' using 1:10 with lines lc rgb 'red' notitle\n"
             "\n"
             "set title 'S_{{BC}}'\n"
             "plot '{csv}' using 1:11 with lines lc rgb 'blue' notitle\n"
             "\n"
             "unset multiplot\n",
             fmt::arg("name", c.name), fmt::arg("csv", csv_path));
}

}  // namespace osc3
