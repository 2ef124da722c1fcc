#pragma once

#include "osc3/entropy.hpp"
#include "osc3/ermakov.hpp"
#include "osc3/gaussian.hpp"
#include "osc3/model.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace osc3 {

/// Scale factors of the three normal modes under a coupling schedule.
///
/// Sudden schedules use the closed-form quench solution per mode, with
/// λ_j(0) from the parameters at t = 0 and λ_j,f from their right limit.
/// Any other schedule is integrated numerically on [0, t_end].
class NormalModeDynamics {
public:
  NormalModeDynamics(CouplingSchedule schedule, double t_end, double reltol = kDefaultOdeTolerance);

  const CouplingSchedule& schedule() const { return schedule_; }
  bool closed_form() const { return !trajectories_; }
  double t_end() const { return t_end_; }
  /// λ_j(0) for j = 1, +, −.
  const std::array<double, 3>& initial_eigenvalues() const { return initial_; }

  ModeStates modes_at(double t) const;
  /// Normal-mode basis of K(t); at t = 0 a quench still uses its initial values.
  ModeBasis basis_at(double t) const;
  const std::optional<std::array<Trajectory, 3>>& trajectories() const { return trajectories_; }

private:
  CouplingSchedule schedule_;
  double t_end_;
  std::array<double, 3> initial_{};
  std::array<double, 3> final_{};
  std::optional<std::array<Trajectory, 3>> trajectories_;
};

/// Everything derived from the state at one instant.
struct Sample {
  double t = 0.0;
  FullKernel kernel;
  ReducedKernel1 kernel_c;   // oscillator C alone
  ReducedKernel2 kernel_bc;  // oscillators B and C
  ReducedKernel1 kernel_a;   // oscillator A alone
  Spectrum1 spectrum_c;
  Spectrum2 spectrum_bc;
  EntropyReport entropy_c;
  EntropyReport entropy_bc;
  EntropyReport entropy_a;  // complementary route to the BC entropies
  double purity_c = 1.0;    // closed-form tr ρ_C²
  double purity_bc = 1.0;   // closed-form tr ρ_BC²

  /// |S_von(BC) − S_von(A)|.
  double cross_route() const { return std::abs(entropy_bc.von_neumann - entropy_a.von_neumann); }
};

Sample evaluate(const NormalModeDynamics& dyn, double t, std::span<const double> alphas = kDefaultAlphas);

}  // namespace osc3
