#include "osc3/pipeline.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace osc3 {

NormalModeDynamics::NormalModeDynamics(CouplingSchedule schedule, double t_end, double reltol)
    : schedule_(std::move(schedule)), t_end_(t_end) {
  if (!(t_end >= 0.0)) throw DomainError(fmt::format("end time must be non-negative, got {}", t_end));
  initial_ = decompose(couplings_at(schedule_, 0.0)).eigenvalues();
  final_ = decompose(couplings_after(schedule_, 0.0)).eigenvalues();
  for (int j = 0; j < 3; ++j) {
    if (!(initial_[j] > 0.0)) {
      throw DomainError(fmt::format("initial normal mode {} has λ = {} ≤ 0; no vacuum to start from", j, initial_[j]));
    }
  }
  if (!schedule_.is_sudden()) {
    const double horizon = t_end > 0.0 ? t_end : 1e-6;
    trajectories_.emplace(std::array<Trajectory, 3>{
        solve_ode(ModeProfile::from_schedule(schedule_, kModeOne), horizon, reltol),
        solve_ode(ModeProfile::from_schedule(schedule_, kModePlus), horizon, reltol),
        solve_ode(ModeProfile::from_schedule(schedule_, kModeMinus), horizon, reltol)});
  }
}

ModeStates NormalModeDynamics::modes_at(double t) const {
  if (trajectories_) {
    const auto& tr = *trajectories_;
    return {tr[0].at(t), tr[1].at(t), tr[2].at(t)};
  }
  return {solve_quench(initial_[0], final_[0], t), solve_quench(initial_[1], final_[1], t),
          solve_quench(initial_[2], final_[2], t)};
}

ModeBasis NormalModeDynamics::basis_at(double t) const { return decompose(couplings_at(schedule_, t)); }

Sample evaluate(const NormalModeDynamics& dyn, double t, std::span<const double> alphas) {
  Sample s;
  s.t = t;
  s.kernel = build_full_kernel(dyn.basis_at(t), dyn.modes_at(t));
  s.kernel_c = reduce_keep_third(s.kernel);
  s.kernel_bc = reduce_drop_first(s.kernel);
  s.kernel_a = reduce_keep_first(s.kernel);
  s.spectrum_c = spectrum_one(s.kernel_c);
  s.spectrum_bc = spectrum_two(s.kernel_bc);
  s.entropy_c = entropies_one(s.spectrum_c, alphas);
  s.entropy_bc = entropies_two(s.spectrum_bc, alphas);
  s.entropy_a = entropies_via_A(s.kernel_a, alphas);
  s.purity_c = purity_one(s.kernel_c);
  s.purity_bc = purity_two(s.kernel_bc);
  return s;
}

}  // namespace osc3
