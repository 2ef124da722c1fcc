#pragma once

#include "osc3/model.hpp"

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace osc3 {

/// Scale factor of one normal mode and the quantities the vacuum kernel needs.
///
/// With b(0) = 1 and ḃ(0) = 0, the mode's vacuum width is ω′ = √λ(0) / b² and
/// its complex Gaussian coefficient is v = ω′ − i ḃ/b.
struct ErmakovState {
  double b = 1.0;
  double bdot = 0.0;
  double omega0sq = 1.0;
  double omega_prime = 1.0;
  std::complex<double> v{1.0, 0.0};

  double rate() const { return bdot / b; }
};

/// Assemble the derived fields from (λ(0), b, ḃ). λ(0) must be positive.
ErmakovState make_state(double omega0sq, double b, double bdot);

/// Closed-form scale factor after a sudden change λ: wi_sq → wf_sq at t = 0.
///
/// b² = (wf − wi)/(2wf) · C(t) + (wf + wi)/(2wf), with C = cos(2√wf t) for
/// wf > 0 and its continuation C = cosh(2√−wf t) for wf < 0. ḃ is
/// differentiated analytically. wf_sq == 0 raises UnsupportedError.
ErmakovState solve_quench(double wi_sq, double wf_sq, double t);

/// Squared frequency λ_j(t) of a single normal mode.
class ModeProfile {
public:
  enum class Kind { constant, quench, tabulated, schedule };

  static ModeProfile constant(double omegasq);
  static ModeProfile quench(double wi_sq, double wf_sq);
  static ModeProfile tabulated(std::vector<double> times, std::vector<double> omegasq);
  /// λ of `mode` obtained by decomposing the coupling matrix of `schedule` at each t.
  static ModeProfile from_schedule(CouplingSchedule schedule, Mode mode);

  Kind kind() const { return kind_; }
  double initial() const;
  double at(double t) const;
  /// λ driving the evolution just after t (a quench reports its final value at t = 0).
  double right_limit(double t) const;
  /// Times where λ(t) is not smooth.
  std::vector<double> breakpoints() const;

private:
  ModeProfile() = default;
  void validate() const;

  Kind kind_ = Kind::constant;
  Profile scalar_;
  std::shared_ptr<const CouplingSchedule> schedule_;
  Mode mode_ = kModeOne;
};

/// Dense solution of one Ermakov equation.
///
/// Knots are uniformly spaced between profile breakpoints, and each breakpoint
/// is itself a knot. Between knots b is a cubic
/// Hermite interpolant of (b, ḃ) and ḃ a cubic Hermite interpolant of (ḃ, b̈).
class Trajectory {
public:
  Trajectory(double omega0sq, std::vector<double> times, std::vector<double> b, std::vector<double> bdot,
             std::vector<double> bddot);

  ErmakovState at(double t) const;

  double omega0sq() const { return omega0sq_; }
  double tmax() const { return times_.back(); }
  std::span<const double> times() const { return times_; }
  std::span<const double> b() const { return b_; }
  std::span<const double> bdot() const { return bdot_; }

private:
  double omega0sq_;
  std::vector<double> times_;
  std::vector<double> b_;
  std::vector<double> bdot_;
  std::vector<double> bddot_;
};

inline constexpr double kDefaultOdeTolerance = 1e-10;

/// Integrate b̈ + λ(t) b = λ(0)/b³ from (b, ḃ) = (1, 0) over [0, tmax] with an
/// adaptive Dormand–Prince 5(4) pair. `output_step` <= 0 picks a grid fine
/// enough that Hermite interpolation error stays at the level of `reltol`.
/// reltol must lie in [1e-13, 1e-6]. Throws IntegrationError if b drops below 1e-8.
Trajectory solve_ode(const ModeProfile& profile, double tmax, double reltol = kDefaultOdeTolerance,
                     double output_step = 0.0);

}  // namespace osc3
