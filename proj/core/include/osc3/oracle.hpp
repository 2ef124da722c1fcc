#pragma once

#include "osc3/ermakov.hpp"
#include "osc3/gaussian.hpp"

#include <vector>

namespace osc3 {

/// Linear frame x = T w in which the grids are laid out.
///
/// T simultaneously diagonalizes Re P − Re Q and Re P + Q_r, then scales
/// each axis so the eigenfunction width is 2 along every axis. The kernel is
/// sampled as |det T| ρ(Tw, Tw′), which has the same spectrum and the same
/// tr ρ² as ρ. In this frame ρ(w, w) decays like exp(−2μᵢ^{−1/2} wᵢ²) and
/// ρ(w, −w) like exp(−2μᵢ^{1/2} wᵢ²), with μᵢ ≥ 1 the generalized eigenvalues.
struct GridFrame {
  Eigen::MatrixXd t;
  double jacobian = 1.0;   // |det T|
  double eps_min = 0.0;    // smallest diagonal decay coefficient, 2 min μᵢ^{−1/2}
  double eps_max = 0.0;    // largest anti-diagonal decay coefficient, 2 max μᵢ^{1/2}
};
GridFrame grid_frame(const KernelForm& f);

/// Uniform grid on [−halfwidth, halfwidth] per axis of the frame, `points` nodes per axis.
struct GridSpec {
  double halfwidth = 0.0;
  int points = 0;

  double step() const { return 2.0 * halfwidth / (points - 1); }

  /// halfwidth = tail/√ε_min, so ρ(w, w) has decayed to exp(−tail²) at the
  /// edge. Defaults: 200 nodes with tail 6 in 1D, 48 per axis with tail 4 in 2D.
  static GridSpec for_kernel(const ReducedKernel1& k, int points = 200, double tail = 6.0);
  static GridSpec for_kernel(const ReducedKernel2& k, int points = 48, double tail = 4.0);
};

/// Nyström spectrum of the reduced density operator, sorted descending.
///
/// Throws NumericalError if the grid does not resolve the kernel
/// (Δx·√ε_max ≥ 1) or the spectrum sums to 1 only within more than 1e−3.
std::vector<double> spectrum_grid_1d(const ReducedKernel1& k, const GridSpec& g);
/// Same on an n × n grid; n² must not exceed 4096.
std::vector<double> spectrum_grid_2d(const ReducedKernel2& k, const GridSpec& g);

/// Trapezoid quadrature of tr ρ² = ∫ |ρ(x, x′)|² dx dx′.
double purity_quadrature(const ReducedKernel1& k, const GridSpec& g);
double purity_quadrature(const ReducedKernel2& k, const GridSpec& g);

/// −Σ p ln p over a (clipped, non-negative) spectrum.
double von_neumann_of_spectrum(const std::vector<double>& p);

/// max |b̈ + λ(t)b − λ(0)/b³| over interior knots, with b̈ from a five-point
/// central difference of the stored b values. Stencils straddling a profile
/// breakpoint are skipped. `stride` spaces the stencil in units of the knot spacing.
double ermakov_residual(const Trajectory& traj, const ModeProfile& profile, int stride = 1);

}  // namespace osc3
