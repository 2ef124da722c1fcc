#include "osc3/oracle.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>

#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace osc3 {

namespace {

using cd = std::complex<double>;

void check_spec(const GridSpec& g) {
  if (g.points < 16 || !(g.halfwidth > 0.0)) {
    throw DomainError(fmt::format("grid needs n ≥ 16 and L > 0 (n = {}, L = {})", g.points, g.halfwidth));
  }
}

std::vector<double> nodes(const GridSpec& g) {
  check_spec(g);
  std::vector<double> x(g.points);
  const double h = g.step();
  for (int i = 0; i < g.points; ++i) x[i] = -g.halfwidth + i * h;
  return x;
}

std::vector<double> trapezoid_weights(const GridSpec& g) {
  std::vector<double> w(g.points, g.step());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

void check_resolution(const GridFrame& fr, const GridSpec& g) {
  check_spec(g);
  const double r = g.step() * std::sqrt(fr.eps_max);
  if (!(r < 1.0)) throw NumericalError(fmt::format("grid too coarse: Δx·√ε_max = {:.3g} (needs < 1)", r));
}

// Physical coordinates x = T w of the n × n frame grid, row-major in (w₁, w₂).
std::vector<std::array<double, 2>> frame_points(const GridFrame& fr, const GridSpec& g) {
  const auto w = nodes(g);
  std::vector<std::array<double, 2>> pts;
  pts.reserve(w.size() * w.size());
  for (double a : w) {
    for (double b : w) pts.push_back({fr.t(0, 0) * a + fr.t(0, 1) * b, fr.t(1, 0) * a + fr.t(1, 1) * b});
  }
  return pts;
}

// Eigenvalues of a Hermitian matrix stored column-major in `a` (overwritten).
std::vector<double> hermitian_eigenvalues(std::vector<lapack_complex_double>& a, int n) {
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw NumericalError(fmt::format("Hermitian eigensolver failed (info = {})", info));
  return w;
}

std::vector<double> finish_spectrum(std::vector<double> ev) {
  std::sort(ev.begin(), ev.end(), std::greater<>());
  const double trace = std::accumulate(ev.begin(), ev.end(), 0.0);
  if (std::abs(trace - 1.0) > 1e-3) {
    throw NumericalError(fmt::format("grid spectrum sums to {:.6g}; enlarge or refine the grid", trace));
  }
  for (double& p : ev) {
    if (p < 0.0 && p > -1e-8) p = 0.0;
  }
  return ev;
}

// Nyström spectrum of ρ(x, y) sampled on a grid symmetric under x → −x.
// The kernel is even, ρ(−x, −y) = ρ(x, y), so the symmetrized matrix
// splits into even and odd blocks over the node pairs (i, ī). A node at
// the origin is its own mirror and belongs to the even block alone.
template <class Kernel>
std::vector<double> parity_spectrum(int total, const std::vector<int>& mirror, const std::vector<double>& sqrt_w,
                                    Kernel&& rho) {
  std::vector<int> reps;
  for (int i = 0; i < total; ++i) {
    if (i < mirror[i]) reps.push_back(i);
  }
  const int pairs = static_cast<int>(reps.size());
  for (int i = 0; i < total; ++i) {
    if (i == mirror[i]) reps.push_back(i);
  }
  const int m = static_cast<int>(reps.size());
  if (pairs + m != total) throw NumericalError("grid is not symmetric under reflection");
  std::vector<lapack_complex_double> even(static_cast<size_t>(m) * m);
  std::vector<lapack_complex_double> odd(static_cast<size_t>(pairs) * pairs);
  for (int b = 0; b < m; ++b) {
    const int j = reps[b];
    const int jb = mirror[j];
    for (int a = 0; a <= b; ++a) {
      const int i = reps[a];
      const cd direct = rho(i, j) * sqrt_w[i] * sqrt_w[j];
      if (b < pairs) {
        const cd crossed = rho(i, jb) * sqrt_w[i] * sqrt_w[jb];
        even[static_cast<size_t>(b) * m + a] = direct + crossed;
        odd[static_cast<size_t>(b) * pairs + a] = direct - crossed;
      } else {
        even[static_cast<size_t>(b) * m + a] = a < pairs ? std::sqrt(2.0) * direct : direct;
      }
    }
  }
  std::vector<double> ev = hermitian_eigenvalues(even, m);
  if (pairs > 0) {
    std::vector<double> ev_odd = hermitian_eigenvalues(odd, pairs);
    ev.insert(ev.end(), ev_odd.begin(), ev_odd.end());
  }
  return finish_spectrum(std::move(ev));
}

}  // namespace

GridFrame grid_frame(const KernelForm& f) {
  const Eigen::MatrixXd pr = f.p.real();
  const Eigen::MatrixXd qr = f.q.real();
  const Eigen::MatrixXd lo = pr - qr;
  const Eigen::MatrixXd hi = pr + qr;
  Eigen::LLT<Eigen::MatrixXd> llt(lo);
  if (llt.info() != Eigen::Success) throw InvalidStateError("kernel is not normalizable (Re P − Re Q not positive definite)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(hi, lo);
  if (ges.info() != Eigen::Success) throw NumericalError("generalized eigensolve for the grid frame failed");
  const Eigen::VectorXd mu = ges.eigenvalues();
  if (!(mu.minCoeff() > 0.0)) throw InvalidStateError("kernel is not normalizable (Re P + Re Q not positive definite)");
  GridFrame fr;
  fr.t = ges.eigenvectors() * mu.array().pow(-0.25).matrix().asDiagonal();
  fr.jacobian = std::abs(fr.t.determinant());
  fr.eps_min = 2.0 / std::sqrt(mu.maxCoeff());
  fr.eps_max = 2.0 * std::sqrt(mu.maxCoeff());
  return fr;
}

GridSpec GridSpec::for_kernel(const ReducedKernel1& k, int points, double tail) {
  return {tail / std::sqrt(grid_frame(kernel_form(k)).eps_min), points};
}

GridSpec GridSpec::for_kernel(const ReducedKernel2& k, int points, double tail) {
  return {tail / std::sqrt(grid_frame(kernel_form(k)).eps_min), points};
}

std::vector<double> spectrum_grid_1d(const ReducedKernel1& k, const GridSpec& g) {
  const GridFrame fr = grid_frame(kernel_form(k));
  check_resolution(fr, g);
  const double s = fr.t(0, 0);
  auto x = nodes(g);
  for (double& v : x) v *= s;
  const auto w = trapezoid_weights(g);
  const int n = g.points;
  std::vector<int> mirror(n);
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) {
    mirror[i] = n - 1 - i;
    sw[i] = std::sqrt(w[i]);
  }
  return parity_spectrum(n, mirror, sw, [&](int i, int j) { return fr.jacobian * density(k, x[i], x[j]); });
}

std::vector<double> spectrum_grid_2d(const ReducedKernel2& k, const GridSpec& g) {
  if (g.points * g.points > 4096) throw DomainError(fmt::format("2D grid of {}² nodes exceeds 4096", g.points));
  const GridFrame fr = grid_frame(kernel_form(k));
  check_resolution(fr, g);
  const auto pts = frame_points(fr, g);
  const auto w = trapezoid_weights(g);
  const int n = g.points;
  const int total = n * n;
  std::vector<int> mirror(total);
  std::vector<double> sw(total);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      const int idx = i1 * n + i2;
      mirror[idx] = (n - 1 - i1) * n + (n - 1 - i2);
      sw[idx] = std::sqrt(w[i1] * w[i2]);
    }
  }
  return parity_spectrum(total, mirror, sw, [&](int i, int j) {
    return fr.jacobian * density(k, pts[i][0], pts[i][1], pts[j][0], pts[j][1]);
  });
}

double purity_quadrature(const ReducedKernel1& k, const GridSpec& g) {
  const GridFrame fr = grid_frame(kernel_form(k));
  check_resolution(fr, g);
  auto x = nodes(g);
  for (double& v : x) v *= fr.t(0, 0);
  const auto w = trapezoid_weights(g);
  double s = 0.0;
  for (int i = 0; i < g.points; ++i) {
    for (int j = 0; j < g.points; ++j) s += std::norm(density(k, x[i], x[j])) * w[i] * w[j];
  }
  return s * fr.jacobian * fr.jacobian;
}

double purity_quadrature(const ReducedKernel2& k, const GridSpec& g) {
  const GridFrame fr = grid_frame(kernel_form(k));
  check_resolution(fr, g);
  const auto pts = frame_points(fr, g);
  const auto w = trapezoid_weights(g);
  const int n = g.points;
  const int total = n * n;
  double s = 0.0;
  for (int i = 0; i < total; ++i) {
    const double wi = w[i / n] * w[i % n];
    for (int j = 0; j < total; ++j) {
      s += std::norm(density(k, pts[i][0], pts[i][1], pts[j][0], pts[j][1])) * wi * w[j / n] * w[j % n];
    }
  }
  return s * fr.jacobian * fr.jacobian;
}

double von_neumann_of_spectrum(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

double ermakov_residual(const Trajectory& traj, const ModeProfile& profile, int stride) {
  if (stride < 1) throw DomainError("residual stencil stride must be at least 1");
  const auto t = traj.times();
  const auto b = traj.b();
  const auto bp = profile.breakpoints();
  const auto n = static_cast<long>(t.size());
  const long m = stride;
  const double lam0 = traj.omega0sq();
  double worst = 0.0;
  for (long i = 2 * m; i + 2 * m < n; ++i) {
    const double lo = t[i - 2 * m];
    const double hi = t[i + 2 * m];
    const bool kinked = std::any_of(bp.begin(), bp.end(), [&](double k) { return k > lo && k < hi; });
    if (kinked) continue;
    const double h = (hi - lo) / 4.0;
    const double bdd =
        (-b[i + 2 * m] + 16.0 * b[i + m] - 30.0 * b[i] + 16.0 * b[i - m] - b[i - 2 * m]) / (12.0 * h * h);
    const double r = bdd + profile.at(t[i]) * b[i] - lam0 / (b[i] * b[i] * b[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace osc3
