#include "osc3/errors.hpp"
#include "osc3/oracle.hpp"
#include "osc3/pipeline.hpp"
#include "osc3/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace osc3;

namespace {

Sample sample_of(const char* scenario, double t) {
  const NormalModeDynamics dyn(builtin_scenario(scenario).schedule, 10.0);
  return evaluate(dyn, t);
}

std::vector<double> ladder_2d(double x1, double x2, int count) {
  std::vector<double> p;
  for (int m = 0; m < 40; ++m) {
    for (int n = 0; n < 40; ++n) p.push_back((1 - x1) * std::pow(x1, m) * (1 - x2) * std::pow(x2, n));
  }
  std::sort(p.begin(), p.end(), std::greater<>());
  p.resize(count);
  return p;
}

FullKernel decoupled_kernel() {
  const auto basis = decompose({0.0, 2.0, 0.0, 0.0, 0.0});
  ModeStates m{make_state(2.0, 1.4, 0.5), make_state(2.0, 1.4, 0.5), make_state(2.0, 1.4, 0.5)};
  return build_full_kernel(basis, m);
}

}  // namespace

TEST(Grid, PureKernelsHaveOneNonzeroEigenvalue) {
  const auto k = decoupled_kernel();
  const auto kc = reduce_keep_third(k);
  const auto p = spectrum_grid_1d(kc, GridSpec::for_kernel(kc));
  EXPECT_NEAR(p[0], 1.0, 1e-8);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_NEAR(p[i], 0.0, 1e-8);
  EXPECT_NEAR(purity_quadrature(kc, GridSpec::for_kernel(kc)), 1.0, 1e-8);

  // The default 2D box truncates ~1e-7 of the mass; widen it for a 1e-8 check.
  const auto kbc = reduce_drop_first(k);
  const auto g2 = GridSpec::for_kernel(kbc, 48, 6.0);
  const auto q = spectrum_grid_2d(kbc, g2);
  EXPECT_NEAR(q[0], 1.0, 1e-8);
  EXPECT_NEAR(q[1], 0.0, 1e-8);
  EXPECT_NEAR(purity_quadrature(kbc, g2), 1.0, 1e-8);
}

TEST(Grid, OneModeLadderIsGeometric) {
  const auto s = sample_of("fig1", 0.6);
  const auto g = GridSpec::for_kernel(s.kernel_c);
  const auto p = spectrum_grid_1d(s.kernel_c, g);
  const double xi = s.spectrum_c.xi;
  EXPECT_NEAR(p[0], 1 - xi, 1e-5);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(p[n + 1] / p[n], xi, 1e-4) << n;
  EXPECT_NEAR(purity_quadrature(s.kernel_c, g), s.purity_c, 1e-6);
  EXPECT_NEAR(von_neumann_of_spectrum(p), s.entropy_c.von_neumann, 1e-5);
}

TEST(Grid, SecondFigureOneModeRatio) {
  const auto s = sample_of("fig2", 2.0);
  const auto p = spectrum_grid_1d(s.kernel_c, GridSpec::for_kernel(s.kernel_c));
  EXPECT_NEAR(p[1] / p[0], s.spectrum_c.xi, 1e-5);
}

TEST(Grid, TwoModeSpectrumMatchesProductLadder) {
  const auto s = sample_of("fig2", 1.0);
  const auto g = GridSpec::for_kernel(s.kernel_bc);
  const auto p = spectrum_grid_2d(s.kernel_bc, g);
  const auto want = ladder_2d(s.spectrum_bc.xi1, s.spectrum_bc.xi2, 10);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(p[i], want[i], 1e-4) << i;
  EXPECT_NEAR(von_neumann_of_spectrum(p), s.entropy_bc.von_neumann, 1e-4);
}

TEST(Grid, FirstFigureTwoModeEntropyAndPurity) {
  const auto s8 = sample_of("fig1", 0.8);
  const auto p = spectrum_grid_2d(s8.kernel_bc, GridSpec::for_kernel(s8.kernel_bc));
  EXPECT_NEAR(von_neumann_of_spectrum(p), s8.entropy_bc.von_neumann, 1e-4);
  const auto s6 = sample_of("fig1", 0.6);
  EXPECT_NEAR(purity_quadrature(s6.kernel_bc, GridSpec::for_kernel(s6.kernel_bc)), s6.purity_bc, 1e-4);
}

TEST(Grid, ConvergesUnderRefinementAndWidening) {
  const auto s = sample_of("fig3", 5.0);
  const auto g = GridSpec::for_kernel(s.kernel_c);
  const auto fine = GridSpec{g.halfwidth, 2 * g.points - 1};
  const double a = von_neumann_of_spectrum(spectrum_grid_1d(s.kernel_c, g));
  const double b = von_neumann_of_spectrum(spectrum_grid_1d(s.kernel_c, fine));
  EXPECT_LT(std::abs(a - b), 1e-5);

  // Same step, 25% wider box.
  const int wide_n = static_cast<int>(std::lround(1.25 * (g.points - 1))) + 1;
  const auto wide = GridSpec{g.halfwidth * (wide_n - 1) / (g.points - 1), wide_n};
  const auto pa = spectrum_grid_1d(s.kernel_c, g);
  const auto pb = spectrum_grid_1d(s.kernel_c, wide);
  double ta = 0.0, tb = 0.0;
  for (double v : pa) ta += v;
  for (double v : pb) tb += v;
  EXPECT_NEAR(ta, tb, 1e-10);
  EXPECT_NEAR(purity_quadrature(s.kernel_c, g), purity_quadrature(s.kernel_c, wide), 1e-10);

  const auto g2 = GridSpec::for_kernel(s.kernel_bc);
  const auto g2f = GridSpec{g2.halfwidth, 64};
  const double c = von_neumann_of_spectrum(spectrum_grid_2d(s.kernel_bc, g2));
  const double d = von_neumann_of_spectrum(spectrum_grid_2d(s.kernel_bc, g2f));
  EXPECT_LT(std::abs(c - d), 1e-5);
}

TEST(Grid, RejectsUnusableGrids) {
  const auto s = sample_of("fig1", 0.6);
  EXPECT_THROW(spectrum_grid_1d(s.kernel_c, GridSpec{3.0, 8}), DomainError);
  EXPECT_THROW(spectrum_grid_1d(s.kernel_c, GridSpec{-1.0, 100}), DomainError);
  EXPECT_THROW(spectrum_grid_2d(s.kernel_bc, GridSpec{3.0, 65}), DomainError);
  const auto g = GridSpec::for_kernel(s.kernel_c);
  EXPECT_THROW(spectrum_grid_1d(s.kernel_c, GridSpec{50.0 * g.halfwidth, 20}), NumericalError);
  EXPECT_THROW(purity_quadrature(s.kernel_c, GridSpec{50.0 * g.halfwidth, 20}), NumericalError);
  EXPECT_THROW(spectrum_grid_1d(s.kernel_c, GridSpec{0.05 * g.halfwidth, 200}), NumericalError);
}

TEST(Grid, FrameWhitensTheKernel) {
  const auto s = sample_of("fig2", 1.0);
  const auto f = kernel_form(s.kernel_bc);
  const auto fr = grid_frame(f);
  const Eigen::MatrixXd a = fr.t.transpose() * (f.p.real() - f.q.real()) * fr.t;
  const Eigen::MatrixXd b = fr.t.transpose() * (f.p.real() + f.q.real()) * fr.t;
  EXPECT_LT((a - Eigen::MatrixXd(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-10 * a.cwiseAbs().maxCoeff());
  EXPECT_LT((b - Eigen::MatrixXd(b.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-10 * b.cwiseAbs().maxCoeff());
  EXPECT_NEAR(fr.jacobian, std::abs(fr.t.determinant()), 1e-12 * fr.jacobian);
  EXPECT_LE(fr.eps_min, fr.eps_max);
}

TEST(Residual, ConstantQuenchAndSinusoid) {
  const auto c = ModeProfile::constant(4.0);
  EXPECT_LT(ermakov_residual(solve_ode(c, 5.0), c), 1e-12);

  const auto q = ModeProfile::quench(4.0, 6.0);
  EXPECT_LT(ermakov_residual(solve_ode(q, 10.0), q), 1e-7);

  std::vector<double> t, v;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    v.push_back(4.0 + std::sin(0.1 * i));
  }
  const auto s = ModeProfile::tabulated(t, v);
  EXPECT_LT(ermakov_residual(solve_ode(s, 10.0), s), 1e-6);
  EXPECT_THROW(ermakov_residual(solve_ode(c, 1.0), c, 0), DomainError);
}
