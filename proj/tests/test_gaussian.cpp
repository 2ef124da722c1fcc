#include "osc3/errors.hpp"
#include "osc3/gaussian.hpp"
#include "osc3/pipeline.hpp"
#include "osc3/scenario.hpp"
#include "reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace osc3;

namespace {

struct RandomState {
  std::mt19937_64 rng;
  explicit RandomState(unsigned seed) : rng(seed) {}

  FullKernel next() {
    const auto c = ref::random_couplings(rng);
    const auto basis = decompose(c);
    std::uniform_real_distribution<double> b(0.4, 2.5);
    std::uniform_real_distribution<double> bd(-3.0, 3.0);
    const auto ev = basis.eigenvalues();
    ModeStates m;
    for (int j = 0; j < 3; ++j) m[j] = make_state(ev[j], b(rng), bd(rng));
    return build_full_kernel(basis, m);
  }
};

double rel_one(const ReducedKernel1& a, const ReducedKernel1& b) {
  const double s = std::max({std::abs(a.omega), std::abs(a.r1), std::abs(a.y), std::abs(a.i1)});
  double e = std::abs(a.omega - b.omega);
  e = std::max({e, std::abs(a.y - b.y), std::abs(a.r1 - b.r1), std::abs(a.i1 - b.i1)});
  return std::max(e / s, ref::rel(a.norm, b.norm));
}

double rel_two(const ReducedKernel2& a, const ReducedKernel2& b) {
  double s = std::max({std::abs(a.a), std::abs(a.gamma11), std::abs(a.gamma22)});
  for (int i = 0; i < 4; ++i) s = std::max({s, std::abs(a.alpha[i]), std::abs(a.beta[i])});
  double e = std::max({std::abs(a.a - b.a), std::abs(a.gamma11 - b.gamma11), std::abs(a.gamma22 - b.gamma22)});
  for (int i = 0; i < 4; ++i) e = std::max({e, std::abs(a.alpha[i] - b.alpha[i]), std::abs(a.beta[i] - b.beta[i])});
  return std::max(e / s, ref::rel(a.norm, b.norm));
}

}  // namespace

TEST(FullKernel, ClosedFormMatchesGenericProduct) {
  RandomState r(3);
  for (int i = 0; i < 2000; ++i) {
    const auto k = r.next();
    const Eigen::Matrix3cd a = closed_form::full_kernel(k.basis, k.modes);
    const Eigen::Matrix3cd b = full_kernel_generic(k.basis, k.modes);
    ASSERT_LT((a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-12 * b.cwiseAbs().maxCoeff());
  }
}

TEST(FullKernel, NormalizedAndPositive) {
  RandomState r(4);
  for (int i = 0; i < 200; ++i) {
    const auto k = r.next();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k.g.real());
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    // ∫ρ(x,x)d³x = norm2 · π^{3/2} / √det(2 Re G).
    const double tr = k.norm2 * std::pow(std::numbers::pi, 1.5) / std::sqrt((2.0 * k.g.real()).determinant());
    EXPECT_NEAR(tr, 1.0, 1e-12);
  }
}

TEST(FullKernel, DegenerateBasisFallsBackToGenericProduct) {
  const auto basis = decompose({0.0, 2.0, 1.0, 1.0, 1.0});
  ASSERT_TRUE(basis.degenerate);
  ModeStates m{make_state(2.0, 1.1, 0.2), make_state(5.0, 0.9, -0.1), make_state(5.0, 1.0, 0.0)};
  const auto k = build_full_kernel(basis, m);
  EXPECT_LT((k.g - full_kernel_generic(basis, m)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(closed_form::full_kernel(basis, m), NumericalError);
  EXPECT_THROW(closed_form::keep_third(k), NumericalError);
  EXPECT_NO_THROW(reduce_keep_third(k));
  EXPECT_NO_THROW(reduce_drop_first(k));
}

TEST(Reduction, ClosedFormsMatchGenericMarginalization) {
  RandomState r(5);
  for (int i = 0; i < 2000; ++i) {
    const auto k = r.next();
    ASSERT_LT(rel_one(closed_form::keep_third(k), marginalize_to_one(k, 3)), 1e-9);
    ASSERT_LT(rel_one(closed_form::keep_first(k), marginalize_to_one(k, 1)), 1e-9);
    ASSERT_LT(rel_two(closed_form::drop_first(k), marginalize_to_two(k, 2, 3)), 1e-9);
  }
}

TEST(Reduction, KernelsMatchBruteForcePartialTrace) {
  RandomState r(6);
  std::mt19937_64 rng(60);
  std::uniform_real_distribution<double> x(-0.8, 0.8);
  for (int i = 0; i < 12; ++i) {
    const auto k = r.next();
    const auto kc = reduce_keep_third(k);
    const auto ka = reduce_keep_first(k);
    const auto kbc = reduce_drop_first(k);
    const auto kab = marginalize_to_two(k, 1, 2);
    for (int p = 0; p < 3; ++p) {
      const double a = x(rng), b = x(rng), c = x(rng), d = x(rng);
      const auto want_c = ref::traced_density(k, {0, 1}, {a}, {b});
      EXPECT_LT(std::abs(density(kc, a, b) - want_c), 1e-10 * std::abs(want_c) + 1e-14);
      const auto want_a = ref::traced_density(k, {1, 2}, {a}, {b});
      EXPECT_LT(std::abs(density(ka, a, b) - want_a), 1e-10 * std::abs(want_a) + 1e-14);
      const auto want_bc = ref::traced_density(k, {0}, {a, b}, {c, d});
      EXPECT_LT(std::abs(density(kbc, a, b, c, d) - want_bc), 1e-10 * std::abs(want_bc) + 1e-14);
      const auto want_ab = ref::traced_density(k, {2}, {a, b}, {c, d});
      EXPECT_LT(std::abs(density(kab, a, b, c, d) - want_ab), 1e-10 * std::abs(want_ab) + 1e-14);
    }
  }
}

TEST(Reduction, ReducedStatesAreHermitianAndNormalized) {
  RandomState r(7);
  const ref::GaussHermite gh(40);
  for (int i = 0; i < 100; ++i) {
    const auto k = r.next();
    const auto kc = reduce_keep_third(k);
    EXPECT_LT(std::abs(density(kc, 0.3, -0.7) - std::conj(density(kc, -0.7, 0.3))), 1e-14);
    // ρ(x, x) = norm · exp(−2(R₁ − Y)x²/Ω).
    const double s = std::sqrt(2.0 * (kc.r1 - kc.y) / kc.omega);
    double tr = 0.0;
    for (int n = 0; n < 40; ++n) tr += gh.w[n] * std::real(density(kc, gh.x[n] / s, gh.x[n] / s)) * std::exp(gh.x[n] * gh.x[n]);
    EXPECT_NEAR(tr / s, 1.0, 1e-12);

    const auto kbc = reduce_drop_first(k);
    const auto f = kernel_form(kbc);
    const Eigen::Matrix2d m = 2.0 * (f.p.real() - f.q.real());
    EXPECT_NEAR(f.norm * std::numbers::pi / std::sqrt(m.determinant()), 1.0, 1e-12);
    EXPECT_LT(std::abs(density(kbc, 0.1, 0.2, -0.3, 0.4) - std::conj(density(kbc, -0.3, 0.4, 0.1, 0.2))), 1e-14);
  }
}

TEST(Reduction, KernelFormReproducesDensity) {
  RandomState r(8);
  for (int i = 0; i < 50; ++i) {
    const auto k = r.next();
    const auto kbc = reduce_drop_first(k);
    const auto f = kernel_form(kbc);
    const Eigen::Vector2cd x(0.2, -0.5), y(0.7, 0.1);
    const std::complex<double> e =
        -(x.transpose() * f.p * x)(0) - (y.transpose() * f.p.conjugate() * y)(0) + 2.0 * (x.transpose() * f.q * y)(0);
    EXPECT_LT(std::abs(f.norm * std::exp(e) - density(kbc, 0.2, -0.5, 0.7, 0.1)), 1e-13);
    const auto kc = reduce_keep_third(k);
    const auto g = kernel_form(kc);
    const std::complex<double> e1 = -g.p(0, 0) * 0.3 * 0.3 - std::conj(g.p(0, 0)) * 0.1 + 2.0 * g.q(0, 0) * 0.3 * (-std::sqrt(0.1));
    EXPECT_LT(std::abs(g.norm * std::exp(e1) - density(kc, 0.3, -std::sqrt(0.1))), 1e-13);
  }
}

TEST(Reduction, DecoupledOscillatorsStayPure) {
  const auto basis = decompose({0.0, 3.0, 0.0, 0.0, 0.0});
  ModeStates m{make_state(3.0, 1.3, 0.4), make_state(3.0, 1.3, 0.4), make_state(3.0, 1.3, 0.4)};
  const auto k = build_full_kernel(basis, m);
  const auto kc = reduce_keep_third(k);
  EXPECT_NEAR(kc.y / kc.r1, 0.0, 1e-14);
  const auto kbc = reduce_drop_first(k);
  EXPECT_NEAR(kbc.alpha[3] / kbc.a, 0.0, 1e-14);
  EXPECT_NEAR(kbc.gamma11 / kbc.a, 0.0, 1e-14);
}

TEST(Reduction, LabelValidation) {
  RandomState r(9);
  const auto k = r.next();
  const std::vector<int> none{};
  const std::vector<int> three{1, 2, 3};
  const std::vector<int> bad{4};
  const std::vector<int> twice{2, 2};
  EXPECT_THROW(marginalize_generic(k, none), DomainError);
  EXPECT_THROW(marginalize_generic(k, three), DomainError);
  EXPECT_THROW(marginalize_generic(k, bad), DomainError);
  EXPECT_THROW(marginalize_generic(k, twice), DomainError);
}

TEST(Reduction, IllConditionedTracedBlockIsRejected) {
  FullKernel k;
  k.g = Eigen::Matrix3cd::Identity();
  k.g(0, 0) = 1e-14;
  k.norm2 = 1.0;
  for (auto& m : k.modes) m = make_state(1.0, 1.0, 0.0);
  EXPECT_THROW(marginalize_to_one(k, 3), NumericalError);
  k.g(0, 0) = -1.0;
  EXPECT_THROW(marginalize_to_one(k, 3), NumericalError);
}

namespace {

FullKernel kernel_of(const char* scenario, double t) {
  const NormalModeDynamics dyn(builtin_scenario(scenario).schedule, 10.0);
  return build_full_kernel(dyn.basis_at(t), dyn.modes_at(t));
}

}  // namespace

TEST(Examples, DecoupledVacuumAtRest) {
  const auto basis = decompose({0.0, 4.0, 0.0, 0.0, 0.0});
  ModeStates m{make_state(4.0, 1.0, 0.0), make_state(4.0, 1.0, 0.0), make_state(4.0, 1.0, 0.0)};
  const auto k = build_full_kernel(basis, m);
  EXPECT_LT((k.g - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Examples, InitialKernelsAreReal) {
  for (const char* name : {"fig1", "fig2", "fig3"}) {
    const auto k = kernel_of(name, 0.0);
    EXPECT_EQ(k.g.imag().cwiseAbs().maxCoeff(), 0.0) << name;
    EXPECT_EQ(reduce_keep_third(k).i1, 0.0) << name;
    EXPECT_EQ(reduce_keep_first(k).i1, 0.0) << name;
    const auto kbc = reduce_drop_first(k);
    for (double b : kbc.beta) EXPECT_EQ(b, 0.0) << name;
  }
}

TEST(Examples, FirstFigureKernelMatchesGenericProduct) {
  const auto k = kernel_of("fig1", 0.7);
  EXPECT_LT((k.g - full_kernel_generic(k.basis, k.modes)).cwiseAbs().maxCoeff(), 1e-10 * k.g.cwiseAbs().maxCoeff());
  const auto k4 = kernel_of("fig1", 0.4);
  EXPECT_LT(rel_two(closed_form::drop_first(k4), marginalize_to_two(k4, 2, 3)), 1e-9);
}

TEST(Examples, SecondAndThirdFigureReductionsMatchGeneric) {
  const auto k2 = kernel_of("fig2", 1.3);
  EXPECT_LT(rel_one(closed_form::keep_third(k2), marginalize_to_one(k2, 3)), 1e-9);
  const auto k3 = kernel_of("fig3", 0.5);
  EXPECT_LT(rel_one(closed_form::keep_first(k3), marginalize_to_one(k3, 1)), 1e-9);
}

TEST(ReductionProperty, CoefficientIdentities) {
  RandomState r(10);
  for (int i = 0; i < 1000; ++i) {
    const auto k = r.next();
    const double w3 = k.omega_product();
    ASSERT_LT((2.0 * k.g.real() - k.basis.u.transpose() *
                                      Eigen::Vector3d(k.modes[0].omega_prime, k.modes[1].omega_prime,
                                                      k.modes[2].omega_prime).asDiagonal() * k.basis.u)
                      .cwiseAbs()
                      .maxCoeff() / k.g.real().cwiseAbs().maxCoeff(),
              1e-10);
    for (const auto& k1 : {reduce_keep_third(k), reduce_keep_first(k)}) {
      ASSERT_LT(ref::rel(k1.r1 - k1.y, 0.5 * w3), 1e-10);
      ASSERT_GT(k1.r1, std::abs(k1.y));
      ASSERT_NEAR(k1.norm * std::sqrt(std::numbers::pi / (2 * k1.r1 - 2 * k1.y)) * std::sqrt(k1.omega), 1.0, 1e-12);
    }
    const auto k2 = reduce_drop_first(k);
    const double lhs = (k2.alpha[0] - k2.gamma11) * (k2.alpha[1] - k2.gamma22) - std::pow(k2.alpha[2] - k2.alpha[3], 2);
    ASSERT_LT(ref::rel(lhs, w3 * k2.a / 4.0), 1e-9);
    ASSERT_GT(k2.alpha[0] - k2.gamma11, 0.0);
    ASSERT_GT(k2.alpha[1] - k2.gamma22, 0.0);
  }
}
