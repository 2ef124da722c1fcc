#include "osc3/entropy.hpp"
#include "osc3/errors.hpp"
#include "osc3/oracle.hpp"
#include "osc3/pipeline.hpp"
#include "osc3/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

namespace osc3 {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

std::vector<double> coefficients(const ReducedKernel1& k) { return {k.omega, k.y, k.r1, k.i1}; }

std::vector<double> coefficients(const ReducedKernel2& k) {
  std::vector<double> v{k.a, k.gamma11, k.gamma22};
  v.insert(v.end(), k.alpha.begin(), k.alpha.end());
  v.insert(v.end(), k.beta.begin(), k.beta.end());
  return v;
}

// Largest entry difference relative to the largest entry.
double set_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale == 0.0 ? 0.0 : diff / scale;
}

double trace_one(const ReducedKernel1& k) { return k.norm * std::sqrt(kPi / (2.0 * (k.r1 - k.y) / k.omega)); }

double trace_two(const ReducedKernel2& k) {
  const KernelForm f = kernel_form(k);
  const Eigen::Matrix2d m = 2.0 * (f.p.real() - f.q.real());
  return k.norm * kPi / std::sqrt(m.determinant());
}

// Accumulates the worst deviation per named invariant.
class Tally {
public:
  void add(const std::string& name, double deviation, double tolerance) {
    auto [it, fresh] = index_.try_emplace(name, items_.size());
    if (fresh) items_.push_back({name, 0.0, tolerance, true, {}});
    auto& item = items_[it->second];
    if (!std::isfinite(deviation)) {
      item.deviation = deviation;
      item.passed = false;
      return;
    }
    if (std::isfinite(item.deviation)) item.deviation = std::max(item.deviation, deviation);
    item.passed = item.passed && deviation <= tolerance;
  }

  void fail(const std::string& name, const std::string& note) {
    auto [it, fresh] = index_.try_emplace(name, items_.size());
    if (fresh) items_.push_back({name, 0.0, 0.0, false, note});
    auto& item = items_[it->second];
    item.passed = false;
    if (item.note.empty()) item.note = note;
  }

  std::vector<CheckItem> take() { return std::move(items_); }

private:
  std::vector<CheckItem> items_;
  std::map<std::string, std::size_t> index_;
};

void check_basis(Tally& tally, const ModeBasis& b) {
  const Eigen::Matrix3d k = build_coupling_matrix(b.couplings);
  tally.add("basis: U Uᵀ = I", (b.u * b.u.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::Vector3d lam(b.lambda1, b.lambda_plus, b.lambda_minus);
  const Eigen::Matrix3d rec = b.u.transpose() * lam.asDiagonal() * b.u;
  tally.add("basis: Uᵀ diag(λ) U = K", (rec - k).cwiseAbs().maxCoeff() / std::max(k.cwiseAbs().maxCoeff(), 1.0), 1e-10);
  tally.add("basis: λ₊ ≥ λ₋", std::max(0.0, b.lambda_minus - b.lambda_plus), 0.0);
  if (!b.degenerate) {
    const double d = b.couplings.j13 - b.couplings.j23;
    const double lhs = b.a_plus * b.a_plus * b.a_minus * b.a_minus;
    tally.add("basis: A₊²A₋² = 1/(12 z² d²)", rel(lhs, 1.0 / (12.0 * b.z * b.z * d * d)), 1e-10);
  }
}

void check_sample(Tally& tally, const Sample& s) {
  const double w3 = s.kernel.omega_product();
  const bool analytic = !s.kernel.basis.degenerate;
  if (analytic) {
    const Eigen::Matrix3cd gg = full_kernel_generic(s.kernel.basis, s.kernel.modes);
    tally.add("kernel: closed-form G = generic G", (s.kernel.g - gg).cwiseAbs().maxCoeff() / gg.cwiseAbs().maxCoeff(),
              1e-10);
    tally.add("reduce C: closed form = generic",
              set_deviation(coefficients(s.kernel_c), coefficients(marginalize_to_one(s.kernel, 3))), 1e-9);
    tally.add("reduce BC: closed form = generic",
              set_deviation(coefficients(s.kernel_bc), coefficients(marginalize_to_two(s.kernel, 2, 3))), 1e-9);
    tally.add("reduce A: closed form = generic",
              set_deviation(coefficients(s.kernel_a), coefficients(marginalize_to_one(s.kernel, 1))), 1e-9);
  }
  tally.add("reduce C: R₁ − Y = ω′₁ω′₊ω′₋/2", rel(s.kernel_c.r1 - s.kernel_c.y, 0.5 * w3), 1e-10);
  tally.add("reduce A: R − Y = ω′₁ω′₊ω′₋/2", rel(s.kernel_a.r1 - s.kernel_a.y, 0.5 * w3), 1e-10);
  tally.add("reduce C: unit trace", std::abs(trace_one(s.kernel_c) - 1.0), 1e-12);
  tally.add("reduce A: unit trace", std::abs(trace_one(s.kernel_a) - 1.0), 1e-12);
  tally.add("reduce BC: unit trace", std::abs(trace_two(s.kernel_bc) - 1.0), 1e-10);
  const auto& k = s.kernel_bc;
  const double lhs = (k.alpha[0] - k.gamma11) * (k.alpha[1] - k.gamma22) - std::pow(k.alpha[2] - k.alpha[3], 2);
  tally.add("reduce BC: (α₁−γ₁₁)(α₂−γ₂₂) − (α₃−α₄)² = ω′₁ω′₊ω′₋A/4", rel(lhs, w3 * k.a / 4.0), 1e-9);

  const double xi = s.spectrum_c.xi;
  tally.add("entropy C: purity = (1−ξ)/(1+ξ)", std::abs(s.purity_c - (1.0 - xi) / (1.0 + xi)), 1e-12);
  tally.add("entropy BC: purity = Π(1−ξᵢ)/(1+ξᵢ)", std::abs(s.purity_bc - s.entropy_bc.purity), 1e-9);
  tally.add("entropy: S₂ = −ln purity", std::abs(renyi_entropy(xi, 2.0) + std::log(s.purity_c)), 1e-12);
  tally.add("entropy: S_BC = S_A", s.cross_route(), 1e-9);
  const double spec_purity_a = purity_one(s.kernel_a);
  tally.add("entropy: purity BC = purity A", std::abs(s.purity_bc - spec_purity_a), 1e-9);

  double worst = 0.0;
  double prev = renyi_entropy(xi, 0.25);
  for (double a = 0.5; a <= 5.0; a += 0.25) {
    const double cur = renyi_entropy(xi, a);
    worst = std::max(worst, cur - prev);
    prev = cur;
  }
  tally.add("entropy: S_α non-increasing in α", worst, 1e-12);
  const double sv = s.entropy_c.von_neumann;
  const double lim = std::max(std::abs(renyi_entropy(xi, 1.0 - 1e-4) - sv), std::abs(renyi_entropy(xi, 1.0 + 1e-4) - sv));
  tally.add("entropy: S_α → S_von as α → 1", lim, 1e-3 * std::max(sv, 1e-3));
}

void check_ermakov(Tally& tally, const NormalModeDynamics& dyn, const ScenarioConfig& c) {
  const double tmax = std::min(c.t_end, 10.0);
  if (dyn.closed_form()) {
    const auto wi = dyn.initial_eigenvalues();
    const auto wf = decompose(couplings_after(c.schedule, 0.0)).eigenvalues();
    for (int j = 0; j < 3; ++j) {
      const Trajectory tr = solve_ode(ModeProfile::quench(wi[j], wf[j]), tmax);
      double db = 0.0;
      double dbd = 0.0;
      double bound = 0.0;
      for (int i = 0; i <= 400; ++i) {
        const double t = tmax * i / 400.0;
        const ErmakovState a = solve_quench(wi[j], wf[j], t);
        const ErmakovState n = tr.at(t);
        db = std::max(db, std::abs(a.b - n.b));
        dbd = std::max(dbd, std::abs(a.bdot - n.bdot));
        if (wf[j] > 0.0) {
          const double r = wi[j] / wf[j];
          const double b2 = a.b * a.b;
          bound = std::max({bound, std::min(1.0, r) - b2, b2 - std::max(1.0, r)});
        }
      }
      tally.add("ermakov: quench closed form = ODE (b)", db, 1e-8);
      tally.add("ermakov: quench closed form = ODE (ḃ)", dbd, 1e-6);
      tally.add("ermakov: b² between 1 and λᵢ/λ_f", std::max(bound, 0.0), 1e-12);
    }
  } else {
    double lmax = 0.0;
    for (double t : c.times()) {
      for (double l : decompose(couplings_at(c.schedule, t)).eigenvalues()) lmax = std::max(lmax, std::abs(l));
    }
    const Mode modes[3] = {kModeOne, kModePlus, kModeMinus};
    for (int j = 0; j < 3; ++j) {
      const double r = ermakov_residual((*dyn.trajectories())[j], ModeProfile::from_schedule(c.schedule, modes[j]));
      tally.add("ermakov: ODE residual / max λ", r / std::max(lmax, 1.0), 1e-6);
    }
  }
}

void check_oracle(Tally& tally, const NormalModeDynamics& dyn, const ScenarioConfig& c) {
  for (int i = 0; i < 5; ++i) {
    const double t = c.t_start + (c.t_end - c.t_start) * i / 4.0;
    try {
      const Sample s = evaluate(dyn, t, c.alphas);
      for (const auto& [label, k, sv] :
           {std::tuple{"C", s.kernel_c, s.entropy_c.von_neumann}, std::tuple{"A", s.kernel_a, s.entropy_a.von_neumann}}) {
        const GridSpec g = GridSpec::for_kernel(k);
        const auto p = spectrum_grid_1d(k, g);
        tally.add(fmt::format("oracle {}: grid S_von = closed form", label), std::abs(von_neumann_of_spectrum(p) - sv), 1e-5);
        tally.add(fmt::format("oracle {}: quadrature purity = closed form", label),
                  std::abs(purity_quadrature(k, g) - purity_one(k)), 1e-5);
      }
      const GridSpec g2 = GridSpec::for_kernel(s.kernel_bc);
      const auto p2 = spectrum_grid_2d(s.kernel_bc, g2);
      tally.add("oracle BC: grid S_von = closed form", std::abs(von_neumann_of_spectrum(p2) - s.entropy_bc.von_neumann),
                1e-4);
      tally.add("oracle BC: quadrature purity = closed form", std::abs(purity_quadrature(s.kernel_bc, g2) - s.purity_bc),
                1e-4);
    } catch (const std::exception& e) {
      tally.fail("oracle: evaluation", fmt::format("t = {:.6g}: {}", t, e.what()));
    }
  }
}

}  // namespace

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

CheckReport run_check(const ScenarioConfig& c) {
  c.validate();
  Tally tally;
  CheckReport report;
  report.scenario = c.name;

  std::optional<NormalModeDynamics> dyn;
  try {
    dyn.emplace(c.schedule, c.t_end, c.reltol);
  } catch (const std::exception& e) {
    tally.fail("dynamics: setup", e.what());
    report.items = tally.take();
    return report;
  }

  check_basis(tally, decompose(couplings_at(c.schedule, 0.0)));
  check_basis(tally, decompose(couplings_after(c.schedule, 0.0)));

  auto times = c.times();
  const std::size_t stride = std::max<std::size_t>(1, times.size() / 50);
  for (std::size_t i = 0; i < times.size(); i += stride) {
    try {
      const Sample s = evaluate(*dyn, times[i], c.alphas);
      check_basis(tally, s.kernel.basis);
      check_sample(tally, s);
    } catch (const std::exception& e) {
      tally.fail("pipeline: evaluation", fmt::format("t = {:.6g}: {}", times[i], e.what()));
    }
  }

  try {
    check_ermakov(tally, *dyn, c);
  } catch (const std::exception& e) {
    tally.fail("ermakov: evaluation", e.what());
  }
  if (c.oracle) check_oracle(tally, *dyn, c);

  report.items = tally.take();
  return report;
}

void print_report(std::ostream& os, const CheckReport& r) {
  fmt::print(os, "scenario {}\n", r.scenario);
  for (const auto& i : r.items) {
    fmt::print(os, "  [{}] {:<58} deviation {:.3e}  tolerance {:.1e}{}\n", i.passed ? "pass" : "FAIL", i.name,
               i.deviation, i.tolerance, i.note.empty() ? "" : "  (" + i.note + ")");
  }
  fmt::print(os, "{}\n", r.passed() ? "all invariants hold" : "invariant failures present");
}

}  // namespace osc3
