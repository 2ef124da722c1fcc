#include "osc3/entropy.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace osc3 {

namespace {

constexpr double kNegativeClamp = 1e-10;

double xi_from_chi(double chi) { return chi / (1.0 + std::sqrt((1.0 - chi) * (1.0 + chi))); }

void check_xi(double xi) {
  if (!(xi >= 0.0 && xi < 1.0)) throw InvalidStateError(fmt::format("spectral parameter ξ = {} outside [0, 1)", xi));
}

// Maps a symplectic eigenvalue ν = 1/μ of the scaled state to χ. Values of χ
// below `floor` are rounding noise on a pure mode and are set to zero.
double chi_from_mu2(double mu2, double floor) {
  if (!(mu2 > 0.0)) throw InvalidStateError("two-mode kernel has a vanishing symplectic width (χ ≥ 1)");
  double chi = (4.0 - mu2) / (4.0 + mu2);
  if (chi >= 0.0 && chi <= floor) return 0.0;
  if (chi < 0.0) {
    if (chi <= -kNegativeClamp) throw InvalidStateError(fmt::format("two-mode kernel gives χ = {} < 0", chi));
    chi = 0.0;
  }
  return chi;
}

}  // namespace

double EntropyReport::renyi_at(double alpha) const {
  for (const auto& [a, s] : renyi) {
    if (a == alpha) return s;
  }
  throw std::out_of_range(fmt::format("Rényi order {} not in report", alpha));
}

// ---------------------------------------------------------------------------

double purity_one(const ReducedKernel1& k) {
  if (!(k.r1 > std::abs(k.y))) {
    throw InvalidStateError(fmt::format("one-mode kernel needs R₁ > |Y| (R₁ = {}, Y = {})", k.r1, k.y));
  }
  return std::sqrt((k.r1 - k.y) / (k.r1 + k.y));
}

Spectrum1 spectrum_one(const ReducedKernel1& k) {
  if (!(k.r1 > std::abs(k.y))) {
    throw InvalidStateError(fmt::format("one-mode kernel needs R₁ > |Y| (R₁ = {}, Y = {})", k.r1, k.y));
  }
  double y = k.y;
  if (y < 0.0) {
    if (y < -1e-12 * k.r1) throw InvalidStateError(fmt::format("one-mode kernel has Y = {} < 0", y));
    y = 0.0;
  }
  const double root = std::sqrt((k.r1 - y) * (k.r1 + y));
  Spectrum1 s;
  s.xi = y / (k.r1 + root);
  s.epsilon = 2.0 * root / k.omega;
  return s;
}

double purity_two(const ReducedKernel2& k) {
  const auto& a = k.alpha;
  const double g11 = k.gamma11;
  const double g22 = k.gamma22;
  const double d2 = a[1] * a[1] - g22 * g22;
  const double s34 = a[2] * a[2] + a[3] * a[3];
  const double n1 = a[0] * d2 - a[1] * s34 + 2.0 * g22 * a[2] * a[3];
  const double n2 = g11 * d2 + g22 * s34 - 2.0 * a[1] * a[2] * a[3];
  const double den = (n1 - n2) * (n1 + n2);
  if (!(d2 > 0.0) || !(den > 0.0)) {
    throw InvalidStateError(fmt::format("two-mode purity undefined (α₂² − γ₂₂² = {}, n₁² − n₂² = {})", d2, den));
  }
  return k.omega_product * k.a / 4.0 * std::sqrt(d2 / den);
}

std::pair<double, double> spectrum_of_kappa(const Eigen::Matrix2cd& kappa, ChainDiagnostics* diag) {
  const Eigen::Matrix2d kr = kappa.real();
  const Eigen::Matrix2d ki = kappa.imag();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();

  // Wigner function of exp(−x̄ᵀx̄ − ȳᵀȳ + 2x̄ᵀκȳ) is a Gaussian in (s, p) with
  // inverse covariance Mw; its symplectic eigenvalues fix the spectrum.
  const Eigen::Matrix2d b = id + kr;
  Eigen::LLT<Eigen::Matrix2d> llt(b);
  if (llt.info() != Eigen::Success) throw InvalidStateError("two-mode kernel is not normalizable (1 + Re κ not positive)");
  const Eigen::Matrix2d binv = llt.solve(id);
  const Eigen::Matrix2d f = -2.0 * ki;

  Eigen::Matrix4d mw;
  mw.topLeftCorner<2, 2>() = 4.0 * (id - kr) + f.transpose() * binv * f;
  mw.topRightCorner<2, 2>() = f.transpose() * binv;
  mw.bottomLeftCorner<2, 2>() = binv * f;
  mw.bottomRightCorner<2, 2>() = binv;

  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j.topRightCorner<2, 2>() = id;
  j.bottomLeftCorner<2, 2>() = -id;
  const Eigen::Matrix4d t = j * mw;
  const double delta = -0.5 * (t * t).trace();
  const double det = mw.determinant();
  const double disc = std::max(delta * delta - 4.0 * det, 0.0);
  const double big = 0.5 * (delta + std::sqrt(disc));
  if (!(big > 0.0)) throw InvalidStateError("two-mode kernel has a non-positive Wigner form");
  const double small = det / big;

  const double scale = mw.cwiseAbs().maxCoeff();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale * scale);
  const double chi_hi = chi_from_mu2(small, floor);
  const double chi_lo = chi_from_mu2(big, floor);

  if (diag != nullptr) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(kappa, Eigen::EigenvaluesOnly);
    diag->kappa = kappa;
    diag->chi = es.eigenvalues()(1) - es.eigenvalues()(0);
    diag->chi_plus = es.eigenvalues()(1);
    diag->chi_minus = es.eigenvalues()(0);
    diag->chi_eff_plus = chi_hi;
    diag->chi_eff_minus = chi_lo;
    diag->nu_plus = 1.0 / std::sqrt(small);
    diag->nu_minus = 1.0 / std::sqrt(big);
  }
  return {xi_from_chi(chi_hi), xi_from_chi(chi_lo)};
}

Spectrum2 spectrum_two(const ReducedKernel2& k) {
  const auto& a = k.alpha;
  ChainDiagnostics ch;
  const double dd = a[0] - a[1];
  ch.eta = std::hypot(dd, 2.0 * a[2]);
  ch.eta_plus = 0.5 * (a[0] + a[1] + ch.eta);
  if (!(ch.eta_plus > 0.0)) throw InvalidStateError("two-mode kernel has a non-positive diagonal block");
  ch.eta_minus = (a[0] * a[1] - a[2] * a[2]) / ch.eta_plus;
  if (!(ch.eta_minus > 0.0)) throw InvalidStateError("two-mode kernel has a non-positive diagonal block (η₋ ≤ 0)");

  // Rows of r are the eigenvectors of [[α₁, α₃], [α₃, α₂]] for η₊ and η₋.
  Eigen::Matrix2d r = Eigen::Matrix2d::Identity();
  if (ch.eta > 0.0) {
    Eigen::Vector2d u = dd >= 0.0 ? Eigen::Vector2d(ch.eta + dd, 2.0 * a[2]) : Eigen::Vector2d(2.0 * a[2], ch.eta - dd);
    u.normalize();
    r << u(0), u(1), -u(1), u(0);
  }
  Eigen::Matrix2cd cm;
  cm << k.gamma11, std::complex<double>(a[3], -k.beta[3]), std::complex<double>(a[3], k.beta[3]), k.gamma22;
  const Eigen::Matrix2cd rc = r.cast<std::complex<double>>();
  ch.c = rc * cm * rc.transpose();

  const Eigen::Vector2d scale(1.0 / std::sqrt(ch.eta_plus), 1.0 / std::sqrt(ch.eta_minus));
  const Eigen::Matrix2cd kappa = scale.cast<std::complex<double>>().asDiagonal() * ch.c *
                                 scale.cast<std::complex<double>>().asDiagonal();

  Spectrum2 s;
  std::tie(s.xi1, s.xi2) = spectrum_of_kappa(kappa, &ch);
  s.epsilon1 = 2.0 / k.a * std::sqrt((1.0 - ch.chi_eff_plus) * (1.0 + ch.chi_eff_plus));
  s.epsilon2 = 2.0 / k.a * std::sqrt((1.0 - ch.chi_eff_minus) * (1.0 + ch.chi_eff_minus));
  s.chain = ch;
  return s;
}

// ---------------------------------------------------------------------------

double von_neumann_entropy(double xi) {
  check_xi(xi);
  if (xi < 1e-300) return xi * (1.0 - std::log(std::max(xi, 1e-320)));
  return -std::log1p(-xi) - xi / (1.0 - xi) * std::log(xi);
}

double renyi_entropy(double xi, double alpha) {
  if (!(alpha > 0.0)) throw DomainError(fmt::format("Rényi order must be positive, got {}", alpha));
  if (alpha == 1.0) return von_neumann_entropy(xi);
  check_xi(xi);
  if (xi == 0.0) return 0.0;
  const double d = alpha - 1.0;
  if (std::abs(d) < 1e-4) {
    // The closed form is 0/0 at α = 1; expand about the von Neumann value.
    // With f(α) = α ln(1 − ξ) − ln(1 − ξ^α), S_α = −Σₙ f⁽ⁿ⁾(1) dⁿ⁻¹ / n!.
    const double l = std::log(xi);
    const double u = 1.0 - xi;
    const double f2 = l * l * xi / (u * u);
    const double f3 = f2 * l * (1.0 + xi) / u;
    const double f4 = f2 * l * l * (1.0 + 4.0 * xi + xi * xi) / (u * u);
    return von_neumann_entropy(xi) - d * (f2 / 2.0 + d * (f3 / 6.0 + d * f4 / 24.0));
  }
  return (alpha * std::log1p(-xi) - std::log1p(-std::pow(xi, alpha))) / (1.0 - alpha);
}

EntropyReport entropies_one(const Spectrum1& s, std::span<const double> alphas) {
  check_xi(s.xi);
  EntropyReport r;
  r.purity = (1.0 - s.xi) / (1.0 + s.xi);
  r.von_neumann = von_neumann_entropy(s.xi);
  for (double a : alphas) r.renyi.emplace_back(a, renyi_entropy(s.xi, a));
  return r;
}

EntropyReport entropies_two(const Spectrum2& s, std::span<const double> alphas) {
  check_xi(s.xi1);
  check_xi(s.xi2);
  EntropyReport r;
  r.purity = (1.0 - s.xi1) / (1.0 + s.xi1) * (1.0 - s.xi2) / (1.0 + s.xi2);
  r.von_neumann = von_neumann_entropy(s.xi1) + von_neumann_entropy(s.xi2);
  for (double a : alphas) r.renyi.emplace_back(a, renyi_entropy(s.xi1, a) + renyi_entropy(s.xi2, a));
  return r;
}

EntropyReport entropies_via_A(const ReducedKernel1& k_first, std::span<const double> alphas) {
  return entropies_one(spectrum_one(k_first), alphas);
}

}  // namespace osc3
