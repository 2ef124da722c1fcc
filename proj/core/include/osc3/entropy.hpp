#pragma once

#include "osc3/gaussian.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace osc3 {

/// Eigenvalue ladder p_n = (1 − ξ) ξⁿ of a one-mode reduced state; the
/// eigenfunctions are Hermite functions of width ε.
struct Spectrum1 {
  double xi = 0.0;
  double epsilon = 0.0;
};

/// Intermediates of the two-mode diagonalization, kept for inspection.
///
/// After removing the imaginary part of the diagonal block by a local phase,
/// rotating the real part onto its eigenbasis (eigenvalues η±) and rescaling,
/// the kernel reads exp[−(x̄ᵀx̄ + ȳᵀȳ − 2x̄ᵀκȳ)/A] with κ Hermitian.
/// `chi_plus` / `chi_minus` are the eigenvalues of κ itself. They give the
/// exact spectrum only when κ is real; `chi_eff_*` come from the symplectic
/// spectrum of the state and are what ξ₁, ξ₂ are built from.
struct ChainDiagnostics {
  double eta = 0.0;
  double eta_plus = 0.0;
  double eta_minus = 0.0;
  Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd kappa = Eigen::Matrix2cd::Zero();
  double chi = 0.0;
  double chi_plus = 0.0;
  double chi_minus = 0.0;
  double chi_eff_plus = 0.0;
  double chi_eff_minus = 0.0;
  double nu_plus = 0.5;  // symplectic eigenvalues, 1/2 for a pure mode
  double nu_minus = 0.5;
};

/// p_mn = (1 − ξ₁)ξ₁ᵐ (1 − ξ₂)ξ₂ⁿ with ξ₁ ≥ ξ₂.
struct Spectrum2 {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
  ChainDiagnostics chain;
};

struct EntropyReport {
  double purity = 1.0;
  std::vector<std::pair<double, double>> renyi;  // (α, S_α)
  double von_neumann = 0.0;

  /// S_α for a requested α; throws std::out_of_range if it was not computed.
  double renyi_at(double alpha) const;
};

inline const std::vector<double> kDefaultAlphas{0.5, 2.0, 3.0};

/// tr ρ² = √((R₁ − Y)/(R₁ + Y)). Throws InvalidStateError unless R₁ > |Y|.
double purity_one(const ReducedKernel1& k);
Spectrum1 spectrum_one(const ReducedKernel1& k);

/// tr ρ² from the α, γ coefficients directly.
double purity_two(const ReducedKernel2& k);
Spectrum2 spectrum_two(const ReducedKernel2& k);

/// Spectrum parameters of a kernel exp(−x̄ᵀx̄ − ȳᵀȳ + 2x̄ᵀκȳ), κ Hermitian.
/// Returns (ξ₁, ξ₂) with ξ₁ ≥ ξ₂ and fills the χ/ν fields of `diag` when given.
std::pair<double, double> spectrum_of_kappa(const Eigen::Matrix2cd& kappa, ChainDiagnostics* diag = nullptr);

/// Rényi entropy of one geometric ladder; α == 1 gives the von Neumann value.
double renyi_entropy(double xi, double alpha);
double von_neumann_entropy(double xi);

EntropyReport entropies_one(const Spectrum1& s, std::span<const double> alphas = kDefaultAlphas);
EntropyReport entropies_two(const Spectrum2& s, std::span<const double> alphas = kDefaultAlphas);

/// Entropies of the two-oscillator block computed from the complementary
/// single oscillator A. For a pure total state both sides share one spectrum.
EntropyReport entropies_via_A(const ReducedKernel1& k_first, std::span<const double> alphas = kDefaultAlphas);

}  // namespace osc3
