#pragma once

#include "osc3/ermakov.hpp"
#include "osc3/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <variant>

namespace osc3 {

using ModeStates = std::array<ErmakovState, 3>;

/// Vacuum density matrix of the three oscillators,
///   ρ(x, x′) = norm2 · exp[−xᵀ G x − x′ᵀ G* x′],   2G = Uᵀ diag(v₁, v₊, v₋) U.
///
/// The phase factors of the three normal-mode vacua multiply Ψ and Ψ* with
/// opposite signs, so they cancel here and are never computed.
struct FullKernel {
  Eigen::Matrix3cd g;
  double norm2 = 0.0;  // (ω′₁ω′₊ω′₋ / π³)^{1/2}
  ModeBasis basis;
  ModeStates modes;

  double omega_product() const { return modes[0].omega_prime * modes[1].omega_prime * modes[2].omega_prime; }
};

/// One-oscillator reduced kernel
///   ρ(x, x′) = norm · exp[−((R₁ − iI₁) x² + (R₁ + iI₁) x′² − 2Y x x′) / Ω].
struct ReducedKernel1 {
  double omega = 0.0;
  double y = 0.0;
  double r1 = 0.0;
  double i1 = 0.0;
  double norm = 0.0;           // (ω′₁ω′₊ω′₋ / (π Ω))^{1/2}
  double omega_product = 0.0;  // ω′₁ω′₊ω′₋
};

/// Two-oscillator reduced kernel ρ(x₁, x₂ : y₁, y₂) = norm · exp(−Γ / A) with
///   Γ = (α₁ − iβ₁)x₁² + (α₁ + iβ₁)y₁² + (α₂ − iβ₂)x₂² + (α₂ + iβ₂)y₂²
///     + 2(α₃ − iβ₃)x₁x₂ + 2(α₃ + iβ₃)y₁y₂ − 2γ₁₁x₁y₁ − 2γ₂₂x₂y₂
///     − 2(α₄ − iβ₄)x₁y₂ − 2(α₄ + iβ₄)x₂y₁.
/// alpha[k] / beta[k] hold α_{k+1} / β_{k+1}.
struct ReducedKernel2 {
  double a = 0.0;
  std::array<double, 4> alpha{};
  std::array<double, 4> beta{};
  double gamma11 = 0.0;
  double gamma22 = 0.0;
  double norm = 0.0;           // (ω′₁ω′₊ω′₋ / (π² A))^{1/2}
  double omega_product = 0.0;
};

using ReducedKernel = std::variant<ReducedKernel1, ReducedKernel2>;

/// Closed-form G on a non-degenerate basis, the generic product otherwise.
FullKernel build_full_kernel(const ModeBasis& basis, const ModeStates& modes);

/// Trace out oscillators A and B (labels 1, 2), keeping C.
ReducedKernel1 reduce_keep_third(const FullKernel& k);
/// Trace out oscillator A, keeping (B, C) as (x₁, x₂).
ReducedKernel2 reduce_drop_first(const FullKernel& k);
/// Trace out oscillators B and C, keeping A.
ReducedKernel1 reduce_keep_first(const FullKernel& k);

/// Partial trace by completing the square in the traced coordinates.
///
/// `keep` lists the retained oscillators by label (1 = A, 2 = B, 3 = C) in
/// the order they map to the kernel's coordinates. Throws NumericalError when
/// the traced block of 2·Re G is not positive definite or has condition
/// number above 1e12.
ReducedKernel marginalize_generic(const FullKernel& k, std::span<const int> keep);
ReducedKernel1 marginalize_to_one(const FullKernel& k, int keep);
ReducedKernel2 marginalize_to_two(const FullKernel& k, int first, int second);

/// Explicit coefficient formulas. They need the analytic basis parametrization
/// and throw NumericalError on a degenerate basis.
namespace closed_form {

Eigen::Matrix3cd full_kernel(const ModeBasis& basis, const ModeStates& modes);
ReducedKernel1 keep_third(const FullKernel& k);
ReducedKernel2 drop_first(const FullKernel& k);
ReducedKernel1 keep_first(const FullKernel& k);

}  // namespace closed_form

/// 2G = Uᵀ diag(v) U, valid for any orthogonal U.
Eigen::Matrix3cd full_kernel_generic(const ModeBasis& basis, const ModeStates& modes);

std::complex<double> density(const ReducedKernel1& k, double x, double xp);
std::complex<double> density(const ReducedKernel2& k, double x1, double x2, double y1, double y2);

/// Quadratic-form view of a reduced kernel: ρ(x, y) = norm · exp(−xᵀPx − yᵀP̄y + 2xᵀQy),
/// P complex symmetric, Q Hermitian.
struct KernelForm {
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd q;
  double norm = 0.0;
};

KernelForm kernel_form(const ReducedKernel1& k);
KernelForm kernel_form(const ReducedKernel2& k);

}  // namespace osc3
