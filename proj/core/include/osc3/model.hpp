#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace osc3 {

/// Time dependence of one scalar Hamiltonian parameter.
///
/// A quench holds `initial` at exactly t = 0 and `final` for every t > 0.
/// Tabulated profiles interpolate linearly between strictly increasing knots
/// and hold the end values outside the table.
class Profile {
public:
  enum class Kind { constant, quench, tabulated };

  Profile() = default;

  static Profile constant(double value);
  static Profile quench(double initial, double final_value);
  static Profile tabulated(std::vector<double> times, std::vector<double> values);

  /// Value at t; a quench returns its initial value only at t == 0.
  double at(double t) const;

  /// Value that drives the dynamics on (t, t + dt): identical to at() except
  /// that a quench already reports its final value at t == 0.
  double right_limit(double t) const;

  double initial() const { return at(0.0); }
  Kind kind() const { return kind_; }

  const std::vector<double>& knots() const { return times_; }
  const std::vector<double>& knot_values() const { return values_; }

private:
  Kind kind_ = Kind::constant;
  double initial_ = 0.0;
  double final_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Parameter values at one instant.
struct CouplingsAt {
  double t = 0.0;
  double k0 = 0.0;
  double j12 = 0.0;
  double j13 = 0.0;
  double j23 = 0.0;
};

struct CouplingSchedule {
  Profile k0;
  Profile j12;
  Profile j13;
  Profile j23;

  /// True when every parameter is constant or a sudden quench, so the
  /// Ermakov equations have closed-form solutions.
  bool is_sudden() const;

  /// Sorted union of tabulation knots (points where the profiles are not smooth).
  std::vector<double> breakpoints() const;
};

/// Parameter values at t; t < 0 raises DomainError.
CouplingsAt couplings_at(const CouplingSchedule& schedule, double t);

/// Right limit of the parameters at t (see Profile::right_limit).
CouplingsAt couplings_after(const CouplingSchedule& schedule, double t);

Eigen::Matrix3d build_coupling_matrix(const CouplingsAt& c);

/// Index of a normal mode in every per-mode array of the library.
enum Mode : int { kModeOne = 0, kModePlus = 1, kModeMinus = 2 };

/// Eigen-decomposition K = Uᵀ diag(λ₁, λ₊, λ₋) U of the coupling matrix.
///
/// Rows of `u` are the normal-mode vectors, so y = U x. On the analytic
/// path the rows are v₁ = (1,1,1)/√3 and v± = A± (−J₁₂+J₂₃∓z, J₁₂−J₁₃±z, J₁₃−J₂₃);
/// `degenerate` marks configurations where that parametrization breaks down
/// (z ≈ 0 or J₁₃ ≈ J₂₃) and a numeric eigensolve was used instead.
struct ModeBasis {
  CouplingsAt couplings;
  double z = 0.0;
  double lambda1 = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double a_plus = 0.0;   // zero on the degenerate path
  double a_minus = 0.0;  // zero on the degenerate path
  Eigen::Matrix3d u = Eigen::Matrix3d::Identity();
  bool degenerate = false;

  std::array<double, 3> eigenvalues() const { return {lambda1, lambda_plus, lambda_minus}; }
};

inline constexpr double kDegeneracyTolerance = 1e-9;

/// z = sqrt(J₁₂² + J₁₃² + J₂₃² − J₁₂J₁₃ − J₁₂J₂₃ − J₁₃J₂₃).
double splitting(double j12, double j13, double j23);

ModeBasis decompose(const CouplingsAt& c, double tol = kDegeneracyTolerance);

namespace detail {

/// The pair (base − z, base + z) for z > 0, given their product. The member
/// that would cancel is recovered as product / other.
struct ConjugatePair {
  double minus;
  double plus;
};
ConjugatePair conjugate_pair(double base, double z, double product);

}  // namespace detail

}  // namespace osc3
