#include "osc3/model.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace osc3 {

Profile Profile::constant(double value) {
  Profile p;
  p.kind_ = Kind::constant;
  p.initial_ = value;
  p.final_ = value;
  return p;
}

Profile Profile::quench(double initial, double final_value) {
  Profile p;
  p.kind_ = Kind::quench;
  p.initial_ = initial;
  p.final_ = final_value;
  return p;
}

Profile Profile::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) {
    throw DomainError("tabulated profile needs matching, non-empty time and value lists");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw DomainError(fmt::format("tabulated profile knots must be strictly increasing (index {})", i));
    }
  }
  Profile p;
  p.kind_ = Kind::tabulated;
  p.initial_ = values.front();
  p.final_ = values.back();
  p.times_ = std::move(times);
  p.values_ = std::move(values);
  return p;
}

double Profile::at(double t) const {
  switch (kind_) {
    case Kind::constant:
      return initial_;
    case Kind::quench:
      return t == 0.0 ? initial_ : final_;
    case Kind::tabulated: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      const auto hi = std::upper_bound(times_.begin(), times_.end(), t);
      const auto i = static_cast<std::size_t>(hi - times_.begin());
      const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
      return (1.0 - w) * values_[i - 1] + w * values_[i];
    }
  }
  return initial_;
}

double Profile::right_limit(double t) const {
  if (kind_ == Kind::quench) return final_;
  return at(t);
}

bool CouplingSchedule::is_sudden() const {
  for (const Profile* p : {&k0, &j12, &j13, &j23}) {
    if (p->kind() == Profile::Kind::tabulated) return false;
  }
  return true;
}

std::vector<double> CouplingSchedule::breakpoints() const {
  std::vector<double> out;
  for (const Profile* p : {&k0, &j12, &j13, &j23}) {
    out.insert(out.end(), p->knots().begin(), p->knots().end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CouplingsAt couplings_at(const CouplingSchedule& schedule, double t) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("couplings requested at negative time t = {}", t));
  return {t, schedule.k0.at(t), schedule.j12.at(t), schedule.j13.at(t), schedule.j23.at(t)};
}

CouplingsAt couplings_after(const CouplingSchedule& schedule, double t) {
  if (!(t >= 0.0)) throw DomainError(fmt::format("couplings requested at negative time t = {}", t));
  return {t, schedule.k0.right_limit(t), schedule.j12.right_limit(t), schedule.j13.right_limit(t),
          schedule.j23.right_limit(t)};
}

Eigen::Matrix3d build_coupling_matrix(const CouplingsAt& c) {
  Eigen::Matrix3d k;
  k << c.k0 + c.j12 + c.j13, -c.j12, -c.j13,
       -c.j12, c.k0 + c.j12 + c.j23, -c.j23,
       -c.j13, -c.j23, c.k0 + c.j13 + c.j23;
  return k;
}

double splitting(double j12, double j13, double j23) {
  // Sum of squared differences form: never negative in floating point.
  const double a = j12 - j13;
  const double b = j12 - j23;
  const double c = j13 - j23;
  return std::sqrt(0.5 * (a * a + b * b + c * c));
}

namespace detail {

ConjugatePair conjugate_pair(double base, double z, double product) {
  if (base >= 0.0) {
    const double plus = base + z;
    return {product / plus, plus};
  }
  const double minus = base - z;
  return {minus, product / minus};
}

}  // namespace detail

namespace {

void fix_sign(Eigen::Ref<Eigen::Vector3d> v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

// The uniform vector is an exact eigenvector of K for every coupling set, so
// the numeric path diagonalizes K on its orthogonal complement only. This
// keeps v₁ pinned to (1,1,1)/√3 even when λ₁ collides with λ±.
ModeBasis decompose_numeric(const CouplingsAt& c, double z) {
  const Eigen::Matrix3d k = build_coupling_matrix(c);
  Eigen::Matrix<double, 3, 2> e;
  e.col(0) = Eigen::Vector3d(1.0, -1.0, 0.0) / std::sqrt(2.0);
  e.col(1) = Eigen::Vector3d(1.0, 1.0, -2.0) / std::sqrt(6.0);
  const Eigen::Matrix2d reduced = e.transpose() * k * e;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(reduced);

  ModeBasis basis;
  basis.couplings = c;
  basis.z = z;
  basis.degenerate = true;
  basis.lambda1 = c.k0;
  basis.lambda_plus = solver.eigenvalues()(1);
  basis.lambda_minus = solver.eigenvalues()(0);

  Eigen::Vector3d v1 = Eigen::Vector3d::Constant(1.0 / std::sqrt(3.0));
  Eigen::Vector3d vp = e * solver.eigenvectors().col(1);
  Eigen::Vector3d vm = e * solver.eigenvectors().col(0);
  fix_sign(vp);
  fix_sign(vm);
  basis.u.row(kModeOne) = v1.transpose();
  basis.u.row(kModePlus) = vp.normalized().transpose();
  basis.u.row(kModeMinus) = vm.normalized().transpose();
  return basis;
}

}  // namespace

ModeBasis decompose(const CouplingsAt& c, double tol) {
  const double z = splitting(c.j12, c.j13, c.j23);
  const double d = c.j13 - c.j23;
  const double scale = std::max({std::abs(c.k0), std::abs(c.j12), std::abs(c.j13), std::abs(c.j23), 1.0});
  if (!(z > tol * scale) || !(std::abs(d) > tol * scale)) {
    return decompose_numeric(c, z);
  }

  // A±² = (2z ± s) / (6 z d²) with s = J₁₃ + J₂₃ − 2J₁₂. Since (2z+s)(2z−s) = 3d²,
  // the smaller numerator is recovered from the larger one without cancellation.
  // Built from exact differences so near-equal couplings lose nothing.
  const double s = (c.j13 - c.j12) + (c.j23 - c.j12);
  const double big = 2.0 * z + std::abs(s);
  const double small = 3.0 * d * d / big;
  const double num_plus = s >= 0.0 ? big : small;
  const double num_minus = s >= 0.0 ? small : big;
  const double sign = d > 0.0 ? 1.0 : -1.0;

  ModeBasis basis;
  basis.couplings = c;
  basis.z = z;
  basis.degenerate = false;
  basis.a_plus = sign * std::sqrt(num_plus / (6.0 * z)) / std::abs(d);
  basis.a_minus = sign * std::sqrt(num_minus / (6.0 * z)) / std::abs(d);
  const double sum = c.j12 + c.j13 + c.j23;
  basis.lambda1 = c.k0;
  basis.lambda_plus = c.k0 + sum + z;
  basis.lambda_minus = c.k0 + sum - z;

  // First components −J₁₂ + J₂₃ ∓ z, second components J₁₂ − J₁₃ ± z.
  const auto first = detail::conjugate_pair(c.j23 - c.j12, z, d * (c.j12 - c.j13));
  const auto second = detail::conjugate_pair(c.j12 - c.j13, z, -d * (c.j12 - c.j23));
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  basis.u << inv_sqrt3, inv_sqrt3, inv_sqrt3,
      basis.a_plus * first.minus, basis.a_plus * second.plus, basis.a_plus * d,
      basis.a_minus * first.plus, basis.a_minus * second.minus, basis.a_minus * d;
  return basis;
}

}  // namespace osc3
