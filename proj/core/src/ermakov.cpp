#include "osc3/ermakov.hpp"

#include "osc3/errors.hpp"

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace osc3 {

ErmakovState make_state(double omega0sq, double b, double bdot) {
  if (!(omega0sq > 0.0)) {
    throw DomainError(fmt::format("initial squared frequency must be positive, got {}", omega0sq));
  }
  ErmakovState s;
  s.b = b;
  s.bdot = bdot;
  s.omega0sq = omega0sq;
  s.omega_prime = std::sqrt(omega0sq) / (b * b);
  s.v = {s.omega_prime, -bdot / b};
  return s;
}

ErmakovState solve_quench(double wi_sq, double wf_sq, double t) {
  if (!(wi_sq > 0.0)) throw DomainError(fmt::format("quench needs wi_sq > 0, got {}", wi_sq));
  if (!(t >= 0.0)) throw DomainError(fmt::format("quench evaluated at negative time {}", t));
  if (wf_sq == 0.0) throw UnsupportedError("quench to zero frequency has no bounded scale factor");

  const double amp = (wf_sq - wi_sq) / (2.0 * wf_sq);
  const double mean = (wf_sq + wi_sq) / (2.0 * wf_sq);
  double c = 0.0;
  double dc = 0.0;
  if (wf_sq > 0.0) {
    const double w = std::sqrt(wf_sq);
    c = std::cos(2.0 * w * t);
    dc = -2.0 * w * std::sin(2.0 * w * t);
  } else {
    const double k = std::sqrt(-wf_sq);
    c = std::cosh(2.0 * k * t);
    dc = 2.0 * k * std::sinh(2.0 * k * t);
  }
  const double b = std::sqrt(amp * c + mean);
  return make_state(wi_sq, b, amp * dc / (2.0 * b));
}

// ---------------------------------------------------------------------------

ModeProfile ModeProfile::constant(double omegasq) {
  ModeProfile p;
  p.kind_ = Kind::constant;
  p.scalar_ = Profile::constant(omegasq);
  p.validate();
  return p;
}

ModeProfile ModeProfile::quench(double wi_sq, double wf_sq) {
  ModeProfile p;
  p.kind_ = Kind::quench;
  p.scalar_ = Profile::quench(wi_sq, wf_sq);
  p.validate();
  return p;
}

ModeProfile ModeProfile::tabulated(std::vector<double> times, std::vector<double> omegasq) {
  ModeProfile p;
  p.kind_ = Kind::tabulated;
  p.scalar_ = Profile::tabulated(std::move(times), std::move(omegasq));
  p.validate();
  return p;
}

ModeProfile ModeProfile::from_schedule(CouplingSchedule schedule, Mode mode) {
  ModeProfile p;
  p.kind_ = Kind::schedule;
  p.schedule_ = std::make_shared<const CouplingSchedule>(std::move(schedule));
  p.mode_ = mode;
  p.validate();
  return p;
}

void ModeProfile::validate() const {
  const double l0 = initial();
  if (!(l0 > 0.0)) {
    throw DomainError(fmt::format("mode profile needs a positive initial squared frequency, got {}", l0));
  }
}

double ModeProfile::initial() const { return at(0.0); }

double ModeProfile::at(double t) const {
  if (kind_ == Kind::schedule) return decompose(couplings_at(*schedule_, t)).eigenvalues()[mode_];
  return scalar_.at(t);
}

double ModeProfile::right_limit(double t) const {
  if (kind_ == Kind::schedule) return decompose(couplings_after(*schedule_, t)).eigenvalues()[mode_];
  return scalar_.right_limit(t);
}

std::vector<double> ModeProfile::breakpoints() const {
  if (kind_ == Kind::schedule) return schedule_->breakpoints();
  return scalar_.knots();
}

// ---------------------------------------------------------------------------

Trajectory::Trajectory(double omega0sq, std::vector<double> times, std::vector<double> b, std::vector<double> bdot,
                       std::vector<double> bddot)
    : omega0sq_(omega0sq),
      times_(std::move(times)),
      b_(std::move(b)),
      bdot_(std::move(bdot)),
      bddot_(std::move(bddot)) {
  const auto n = times_.size();
  if (n == 0 || b_.size() != n || bdot_.size() != n || bddot_.size() != n) {
    throw DomainError("trajectory arrays must be non-empty and of equal length");
  }
}

namespace {

// Cubic Hermite on [0, h] with end values (y0, y1) and slopes (d0, d1); s = (t - t0)/h.
double hermite(double s, double h, double y0, double y1, double d0, double d1) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

ErmakovState Trajectory::at(double t) const {
  const double t0 = times_.front();
  const double t1 = times_.back();
  const double slack = 1e-12 * std::max(1.0, std::abs(t1));
  if (t < t0 - slack || t > t1 + slack) {
    throw DomainError(fmt::format("trajectory covers [{}, {}], requested t = {}", t0, t1, t));
  }
  t = std::clamp(t, t0, t1);
  auto hi = std::lower_bound(times_.begin(), times_.end(), t);
  auto i = static_cast<std::size_t>(hi - times_.begin());
  if (i < times_.size() && times_[i] == t) return make_state(omega0sq_, b_[i], bdot_[i]);
  const std::size_t j = i - 1;
  const double h = times_[i] - times_[j];
  const double s = (t - times_[j]) / h;
  const double b = hermite(s, h, b_[j], b_[i], bdot_[j], bdot_[i]);
  const double bd = hermite(s, h, bdot_[j], bdot_[i], bddot_[j], bddot_[i]);
  return make_state(omega0sq_, b, bd);
}

// ---------------------------------------------------------------------------

Trajectory solve_ode(const ModeProfile& profile, double tmax, double reltol, double output_step) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;

  if (!(reltol >= 1e-13 && reltol <= 1e-6)) {
    throw DomainError(fmt::format("reltol must lie in [1e-13, 1e-6], got {}", reltol));
  }
  if (!(tmax >= 0.0)) throw DomainError(fmt::format("tmax must be non-negative, got {}", tmax));

  const double l0 = profile.initial();

  if (output_step <= 0.0) {
    // Hermite error on an oscillation of angular rate 2ω is about (2ωh)⁴/384.
    double lmax = std::abs(l0);
    constexpr int kProbe = 512;
    for (int i = 0; i <= kProbe; ++i) lmax = std::max(lmax, std::abs(profile.right_limit(tmax * i / kProbe)));
    for (double k : profile.breakpoints()) {
      if (k >= 0.0 && k <= tmax) lmax = std::max(lmax, std::abs(profile.right_limit(k)));
    }
    const double omega = std::max(std::sqrt(lmax), 1e-3);
    output_step = std::pow(384.0 * reltol, 0.25) / (2.0 * omega);
    if (tmax > 0.0) output_step = std::min(output_step, tmax / 16.0);
  }

  // Uniform spacing between consecutive breakpoints, and every breakpoint is a
  // knot, so no integration step or interpolation interval straddles a kink.
  std::vector<double> edges{0.0};
  for (double k : profile.breakpoints()) {
    if (k > 0.0 && k < tmax) edges.push_back(k);
  }
  edges.push_back(tmax);
  std::vector<double> grid{0.0};
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e];
    const double len = edges[e + 1] - a;
    if (!(len > 0.0)) continue;
    const auto pieces = static_cast<std::size_t>(std::ceil(len / output_step));
    for (std::size_t i = 1; i < pieces; ++i) grid.push_back(a + len * static_cast<double>(i) / pieces);
    grid.push_back(edges[e + 1]);
  }
  const std::size_t intervals = grid.size() - 1;

  auto rhs = [&](const State& x, State& dxdt, double t) {
    const double b = x[0];
    if (!(b >= 1e-8)) {
      throw IntegrationError(fmt::format("Ermakov scale factor collapsed to {} at t = {}", b, t));
    }
    dxdt[0] = x[1];
    dxdt[1] = l0 / (b * b * b) - profile.right_limit(t) * b;
  };

  std::vector<double> ts, bs, bds, bdds;
  ts.reserve(grid.size());
  bs.reserve(grid.size());
  bds.reserve(grid.size());
  bdds.reserve(grid.size());
  auto observer = [&](const State& x, double t) {
    State d{};
    rhs(x, d, t);
    ts.push_back(t);
    bs.push_back(x[0]);
    bds.push_back(x[1]);
    bdds.push_back(d[1]);
  };

  State x{1.0, 0.0};
  if (intervals == 0) {
    observer(x, 0.0);
  } else {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(reltol, reltol);
    try {
      odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), output_step / 4.0, observer);
    } catch (const IntegrationError&) {
      throw;
    } catch (const std::exception& e) {
      throw IntegrationError(fmt::format("Ermakov integration failed: {}", e.what()));
    }
  }
  // integrate_times reports the grid times themselves; pin them to avoid drift.
  ts = grid;
  return Trajectory(l0, std::move(ts), std::move(bs), std::move(bds), std::move(bdds));
}

}  // namespace osc3
