#include "osc3/gaussian.hpp"

#include "osc3/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>

namespace osc3 {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// v a* + v* a for complex v, a.
double sym(cd v, cd a) { return 2.0 * std::real(v * std::conj(a)); }

// Shorthand for every combination the explicit formulas are written in.
struct Terms {
  double j12, j13, j23, z, d;
  double ap2, am2;          // A±²
  double w1, wp, wm;        // ω′₁, ω′₊, ω′₋
  double g1, gp, gm;        // ḃ_j / b_j
  cd v1, vp, vm;
  double pa, ma;            // −J₁₂ + J₂₃ ∓ z
  double pc, mc;            // J₁₂ − J₁₃ ± z
  double zp, zm;            // Z± = 2J₁₂ − J₁₃ − J₂₃ ± 2z
  double yp, ym;            // Y± = J₁₂ + J₁₃ − 2J₂₃ ± z
  double xp, xm;            // X± = J₁₂ + J₂₃ − 2J₁₃ ± z
  double tp, tm;            // J₁₂ − 2J₁₃ + J₂₃ ± z

  Terms(const ModeBasis& b, const ModeStates& m) {
    if (b.degenerate) throw NumericalError("explicit coefficient formulas need a non-degenerate mode basis");
    j12 = b.couplings.j12;
    j13 = b.couplings.j13;
    j23 = b.couplings.j23;
    z = b.z;
    d = j13 - j23;
    ap2 = b.a_plus * b.a_plus;
    am2 = b.a_minus * b.a_minus;
    w1 = m[kModeOne].omega_prime;
    wp = m[kModePlus].omega_prime;
    wm = m[kModeMinus].omega_prime;
    g1 = m[kModeOne].rate();
    gp = m[kModePlus].rate();
    gm = m[kModeMinus].rate();
    v1 = m[kModeOne].v;
    vp = m[kModePlus].v;
    vm = m[kModeMinus].v;
    // Each ± pair is formed so that the member prone to cancellation comes
    // from the pair's product, which is a multiple of d.
    const double e12 = j12 - j13;
    const double e23 = j12 - j23;
    std::tie(pa, ma) = split(j23 - j12, z, d * e12);
    std::tie(mc, pc) = split(e12, z, -d * e23);
    std::tie(zm, zp) = split(e12 + e23, 2 * z, -3 * d * d);
    std::tie(ym, yp) = split(e23 + d, z, 3 * e23 * d);
    std::tie(xm, xp) = split(e12 - d, z, -3 * e12 * d);
    tp = xp;
    tm = xm;
  }

  double w3() const { return w1 * wp * wm; }

  static std::pair<double, double> split(double base, double z, double product) {
    const auto p = detail::conjugate_pair(base, z, product);
    return {p.minus, p.plus};
  }
};

ReducedKernel1 finish_one(double omega, double y, double r1, double i1, double w3) {
  ReducedKernel1 k;
  k.omega = omega;
  k.y = y;
  k.r1 = r1;
  k.i1 = i1;
  k.omega_product = w3;
  k.norm = std::sqrt(w3 / (kPi * omega));
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------

Eigen::Matrix3cd full_kernel_generic(const ModeBasis& basis, const ModeStates& modes) {
  Eigen::Vector3cd v(modes[0].v, modes[1].v, modes[2].v);
  const Eigen::Matrix3cd u = basis.u.cast<cd>();
  return 0.5 * u.transpose() * v.asDiagonal() * u;
}

namespace closed_form {

Eigen::Matrix3cd full_kernel(const ModeBasis& basis, const ModeStates& modes) {
  const Terms s(basis, modes);
  const cd third = s.v1 / 3.0;
  const cd fp = s.vp * s.ap2;
  const cd fm = s.vm * s.am2;
  Eigen::Matrix3cd g;
  g(0, 0) = 0.5 * (third + fp * s.pa * s.pa + fm * s.ma * s.ma);
  g(1, 1) = 0.5 * (third + fp * s.pc * s.pc + fm * s.mc * s.mc);
  g(2, 2) = 0.5 * (third + (fp + fm) * s.d * s.d);
  g(0, 1) = 0.5 * (third + fp * s.pa * s.pc + fm * s.ma * s.mc);
  g(0, 2) = 0.5 * (third + (fp * s.pa + fm * s.ma) * s.d);
  g(1, 2) = 0.5 * (third + (fp * s.pc + fm * s.mc) * s.d);
  g(1, 0) = g(0, 1);
  g(2, 0) = g(0, 2);
  g(2, 1) = g(1, 2);
  return g;
}

ReducedKernel1 keep_third(const FullKernel& k) {
  const Terms s(k.basis, k.modes);
  const double d2 = s.d * s.d;
  const double pm = s.ap2 * s.am2;
  const double omega = (s.ap2 * s.zp * s.zp * s.w1 * s.wp + s.am2 * s.zm * s.zm * s.w1 * s.wm + s.wp * s.wm) / 3.0;
  const double y =
      std::norm(s.v1) / 36.0 * (s.ap2 * s.zp * s.zp * s.wp + s.am2 * s.zm * s.zm * s.wm) +
      d2 * s.w1 / 12.0 * (s.ap2 * s.ap2 * s.zp * s.zp * std::norm(s.vp) + s.am2 * s.am2 * s.zm * s.zm * std::norm(s.vm)) +
      s.z * s.z * pm * d2 * d2 * (s.ap2 * std::norm(s.vp) * s.wm + s.am2 * s.wp * std::norm(s.vm)) +
      pm / 6.0 * d2 *
          (0.5 * s.zp * s.zm * s.w1 * sym(s.vp, s.vm) - s.z * s.zp * s.wp * sym(s.v1, s.vm) +
           s.z * s.zm * s.wm * sym(s.v1, s.vp));
  const double r1 = 0.5 * s.w3() + y;
  const double i1 =
      pm * d2 * s.z * (s.zp * s.w1 * s.wp * s.gm - s.zm * s.w1 * s.gp * s.wm + 2.0 * s.z * s.g1 * s.wp * s.wm);
  return finish_one(omega, y, r1, i1, s.w3());
}

ReducedKernel1 keep_first(const FullKernel& k) {
  const Terms s(k.basis, k.modes);
  const double pm = s.ap2 * s.am2;
  const double omega = (s.ap2 * s.xp * s.xp * s.w1 * s.wp + s.am2 * s.xm * s.xm * s.w1 * s.wm + s.wp * s.wm) / 3.0;
  const double y =
      std::norm(s.v1) / 36.0 * (s.ap2 * s.xp * s.xp * s.wp + s.am2 * s.xm * s.xm * s.wm) +
      s.w1 / 12.0 *
          (s.ap2 * s.ap2 * s.xp * s.xp * s.pa * s.pa * std::norm(s.vp) +
           s.am2 * s.am2 * s.xm * s.xm * s.ma * s.ma * std::norm(s.vm)) +
      pm * s.z * s.z * s.d * s.d *
          (s.ap2 * s.pa * s.pa * std::norm(s.vp) * s.wm + s.am2 * s.ma * s.ma * s.wp * std::norm(s.vm)) +
      pm / 4.0 * s.d *
          (-(s.j12 - s.j13) * s.ma * s.pa * s.w1 * sym(s.vp, s.vm) +
           2.0 / 3.0 * s.z * s.xp * s.ma * s.wp * sym(s.v1, s.vm) -
           2.0 / 3.0 * s.z * s.xm * s.pa * s.wm * sym(s.v1, s.vp));
  const double r = y + 0.5 * s.w3();
  const double i = -pm * s.z * s.d *
                   (s.xp * s.ma * s.w1 * s.wp * s.gm - s.xm * s.pa * s.w1 * s.gp * s.wm -
                    2.0 * s.z * s.d * s.g1 * s.wp * s.wm);
  return finish_one(omega, y, r, i, s.w3());
}

ReducedKernel2 drop_first(const FullKernel& k) {
  const Terms s(k.basis, k.modes);
  const double pm = s.ap2 * s.am2;
  const double ap4 = s.ap2 * s.ap2;
  const double am4 = s.am2 * s.am2;
  const double np = std::norm(s.vp);
  const double nm = std::norm(s.vm);
  const double n1 = std::norm(s.v1) / 36.0;
  const double d = s.d;
  // ω′ω′ + (ḃ/b)(ḃ/b) pairs
  const double e1p = s.w1 * s.wp + s.g1 * s.gp;
  const double e1m = s.w1 * s.wm + s.g1 * s.gm;
  const double epm = s.wp * s.wm + s.gp * s.gm;
  const double zz = 4.0 * s.z * s.z;

  ReducedKernel2 r;
  r.a = s.w1 / 3.0 + s.wp * s.ap2 * s.pa * s.pa + s.wm * s.am2 * s.ma * s.ma;

  r.alpha[0] = n1 + 0.25 * np * ap4 * s.pa * s.pa * s.pc * s.pc + 0.25 * nm * am4 * s.ma * s.ma * s.mc * s.mc +
               s.ap2 / 6.0 * (s.zp * s.zp * s.w1 * s.wp + e1p * s.pc * s.pa) +
               s.am2 / 6.0 * (s.zm * s.zm * s.w1 * s.wm + e1m * s.mc * s.ma) +
               pm / 2.0 * (zz * d * d * s.wp * s.wm + epm * s.pc * s.mc * s.ma * s.pa);

  r.beta[0] = s.ap2 / 6.0 * s.zp * (s.w1 * s.gp * s.pc - s.g1 * s.wp * s.pa) +
              s.am2 / 6.0 * s.zm * (s.w1 * s.gm * s.mc - s.g1 * s.wm * s.ma) +
              pm * s.z * d * (s.wp * s.gm * s.mc * s.pa - s.gp * s.wm * s.pc * s.ma);

  r.alpha[1] = n1 + 0.25 * np * ap4 * d * d * s.pa * s.pa + 0.25 * nm * am4 * d * d * s.ma * s.ma +
               s.ap2 / 6.0 * (s.yp * s.yp * s.w1 * s.wp + e1p * d * s.pa) +
               s.am2 / 6.0 * (s.ym * s.ym * s.w1 * s.wm + e1m * d * s.ma) +
               pm / 2.0 * d * d * (zz * s.wp * s.wm + epm * s.ma * s.pa);

  r.beta[1] = s.ap2 / 6.0 * s.yp * (s.w1 * s.gp * d - s.g1 * s.wp * s.pa) +
              s.am2 / 6.0 * s.ym * (s.w1 * s.gm * d - s.g1 * s.wm * s.ma) -
              pm * s.z * d * d * (s.wp * s.gm * s.pa - s.gp * s.wm * s.ma);

  const double shared34 = n1 + 0.25 * np * ap4 * d * s.pc * s.pa * s.pa + 0.25 * nm * am4 * d * s.mc * s.ma * s.ma;

  r.alpha[2] = shared34 + s.ap2 / 12.0 * (2.0 * s.zp * s.yp * s.w1 * s.wp - e1p * s.pa * s.pa) +
               s.am2 / 12.0 * (2.0 * s.zm * s.ym * s.w1 * s.wm - e1m * s.ma * s.ma) +
               pm / 2.0 * d * (-zz * d * s.wp * s.wm + epm * (s.j12 - s.j13) * s.ma * s.pa);

  r.beta[2] = s.ap2 / 12.0 * (s.w1 * s.gp * (2.0 * d * s.pc + s.pa * s.pa) + 3.0 * s.g1 * s.wp * s.pa * s.pa) +
              s.am2 / 12.0 * (s.w1 * s.gm * (2.0 * d * s.mc + s.ma * s.ma) + 3.0 * s.g1 * s.wm * s.ma * s.ma) +
              pm / 2.0 * s.z * d * (-s.wp * s.gm * s.pa * s.tm + s.gp * s.wm * s.ma * s.tp);

  r.alpha[3] = shared34 - s.ap2 / 12.0 * s.pa * s.pa * e1p - s.am2 / 12.0 * s.ma * s.ma * e1m +
               pm / 2.0 * (s.j12 - s.j13) * d * s.ma * s.pa * epm;

  r.beta[3] = s.ap2 / 12.0 * s.pa * s.tp * (s.w1 * s.gp - s.g1 * s.wp) +
              s.am2 / 12.0 * s.ma * s.tm * (s.w1 * s.gm - s.g1 * s.wm) -
              pm / 2.0 * s.z * d * s.ma * s.pa * (s.wp * s.gm - s.gp * s.wm);

  r.gamma11 = n1 + 0.25 * np * ap4 * s.pc * s.pc * s.pa * s.pa + 0.25 * nm * am4 * s.mc * s.mc * s.ma * s.ma +
              s.ap2 / 12.0 * sym(s.v1, s.vp) * s.pc * s.pa + s.am2 / 12.0 * sym(s.v1, s.vm) * s.mc * s.ma +
              pm / 4.0 * sym(s.vp, s.vm) * s.pc * s.mc * s.ma * s.pa;

  r.gamma22 = n1 + 0.25 * np * ap4 * d * d * s.pa * s.pa + 0.25 * nm * am4 * d * d * s.ma * s.ma +
              s.ap2 / 12.0 * sym(s.v1, s.vp) * d * s.pa + s.am2 / 12.0 * sym(s.v1, s.vm) * d * s.ma +
              pm / 4.0 * sym(s.vp, s.vm) * d * d * s.ma * s.pa;

  r.omega_product = s.w3();
  r.norm = std::sqrt(s.w3() / (kPi * kPi * r.a));
  return r;
}

}  // namespace closed_form

// ---------------------------------------------------------------------------

FullKernel build_full_kernel(const ModeBasis& basis, const ModeStates& modes) {
  FullKernel k;
  k.basis = basis;
  k.modes = modes;
  k.g = basis.degenerate ? full_kernel_generic(basis, modes) : closed_form::full_kernel(basis, modes);
  k.norm2 = std::sqrt(k.omega_product() / (kPi * kPi * kPi));
  return k;
}

ReducedKernel marginalize_generic(const FullKernel& k, std::span<const int> keep) {
  if (keep.empty() || keep.size() > 2) {
    throw DomainError(fmt::format("can keep one or two oscillators, got {}", keep.size()));
  }
  std::array<bool, 3> kept{};
  std::vector<int> ki;
  for (int label : keep) {
    if (label < 1 || label > 3 || kept[label - 1]) {
      throw DomainError(fmt::format("invalid or repeated oscillator label {}", label));
    }
    kept[label - 1] = true;
    ki.push_back(label - 1);
  }
  std::vector<int> ti;
  for (int i = 0; i < 3; ++i) {
    if (!kept[i]) ti.push_back(i);
  }
  const auto nk = static_cast<Eigen::Index>(ki.size());
  const auto nt = static_cast<Eigen::Index>(ti.size());

  Eigen::MatrixXcd gkk(nk, nk), gkt(nk, nt), gtt(nt, nt);
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) gkk(a, b) = k.g(ki[a], ki[b]);
    for (Eigen::Index b = 0; b < nt; ++b) gkt(a, b) = k.g(ki[a], ti[b]);
  }
  for (Eigen::Index a = 0; a < nt; ++a) {
    for (Eigen::Index b = 0; b < nt; ++b) gtt(a, b) = k.g(ti[a], ti[b]);
  }

  // The traced coordinates appear identically in x and x′, so they enter the
  // exponent through M = G_TT + G*_TT = 2 Re G_TT.
  const Eigen::MatrixXd m = 2.0 * gtt.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) throw NumericalError("traced block of 2 Re G is not positive definite");
  if (hi / lo > 1e12) throw NumericalError(fmt::format("traced block condition number {:.3g} exceeds 1e12", hi / lo));
  const double det_m = m.determinant();
  const Eigen::MatrixXcd minv = m.inverse().cast<std::complex<double>>();

  const Eigen::MatrixXcd p = gkk - gkt * minv * gkt.transpose();
  const Eigen::MatrixXcd q = gkt * minv * gkt.adjoint();
  const double w3 = k.omega_product();

  if (nk == 1) {
    // ρ ∝ exp(−P x² − P̄ x′² + 2Q x x′) against the (Ω, R₁, I₁, Y) convention.
    const double omega = det_m;
    return finish_one(omega, omega * q(0, 0).real(), omega * p(0, 0).real(), -omega * p(0, 0).imag(), w3);
  }

  ReducedKernel2 r;
  r.a = det_m;
  r.alpha = {r.a * p(0, 0).real(), r.a * p(1, 1).real(), r.a * p(0, 1).real(), r.a * q(0, 1).real()};
  r.beta = {-r.a * p(0, 0).imag(), -r.a * p(1, 1).imag(), -r.a * p(0, 1).imag(), -r.a * q(0, 1).imag()};
  r.gamma11 = r.a * q(0, 0).real();
  r.gamma22 = r.a * q(1, 1).real();
  r.omega_product = w3;
  r.norm = std::sqrt(w3 / (kPi * kPi * r.a));
  return r;
}

ReducedKernel1 marginalize_to_one(const FullKernel& k, int keep) {
  const std::array<int, 1> labels{keep};
  return std::get<ReducedKernel1>(marginalize_generic(k, labels));
}

ReducedKernel2 marginalize_to_two(const FullKernel& k, int first, int second) {
  const std::array<int, 2> labels{first, second};
  return std::get<ReducedKernel2>(marginalize_generic(k, labels));
}

ReducedKernel1 reduce_keep_third(const FullKernel& k) {
  return k.basis.degenerate ? marginalize_to_one(k, 3) : closed_form::keep_third(k);
}

ReducedKernel2 reduce_drop_first(const FullKernel& k) {
  return k.basis.degenerate ? marginalize_to_two(k, 2, 3) : closed_form::drop_first(k);
}

ReducedKernel1 reduce_keep_first(const FullKernel& k) {
  return k.basis.degenerate ? marginalize_to_one(k, 1) : closed_form::keep_first(k);
}

// ---------------------------------------------------------------------------

KernelForm kernel_form(const ReducedKernel1& k) {
  KernelForm f;
  f.p.resize(1, 1);
  f.q.resize(1, 1);
  f.p(0, 0) = cd(k.r1, -k.i1) / k.omega;
  f.q(0, 0) = k.y / k.omega;
  f.norm = k.norm;
  return f;
}

KernelForm kernel_form(const ReducedKernel2& k) {
  KernelForm f;
  f.p.resize(2, 2);
  f.q.resize(2, 2);
  f.p(0, 0) = cd(k.alpha[0], -k.beta[0]) / k.a;
  f.p(1, 1) = cd(k.alpha[1], -k.beta[1]) / k.a;
  f.p(0, 1) = f.p(1, 0) = cd(k.alpha[2], -k.beta[2]) / k.a;
  f.q(0, 0) = k.gamma11 / k.a;
  f.q(1, 1) = k.gamma22 / k.a;
  f.q(0, 1) = cd(k.alpha[3], -k.beta[3]) / k.a;
  f.q(1, 0) = cd(k.alpha[3], k.beta[3]) / k.a;
  f.norm = k.norm;
  return f;
}

std::complex<double> density(const ReducedKernel1& k, double x, double xp) {
  const cd e = (cd(k.r1, -k.i1) * x * x + cd(k.r1, k.i1) * xp * xp - 2.0 * k.y * x * xp) / k.omega;
  return k.norm * std::exp(-e);
}

std::complex<double> density(const ReducedKernel2& k, double x1, double x2, double y1, double y2) {
  const auto& al = k.alpha;
  const auto& be = k.beta;
  const cd gamma = cd(al[0], -be[0]) * x1 * x1 + cd(al[0], be[0]) * y1 * y1 + cd(al[1], -be[1]) * x2 * x2 +
                   cd(al[1], be[1]) * y2 * y2 + 2.0 * cd(al[2], -be[2]) * x1 * x2 +
                   2.0 * cd(al[2], be[2]) * y1 * y2 - 2.0 * k.gamma11 * x1 * y1 - 2.0 * k.gamma22 * x2 * y2 -
                   2.0 * cd(al[3], -be[3]) * x1 * y2 - 2.0 * cd(al[3], be[3]) * x2 * y1;
  return k.norm * std::exp(-gamma / k.a);
}

}  // namespace osc3
