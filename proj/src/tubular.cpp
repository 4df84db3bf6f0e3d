#include "magreg/tubular.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "magreg/errors.hpp"
#include "magreg/quadrature.hpp"

namespace magreg {

namespace {

constexpr double kArcLengthTol = 1e-8;

// 6th-order central stencils.
constexpr double kD1[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD2[] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
constexpr double kD3[] = {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0, -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};

template <std::size_t N>
Eigen::Vector3d stencil(const SpaceCurve::Fn& f, double x, double h, const double (&w)[N], int order) {
  constexpr int half = static_cast<int>(N / 2);
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (int k = -half; k <= half; ++k) {
    const double c = w[k + half];
    if (c != 0.0) acc += c * f(x + k * h);
  }
  return acc / std::pow(h, order);
}

SpaceCurve::Fn helix_derivative(double r, double b, int order) {
  const double c = std::hypot(r, b);
  return [r, b, c, order](double s) -> Eigen::Vector3d {
    const double t = s / c;
    const double ct = std::cos(t), st = std::sin(t);
    switch (order) {
      case 0: return {r * ct, r * st, b * t};
      case 1: return Eigen::Vector3d(-r * st, r * ct, b) / c;
      case 2: return Eigen::Vector3d(-r * ct, -r * st, 0) / (c * c);
      default: return Eigen::Vector3d(r * st, -r * ct, 0) / (c * c * c);
    }
  };
}

}  // namespace

void SpaceCurve::require_arc_length() const {
  double lo_speed = 1e300, hi_speed = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = d1_(lo_ + (hi_ - lo_) * i / 1000).norm();
    lo_speed = std::min(lo_speed, v);
    hi_speed = std::max(hi_speed, v);
  }
  if (std::abs(lo_speed - 1) > kArcLengthTol || std::abs(hi_speed - 1) > kArcLengthTol) {
    throw Error(ErrorKind::NotArcLength,
                "|eta'| ranges over [" + std::to_string(lo_speed) + ", " + std::to_string(hi_speed) + "]");
  }
}

SpaceCurve SpaceCurve::helix(double r, double b, double lo, double hi) {
  if (!(r > 0) || b < 0) throw Error(ErrorKind::InvalidArgument, "helix needs r > 0 and b >= 0");
  const double c = std::hypot(r, b);
  if (hi <= lo) hi = lo + 2 * std::numbers::pi * c;
  return analytic(helix_derivative(r, b, 0), helix_derivative(r, b, 1), helix_derivative(r, b, 2),
                  helix_derivative(r, b, 3), lo, hi);
}

SpaceCurve SpaceCurve::circle(double radius, double lo, double hi) {
  if (!(radius > 0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  return helix(radius, 0.0, lo, hi);
}

SpaceCurve SpaceCurve::perturbed_helix(double r, double b, double amp, double turns, int samples) {
  if (!(r > std::abs(amp))) throw Error(ErrorKind::InvalidArgument, "perturbation must be smaller than r");
  auto p = [=](double t) -> Eigen::Vector3d {
    const double rr = r + amp * std::sin(3 * t);
    return {rr * std::cos(t), rr * std::sin(t), b * t};
  };
  auto dp = [=](double t) -> Eigen::Vector3d {
    const double rr = r + amp * std::sin(3 * t);
    const double dr = 3 * amp * std::cos(3 * t);
    return {dr * std::cos(t) - rr * std::sin(t), dr * std::sin(t) + rr * std::cos(t), b};
  };
  return resample_arc_length(p, dp, 0.0, turns * 2 * std::numbers::pi, samples);
}

SpaceCurve SpaceCurve::analytic(Fn position, Fn d1, Fn d2, Fn d3, double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "empty curve range");
  SpaceCurve c;
  c.pos_ = std::move(position);
  c.d1_ = std::move(d1);
  c.d2_ = std::move(d2);
  c.d3_ = std::move(d3);
  c.lo_ = lo;
  c.hi_ = hi;
  c.require_arc_length();
  return c;
}

SpaceCurve SpaceCurve::from_samples(std::vector<double> xs, std::vector<Eigen::Vector3d> points) {
  if (xs.size() != points.size() || xs.size() < 7) {
    throw Error(ErrorKind::InvalidArgument, "need at least 7 matching curve samples");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorKind::InvalidArgument, "curve abscissae must increase");
  }
  SpaceCurve c;
  c.lo_ = xs.front();
  c.hi_ = xs.back();
  c.pos_ = [xs = std::move(xs), pts = std::move(points)](double x) -> Eigen::Vector3d {
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    const auto at = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
    const auto start = std::clamp<std::ptrdiff_t>(at - 4, 0, n - 7);
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (auto i = start; i < start + 7; ++i) {
      double w = 1;
      for (auto j = start; j < start + 7; ++j) {
        if (j != i) w *= (x - xs[static_cast<std::size_t>(j)]) / (xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)]);
      }
      acc += w * pts[static_cast<std::size_t>(i)];
    }
    return acc;
  };
  const double h = (c.hi_ - c.lo_) / 1e4;
  c.d1_ = [p = c.pos_, h](double x) { return stencil(p, x, h, kD1, 1); };
  c.d2_ = [p = c.pos_, h](double x) { return stencil(p, x, h, kD2, 2); };
  c.d3_ = [p = c.pos_, h](double x) { return stencil(p, x, h, kD3, 3); };
  c.require_arc_length();
  return c;
}

SpaceCurve SpaceCurve::resample_arc_length(const Fn& p, const Fn& dp, double t_lo, double t_hi, int samples) {
  if (samples < 7 || !(t_hi > t_lo)) throw Error(ErrorKind::InvalidArgument, "bad resampling request");
  const auto rule = gauss_legendre(16);
  auto arc = [&](double a, double b) {
    double s = 0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      s += rule.weights[k] * dp(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k]).norm();
    }
    return 0.5 * (b - a) * s;
  };
  const int panels = samples - 1;
  const double dt = (t_hi - t_lo) / panels;
  std::vector<double> cum(static_cast<std::size_t>(panels) + 1, 0.0);
  for (int i = 0; i < panels; ++i) {
    cum[static_cast<std::size_t>(i) + 1] = cum[static_cast<std::size_t>(i)] + arc(t_lo + i * dt, t_lo + (i + 1) * dt);
  }
  const double total = cum.back();
  std::vector<double> xs(static_cast<std::size_t>(samples));
  std::vector<Eigen::Vector3d> pts(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double s = total * k / panels;
    auto i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), s) - cum.begin());
    i = std::clamp<std::size_t>(i, 1, static_cast<std::size_t>(panels)) - 1;
    const double a = t_lo + static_cast<double>(i) * dt;
    double t = a + dt * (s - cum[i]) / (cum[i + 1] - cum[i]);
    for (int it = 0; it < 50; ++it) {
      const double step = (cum[i] + arc(a, t) - s) / dp(t).norm();
      t -= step;
      if (std::abs(step) < 1e-15 * (1 + std::abs(t))) break;
    }
    xs[static_cast<std::size_t>(k)] = s;
    pts[static_cast<std::size_t>(k)] = p(t);
  }
  return from_samples(std::move(xs), std::move(pts));
}

double SpaceCurve::curvature(double x) const {
  const Eigen::Vector3d v = d1(x);
  return v.cross(d2(x)).norm() / std::pow(v.norm(), 3);
}

double SpaceCurve::torsion(double x) const {
  const Eigen::Vector3d w = d1(x).cross(d2(x));
  const double w2 = w.squaredNorm();
  return w2 == 0.0 ? 0.0 : w.dot(d3(x)) / w2;
}

double SpaceCurve::max_curvature(int probes) const {
  double k = 0;
  for (int i = 0; i < probes; ++i) k = std::max(k, curvature(lo_ + (hi_ - lo_) * i / std::max(1, probes - 1)));
  return k;
}

double SpaceCurve::speed_defect(int probes) const {
  double d = 0;
  for (int i = 0; i < probes; ++i) {
    d = std::max(d, std::abs(d1(lo_ + (hi_ - lo_) * i / std::max(1, probes - 1)).norm() - 1));
  }
  return d;
}

double FrenetFrame::orthonormality_defect() const {
  const Eigen::Matrix3d m = matrix();
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(m.determinant() - 1));
}

FrenetFrame frenet_frame(const SpaceCurve& curve, double x, double kappa_min) {
  FrenetFrame f;
  f.curvature = curve.curvature(x);
  if (!(f.curvature > kappa_min)) {
    throw Error(ErrorKind::VanishingCurvature, "kappa = " + std::to_string(f.curvature) + " at x = " + std::to_string(x));
  }
  f.t = curve.d1(x).normalized();
  const Eigen::Vector3d a = curve.d2(x);
  f.n = (a - a.dot(f.t) * f.t).normalized();
  f.b = f.t.cross(f.n);
  f.torsion = curve.torsion(x);
  return f;
}

TubularMap::TubularMap(SpaceCurve curve) : curve_(std::move(curve)) {
  const double k = curve_.max_curvature();
  if (!(k > 0)) throw Error(ErrorKind::VanishingCurvature, "curve has no curvature");
  r0_ = 0.5 / k;
}

TubularMap::TubularMap(SpaceCurve curve, double r0) : curve_(std::move(curve)), r0_(r0) {
  if (!(r0 > 0)) throw Error(ErrorKind::InvalidArgument, "tube radius must be positive");
}

void TubularMap::require_inside(const Eigen::Vector3d& z) const {
  const double rho = std::hypot(z(1), z(2));
  if (!(rho < r0_)) {
    throw Error(ErrorKind::OutsideTube, "rho = " + std::to_string(rho) + " >= r0 = " + std::to_string(r0_));
  }
}

Eigen::Vector3d TubularMap::operator()(const Eigen::Vector3d& z) const {
  require_inside(z);
  if (z(1) == 0.0 && z(2) == 0.0) return curve_(z(0));
  const auto f = frenet_frame(curve_, z(0));
  return curve_(z(0)) + z(1) * f.n + z(2) * f.b;
}

Eigen::Matrix3d TubularMap::jacobian(const Eigen::Vector3d& z) const {
  require_inside(z);
  const auto f = frenet_frame(curve_, z(0));
  Eigen::Matrix3d m;
  m << (1 - f.curvature * z(1)) * f.t - f.torsion * z(2) * f.n + f.torsion * z(1) * f.b, f.n, f.b;
  return m;
}

Eigen::Vector3d TubularMap::u(double theta, double x) const {
  const auto f = frenet_frame(curve_, x);
  return std::cos(theta) * f.n + std::sin(theta) * f.b;
}

EffectiveMetric effective_metric(const TubularMap& map, const Eigen::Vector3d& z) {
  EffectiveMetric out;
  out.jacobian = map.jacobian(z);
  out.det = out.jacobian.determinant();
  if (!(out.det > 1e-14)) throw Error(ErrorKind::SingularJacobian, "det DPhi = " + std::to_string(out.det));
  out.jacobian_inverse = out.jacobian.inverse();
  const double det_inv = 1.0 / out.det;
  out.n_eff = det_inv * out.jacobian_inverse.transpose() * out.jacobian_inverse;
  out.m_eff = out.jacobian_inverse * std::sqrt(det_inv);
  return out;
}

CurvedPotential curved_solenoid_potential(const TubularMap& map, const CurrentProfile& current, double c_gamma,
                                          double x, double rho, double theta, double mu0) {
  if (rho == 0.0) throw Error(ErrorKind::OnAxis, "rho = 0");
  const Eigen::Vector3d z(x, rho * std::cos(theta), rho * std::sin(theta));
  const Eigen::Matrix3d jac = map.jacobian(z);
  const auto f = frenet_frame(map.curve(), x);
  CurvedPotential out;
  out.flux = mu0 * c_gamma * current(x) / (2 * std::numbers::pi);
  out.ambient = out.flux / rho * (-std::sin(theta) * f.n + std::cos(theta) * f.b);
  out.frame = f.matrix().transpose() * out.ambient;
  out.pullback = jac.transpose() * out.ambient;
  return out;
}

}  // namespace magreg
