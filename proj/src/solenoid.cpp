#include "magreg/solenoid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "magreg/errors.hpp"
#include "magreg/quadrature.hpp"

namespace magreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kClosureTol = 1e-10;

}  // namespace

LoopCurve LoopCurve::trigonometric(std::array<TrigPoly, 3> comps) {
  for (const auto& p : comps) {
    if (!p.is_real(1e-12)) throw Error(ErrorKind::InvalidArgument, "loop components must be real");
  }
  LoopCurve c;
  c.position_ = [comps](double t) {
    return Eigen::Vector3d(comps[0](t).real(), comps[1](t).real(), comps[2](t).real());
  };
  c.derivative_ = [comps](double t) {
    return Eigen::Vector3d(comps[0].derivative(t).real(), comps[1].derivative(t).real(), comps[2].derivative(t).real());
  };
  return c;
}

LoopCurve LoopCurve::from_samples(std::span<const Eigen::Vector3d> samples, bool includes_endpoint) {
  std::size_t n = samples.size();
  if (includes_endpoint) {
    if (n < 4) throw Error(ErrorKind::InvalidArgument, "too few loop samples");
    const double gap = (samples.front() - samples.back()).norm();
    if (gap > kClosureTol) throw Error(ErrorKind::NotClosed, "endpoint gap " + std::to_string(gap));
    --n;
  }
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "too few loop samples");
  std::array<TrigPoly, 3> comps;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = samples[i](k);
    comps[static_cast<std::size_t>(k)] =
        TrigPoly::project(std::span<const double>(v), static_cast<int>((n - 1) / 2)).trimmed();
  }
  return trigonometric(std::move(comps));
}

LoopCurve LoopCurve::from_function(Fn position, Fn derivative) {
  LoopCurve c;
  c.position_ = std::move(position);
  c.derivative_ = std::move(derivative);
  const double gap = c.closure_residual();
  if (gap > kClosureTol) throw Error(ErrorKind::NotClosed, "closure residual " + std::to_string(gap));
  return c;
}

Eigen::Vector3d LoopCurve::operator()(double theta) const { return position_(theta); }
Eigen::Vector3d LoopCurve::derivative(double theta) const { return derivative_(theta); }
double LoopCurve::closure_residual() const { return (position_(0.0) - position_(kTwoPi)).norm(); }

double LoopCurve::max_radius() const {
  double r = 0;
  for (int i = 0; i < 512; ++i) r = std::max(r, position_(kTwoPi * i / 512).norm());
  return r;
}

LoopCurve tilted_circle(double beta) {
  if (!(beta >= 0.0 && beta < std::numbers::pi / 2)) {
    throw Error(ErrorKind::BetaOutOfRange, "beta must lie in [0, pi/2)");
  }
  const double sb[] = {std::sin(beta)};
  const double cb[] = {std::cos(beta)};
  const double one[] = {1.0};
  return LoopCurve::trigonometric({TrigPoly::from_real(0, sb, {}), TrigPoly::from_real(0, cb, {}),
                                   TrigPoly::from_real(0, {}, one)});
}

LoopCurve axial_circle(double radius) {
  const double r[] = {radius};
  return LoopCurve::trigonometric({TrigPoly{}, TrigPoly::from_real(0, r, {}), TrigPoly::from_real(0, {}, r)});
}

Eigen::Vector3d tilted_circle_normal(double beta) { return {std::cos(beta), -std::sin(beta), 0.0}; }

LoopCoefficients loop_coefficients(const LoopCurve& loop, int quadrature_points) {
  if (loop.closure_residual() > kClosureTol) throw Error(ErrorKind::NotClosed, "loop is not closed");
  if (quadrature_points < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 quadrature points");
  const double h = kTwoPi / quadrature_points;
  LoopCoefficients out;
  for (int q = 0; q < quadrature_points; ++q) {
    const double t = h * q;
    const Eigen::Vector3d g = loop(t);
    const Eigen::Vector3d dg = loop.derivative(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) out.c(i, j) += 0.5 * (g(i) * dg(j) - dg(i) * g(j)) * h;
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j) out.c(i, j) = -out.c(j, i);
  }
  return out;
}

CurrentProfile CurrentProfile::constant(double j) {
  CurrentProfile p;
  p.kind_ = Kind::Constant;
  p.value_ = j;
  return p;
}

CurrentProfile CurrentProfile::windowed_polynomial(std::vector<double> poly, double width) {
  if (!(width > 0)) throw Error(ErrorKind::InvalidArgument, "window width must be positive");
  CurrentProfile p;
  p.kind_ = Kind::WindowedPolynomial;
  p.poly_ = std::move(poly);
  p.width_ = width;
  return p;
}

CurrentProfile CurrentProfile::samples(std::vector<double> xs, std::vector<double> js) {
  if (xs.size() != js.size() || xs.size() < 2) throw Error(ErrorKind::InvalidArgument, "need >= 2 current samples");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorKind::InvalidArgument, "current sample abscissae must increase");
  }
  CurrentProfile p;
  p.kind_ = Kind::Samples;
  p.xs_ = std::move(xs);
  p.js_ = std::move(js);
  return p;
}

CurrentProfile CurrentProfile::polynomial(std::vector<double> poly) {
  CurrentProfile p;
  p.kind_ = Kind::Polynomial;
  p.poly_ = std::move(poly);
  return p;
}

double CurrentProfile::operator()(double x) const {
  auto horner = [&] {
    double acc = 0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::WindowedPolynomial: return horner() * std::exp(-x * x / (2 * width_ * width_));
    case Kind::Polynomial: return horner();
    case Kind::Samples: {
      if (x <= xs_.front()) return js_.front();
      if (x >= xs_.back()) return js_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      const auto i = static_cast<std::size_t>(it - xs_.begin());
      const double s = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return (1 - s) * js_[i - 1] + s * js_[i];
    }
  }
  return 0;
}

bool CurrentProfile::bounded() const {
  if (kind_ != Kind::Polynomial) return true;
  for (std::size_t k = 1; k < poly_.size(); ++k) {
    if (poly_[k] != 0.0) return false;
  }
  return true;
}

Eigen::Vector3d leading_angular(const LoopCoefficients& c, const CurrentProfile& current, double x,
                                const Eigen::Vector2d& theta, double mu0) {
  const double s = mu0 * current(x) / (2.0 * std::numbers::pi);
  return s * Eigen::Vector3d(-c.c12() * theta(0) - c.c13() * theta(1), -c.c23() * theta(1), c.c23() * theta(0));
}

Eigen::Vector3d leading_potential(const LoopCoefficients& c, const CurrentProfile& current, const Eigen::Vector3d& z,
                                  double mu0) {
  const double rho = std::hypot(z(1), z(2));
  if (rho == 0.0) throw Error(ErrorKind::OnAxis, "rho = 0");
  return leading_angular(c, current, z(0), Eigen::Vector2d(z(1), z(2)) / rho, mu0) / rho;
}

SingularMagneticPotential loop_potential(const LoopCoefficients& c, const CurrentProfile& current, double mu0) {
  SingularMagneticPotential pot;
  pot.geometry = ProblemGeometry::make(3, 2);
  pot.mu0 = mu0;
  pot.a = [c, current, mu0](const VectorXd& x, const VectorXd& theta) -> VectorXd {
    return leading_angular(c, current, x(0), Eigen::Vector2d(theta(0), theta(1)), mu0);
  };
  return pot;
}

Eigen::Vector3d biot_savart_delta(const LoopCurve& loop, const CurrentProfile& current, double delta,
                                  const Eigen::Vector3d& z, double mu0, const BiotSavartOptions& opts) {
  if (!(delta > 0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  if (!current.bounded()) throw Error(ErrorKind::TailNotIntegrable, "current grows along the axis");
  const int n = opts.theta_points;
  const double h = kTwoPi / n;
  std::vector<Eigen::Vector3d> q(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector3d> dq(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    q[static_cast<std::size_t>(i)] = loop(h * i);
    dq[static_cast<std::size_t>(i)] = loop.derivative(h * i);
  }

  const Eigen::Vector2d y(z(1), z(2));
  const double rho = y.norm();
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& p : q) clearance = std::min(clearance, (y - delta * Eigen::Vector2d(p(1), p(2))).norm());
  if (clearance < opts.safety * delta) throw Error(ErrorKind::OnSolenoid, "point lies on the coil surface");
  if (rho == 0.0) throw Error(ErrorKind::OnAxis, "rho = 0");

  // θ-integral of γ′(θ)[1/|w − δγ| − 1/|w|]; the subtracted term integrates
  // to zero over a closed loop and removes the 1/|t| monopole tail.
  auto ring = [&](double t) {
    const Eigen::Vector3d w(z(0) - t, z(1), z(2));
    const double b2 = w.squaredNorm();
    const double b = std::sqrt(b2);
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int i = 0; i < n; ++i) {
      const auto& p = q[static_cast<std::size_t>(i)];
      const double a = (w - delta * p).norm();
      const double diff = (2.0 * delta * w.dot(p) - delta * delta * p.squaredNorm()) / (a * b * (a + b));
      acc += dq[static_cast<std::size_t>(i)] * diff;
    }
    return Eigen::Vector3d(acc * h);
  };
  auto integrand = [&](double phi) -> Eigen::Vector3d {
    const double tau = std::tan(phi);
    const double jac = rho / (std::cos(phi) * std::cos(phi));
    const double t_plus = z(0) + rho * tau;
    const double t_minus = z(0) - rho * tau;
    return (current(t_plus) * ring(t_plus) + current(t_minus) * ring(t_minus)) * jac;
  };
  const auto res = integrate_adaptive<Eigen::Vector3d>(integrand, 0.0, std::numbers::pi / 2, opts.abs_tol, opts.rel_tol);
  return mu0 / (4.0 * std::numbers::pi) * delta * res.value;
}

bool ab_regime(const LoopCoefficients& c, double tol) { return std::abs(c.c12()) <= tol && std::abs(c.c13()) <= tol; }

double flux_nondegeneracy(std::span<const double> current_values, double c23, double mu0) {
  double worst = std::numeric_limits<double>::infinity();
  for (double j : current_values) {
    const double v = c23 * mu0 * j / (2.0 * std::numbers::pi);
    worst = std::min(worst, std::abs(v - std::round(v)));
  }
  return worst;
}

SingularMagneticPotential tilted_circle_potential(double beta, double mu0) {
  const auto c = loop_coefficients(tilted_circle(beta));
  return loop_potential(c, CurrentProfile::constant(1.0 / (mu0 * std::cos(beta))), mu0);
}

}  // namespace magreg
