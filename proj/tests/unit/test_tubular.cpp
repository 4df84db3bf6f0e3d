#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "expect_error.hpp"
#include "magreg/solenoid.hpp"
#include "magreg/tubular.hpp"

using namespace magreg;
using std::numbers::pi;

namespace {

struct HelixFrame {
  Eigen::Vector3d t, n, b;
};

HelixFrame helix_oracle(double r, double b, double s) {
  const double c = std::hypot(r, b);
  const double u = s / c;
  return {{-r / c * std::sin(u), r / c * std::cos(u), b / c},
          {-std::cos(u), -std::sin(u), 0},
          {b / c * std::sin(u), -b / c * std::cos(u), r / c}};
}

std::vector<double> random_points(const SpaceCurve& c, int count, unsigned seed) {
  std::mt19937 rng(seed);
  // keep clear of the ends where one-sided stencils would be needed
  const double pad = 0.02 * (c.hi() - c.lo());
  std::uniform_real_distribution<double> ud(c.lo() + pad, c.hi() - pad);
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (auto& x : xs) x = ud(rng);
  return xs;
}

std::vector<SpaceCurve> presets() {
  return {SpaceCurve::helix(1.0, 0.5), SpaceCurve::circle(2.0), SpaceCurve::perturbed_helix(1.0, 0.3, 0.1)};
}

SpaceCurve straight_line() {
  return SpaceCurve::analytic([](double s) { return Eigen::Vector3d(s, 0, 0); },
                              [](double) { return Eigen::Vector3d(1, 0, 0); },
                              [](double) { return Eigen::Vector3d::Zero().eval(); },
                              [](double) { return Eigen::Vector3d::Zero().eval(); }, 0, 1);
}

}  // namespace

TEST_CASE("helix frame matches the closed form") {
  const double r = 1.0, b = 0.5, c = std::hypot(r, b);
  const auto helix = SpaceCurve::helix(r, b);
  for (double s : {0.0, 0.7, 3.1, 6.0}) {
    const auto f = frenet_frame(helix, s);
    const auto o = helix_oracle(r, b, s);
    CHECK((f.t - o.t).norm() < 1e-14);
    CHECK((f.n - o.n).norm() < 1e-14);
    CHECK((f.b - o.b).norm() < 1e-14);
    CHECK(f.curvature == doctest::Approx(r / (c * c)).epsilon(1e-14));
    CHECK(f.torsion == doctest::Approx(b / (c * c)).epsilon(1e-13));
  }
}

TEST_CASE("planar circle: N points to the centre, B is constant") {
  const auto circle = SpaceCurve::circle(2.0);
  for (double s : {0.0, 1.0, 5.0, 11.0}) {
    const auto f = frenet_frame(circle, s);
    CHECK((f.n + circle(s) / 2.0).norm() < 1e-14);
    CHECK((f.b - Eigen::Vector3d(0, 0, 1)).norm() < 1e-14);
    CHECK(f.curvature == doctest::Approx(0.5));
    CHECK(std::abs(f.torsion) < 1e-14);
  }
}

TEST_CASE("straight segments have no Frenet frame") {
  const auto line = straight_line();
  EXPECT_ERROR_KIND(frenet_frame(line, 0.5), ErrorKind::VanishingCurvature);
  EXPECT_ERROR_KIND(TubularMap{line}, ErrorKind::VanishingCurvature);
}

TEST_CASE("frames are orthonormal and right-handed on every preset") {
  for (const auto& curve : presets()) {
    for (double x : random_points(curve, 100, 3)) CHECK(frenet_frame(curve, x).orthonormality_defect() < 1e-10);
  }
}

TEST_CASE("Frenet-Serret: T' = kappa N") {
  const auto helix = SpaceCurve::helix(1.0, 0.5);
  const double x = 2.0;
  double prev = 1;
  for (double h : {1e-2, 5e-3}) {
    const Eigen::Vector3d dt = (frenet_frame(helix, x + h).t - frenet_frame(helix, x - h).t) / (2 * h);
    const auto f = frenet_frame(helix, x);
    const double err = (dt - f.curvature * f.n).norm();
    CHECK(err < 1e-4);
    if (h < 1e-2) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.01));
    prev = err;
  }
}

TEST_CASE("sampled curve reproduces the analytic helix") {
  const double r = 1.0, b = 0.5;
  const auto helix = SpaceCurve::helix(r, b);
  std::vector<double> xs;
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i <= 2000; ++i) {
    const double s = helix.lo() + (helix.hi() - helix.lo()) * i / 2000;
    xs.push_back(s);
    pts.push_back(helix(s));
  }
  const auto sampled = SpaceCurve::from_samples(xs, pts);
  for (double s : {1.0, 3.0, 5.5}) {
    const auto f = frenet_frame(sampled, s);
    const auto o = helix_oracle(r, b, s);
    CHECK((f.t - o.t).norm() < 1e-8);
    CHECK((f.n - o.n).norm() < 1e-6);
    CHECK(f.torsion == doctest::Approx(b / (r * r + b * b)).epsilon(1e-4));
  }
}

TEST_CASE("arc-length parametrisation is verified") {
  const auto p = SpaceCurve::perturbed_helix(1.0, 0.3, 0.1);
  CHECK(p.speed_defect() <= 1e-8);
  EXPECT_ERROR_KIND(SpaceCurve::analytic([](double s) { return Eigen::Vector3d(2 * s, 0, 0); },
                                         [](double) { return Eigen::Vector3d(2, 0, 0); },
                                         [](double) { return Eigen::Vector3d::Zero().eval(); },
                                         [](double) { return Eigen::Vector3d::Zero().eval(); }, 0, 1),
                    ErrorKind::NotArcLength);

  // the resampled length equals the length of the unit-speed circle
  const auto arc = SpaceCurve::resample_arc_length([](double t) { return Eigen::Vector3d(3 * std::cos(t), 3 * std::sin(t), 0); },
                                                   [](double t) { return Eigen::Vector3d(-3 * std::sin(t), 3 * std::cos(t), 0); },
                                                   0, pi, 1001);
  CHECK(arc.hi() - arc.lo() == doctest::Approx(3 * pi).epsilon(1e-12));
  CHECK(arc.speed_defect() <= 1e-8);
}

TEST_CASE("tubular map on the axis") {
  for (const auto& curve : presets()) {
    const TubularMap map(curve);
    CHECK(map.r0() == doctest::Approx(0.5 / curve.max_curvature()));
    for (double x : random_points(curve, 20, 11)) {
      CHECK(map(Eigen::Vector3d(x, 0, 0)) == curve(x));
      const auto f = frenet_frame(curve, x);
      const auto m = effective_metric(map, Eigen::Vector3d(x, 0, 0));
      CHECK((m.jacobian - f.matrix()).norm() < 1e-14);
      CHECK(m.det == doctest::Approx(1.0).epsilon(1e-10));
      CHECK((m.n_eff - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("Jacobian is the derivative of the tubular map") {
  const TubularMap map(SpaceCurve::helix(1.0, 0.5));
  const Eigen::Vector3d z(1.3, 0.12, -0.2);
  const Eigen::Matrix3d jac = map.jacobian(z);
  const double h = 1e-5;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3d e = Eigen::Vector3d::Unit(k) * h;
    const Eigen::Vector3d col = (map(z + e) - map(z - e)) / (2 * h);
    CHECK((col - jac.col(k)).norm() < 1e-8);
  }
}

TEST_CASE("helix determinant is 1 - kappa y1") {
  const auto helix = SpaceCurve::helix(1.0, 0.5);
  const TubularMap map(helix);
  const double kappa = 1.0 / 1.25;
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ud(-0.6, 0.6);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d z(3 * ud(rng) + 3, ud(rng) * map.r0(), ud(rng) * map.r0());
    if (std::hypot(z(1), z(2)) >= map.r0()) continue;
    CHECK(std::abs(map.jacobian(z).determinant() - (1 - kappa * z(1))) <= 1e-8);
  }
}

TEST_CASE("effective metric inside the tube") {
  for (const auto& curve : presets()) {
    const TubularMap map(curve);
    for (double x : random_points(curve, 10, 5)) {
      for (int k = 0; k < 8; ++k) {
        const double th = 2 * pi * k / 8;
        const double rho = 0.9 * map.r0();
        const Eigen::Vector3d z(x, rho * std::cos(th), rho * std::sin(th));
        const auto m = effective_metric(map, z);
        CHECK(m.det > 0);
        CHECK((m.n_eff - m.n_eff.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m.n_eff).eigenvalues().minCoeff() > 0);
        CHECK((m.m_eff.transpose() * m.m_eff - m.n_eff).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("N_eff departs from the identity linearly in rho") {
  const TubularMap map(SpaceCurve::helix(1.0, 0.5));
  std::vector<double> lr, ld;
  for (double rho : {1e-4, 1e-3, 1e-2}) {
    const Eigen::Vector3d z(0.7, rho * std::cos(0.3), rho * std::sin(0.3));
    lr.push_back(std::log(rho));
    ld.push_back(std::log((effective_metric(map, z).n_eff - Eigen::Matrix3d::Identity()).norm()));
  }
  const double slope = (ld.back() - ld.front()) / (lr.back() - lr.front());
  CHECK(slope >= 0.95);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("tube errors") {
  const auto helix = SpaceCurve::helix(1.0, 0.0);  // unit circle, κ = 1
  const TubularMap map(helix);
  EXPECT_ERROR_KIND(map(Eigen::Vector3d(0, 0.5, 0)), ErrorKind::OutsideTube);
  EXPECT_ERROR_KIND(effective_metric(map, Eigen::Vector3d(0, 0, 0.6)), ErrorKind::OutsideTube);
  const TubularMap wide(helix, 2.0);
  EXPECT_ERROR_KIND(effective_metric(wide, Eigen::Vector3d(0.2, 1.0, 0)), ErrorKind::SingularJacobian);
  EXPECT_ERROR_KIND(TubularMap(helix, 0.0), ErrorKind::InvalidArgument);
}

TEST_CASE("curved solenoid potential") {
  const TubularMap map(SpaceCurve::helix(1.0, 0.5));
  const auto j = CurrentProfile::constant(1.0);
  const double x = 0.9, th = 1.1;
  const auto a = curved_solenoid_potential(map, j, pi, x, 1e-2, th);
  const auto half = curved_solenoid_potential(map, j, pi, x, 5e-3, th);
  CHECK((half.ambient - 2 * a.ambient).norm() < 1e-12);
  CHECK(a.flux == doctest::Approx(0.5));

  // transversality: no component along T
  CHECK(std::abs(a.frame(0)) <= 1e-10 / 1e-2);
  CHECK(std::abs(a.frame(0)) < 1e-14);
  CHECK((a.frame.tail<2>() - a.flux / 1e-2 * Eigen::Vector2d(-std::sin(th), std::cos(th))).norm() < 1e-10);

  // the exact pullback carries a bounded T-part τ·flux
  const double tau = 0.5 / 1.25;
  CHECK(a.pullback(0) == doctest::Approx(tau * a.flux).epsilon(1e-12));

  EXPECT_ERROR_KIND(curved_solenoid_potential(map, j, pi, x, 0.0, th), ErrorKind::OnAxis);
}

TEST_CASE("curved potential reduces to the straight solenoid at low curvature") {
  // κ = r/(r² + b²) = 1e−2
  const double r = 1.0, b = std::sqrt(99.0);
  const TubularMap map(SpaceCurve::helix(r, b));
  const auto j = CurrentProfile::constant(1.0);
  const auto ab = loop_coefficients(axial_circle());
  const double rho = 1e-3;
  for (double th : {0.0, 1.0, 2.5, 4.0}) {
    const auto a = curved_solenoid_potential(map, j, ab.c23(), 2.0, rho, th);
    const Eigen::Vector3d z(2.0, rho * std::cos(th), rho * std::sin(th));
    const Eigen::Vector3d straight = leading_potential(ab, j, z);
    CHECK((a.pullback - straight).norm() / straight.norm() <= 0.05);
  }
}
