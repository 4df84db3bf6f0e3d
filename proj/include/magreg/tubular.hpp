#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

#include "magreg/solenoid.hpp"

namespace magreg {

/// Arc-length parametrised space curve η on [lo, hi].
class SpaceCurve {
 public:
  using Fn = std::function<Eigen::Vector3d(double)>;

  /// η(s) = (r cos(s/c), r sin(s/c), b s/c), c = √(r² + b²); κ = r/c², τ = b/c².
  static SpaceCurve helix(double r, double b, double lo = 0.0, double hi = -1.0);
  /// Planar circle of the given radius in the (e₁, e₂)-plane.
  static SpaceCurve circle(double radius, double lo = 0.0, double hi = -1.0);
  /// ((r + amp·sin 3t) cos t, (r + amp·sin 3t) sin t, b t) for t ∈ [0, turns·2π],
  /// resampled to arc length.
  static SpaceCurve perturbed_helix(double r, double b, double amp, double turns = 1.0, int samples = 4001);
  /// Closed-form curve with its first three derivatives.
  static SpaceCurve analytic(Fn position, Fn d1, Fn d2, Fn d3, double lo, double hi);
  /// Sample table (x_i, η(x_i)); positions by 7-point local Lagrange
  /// interpolation, derivatives by 6th-order central differences.
  static SpaceCurve from_samples(std::vector<double> xs, std::vector<Eigen::Vector3d> points);
  /// Cumulative arc length of an arbitrary parametrisation t ↦ p(t) with speed
  /// |p′|, resampled at `samples` equally spaced arc-length values.
  static SpaceCurve resample_arc_length(const Fn& p, const Fn& dp, double t_lo, double t_hi, int samples);

  Eigen::Vector3d operator()(double x) const { return pos_(x); }
  Eigen::Vector3d d1(double x) const { return d1_(x); }
  Eigen::Vector3d d2(double x) const { return d2_(x); }
  Eigen::Vector3d d3(double x) const { return d3_(x); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double curvature(double x) const;
  double torsion(double x) const;
  double max_curvature(int probes = 1001) const;

  /// Largest ||η′| − 1| over `probes` points of the range.
  double speed_defect(int probes = 1001) const;

 private:
  Fn pos_, d1_, d2_, d3_;
  double lo_ = 0, hi_ = 1;
  void require_arc_length() const;
};

struct FrenetFrame {
  Eigen::Vector3d t, n, b;
  double curvature = 0;
  double torsion = 0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m;
    m << t, n, b;
    return m;
  }
  /// max |[T N B]ᵀ[T N B] − Id| and |det − 1|
  double orthonormality_defect() const;
};

/// Throws VanishingCurvature when κ(x) ≤ kappa_min.
FrenetFrame frenet_frame(const SpaceCurve& curve, double x, double kappa_min = 1e-12);

/// Φ(x, y₁, y₂) = η(x) + y₁N(x) + y₂B(x), valid for ρ < r₀ = (2κ_max)⁻¹.
class TubularMap {
 public:
  explicit TubularMap(SpaceCurve curve);
  TubularMap(SpaceCurve curve, double r0);

  const SpaceCurve& curve() const { return curve_; }
  double r0() const { return r0_; }

  /// OutsideTube when ρ ≥ r₀.
  Eigen::Vector3d operator()(const Eigen::Vector3d& z) const;
  /// Columns (η′ + y₁N′ + y₂B′, N, B) = ((1 − κy₁)T − τy₂N + τy₁B, N, B).
  Eigen::Matrix3d jacobian(const Eigen::Vector3d& z) const;
  /// cos ϑ N + sin ϑ B
  Eigen::Vector3d u(double theta, double x) const;

 private:
  SpaceCurve curve_;
  double r0_;
  void require_inside(const Eigen::Vector3d& z) const;
};

struct EffectiveMetric {
  Eigen::Matrix3d jacobian;
  Eigen::Matrix3d jacobian_inverse;
  Eigen::Matrix3d n_eff;  // det(DΦ⁻¹)(DΦ⁻¹)ᵀDΦ⁻¹
  Eigen::Matrix3d m_eff;  // DΦ⁻¹√(det DΦ⁻¹)
  double det = 0;         // det DΦ
};

/// Throws OutsideTube or SingularJacobian.
EffectiveMetric effective_metric(const TubularMap& map, const Eigen::Vector3d& z);

struct CurvedPotential {
  Eigen::Vector3d ambient;   // (μ₀c_γJ/2πρ)(−sin ϑ N + cos ϑ B)
  Eigen::Vector3d frame;     // [T N B]ᵀ·ambient
  Eigen::Vector3d pullback;  // DΦᵀ·ambient
  double flux = 0;           // μ₀c_γJ/2π
};

/// Leading singular potential of a solenoid wound around η, at tubular-polar
/// (x, ρ, ϑ). Throws OnAxis for ρ = 0 and OutsideTube for ρ ≥ r₀.
CurvedPotential curved_solenoid_potential(const TubularMap& map, const CurrentProfile& current, double c_gamma,
                                          double x, double rho, double theta, double mu0 = 1.0);

}  // namespace magreg
