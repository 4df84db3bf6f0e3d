#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "magreg/core_model.hpp"
#include "magreg/trig_poly.hpp"

namespace magreg {

/// One closed turn γ: [0, 2π] → ℝ³ of the coil.
class LoopCurve {
 public:
  using Fn = std::function<Eigen::Vector3d(double)>;

  /// Exact trigonometric-polynomial loop (one polynomial per component).
  static LoopCurve trigonometric(std::array<TrigPoly, 3> components);
  /// Uniform samples over [0, 2π); a trailing sample at θ = 2π is checked for
  /// closure and dropped. The loop is the trigonometric interpolant.
  static LoopCurve from_samples(std::span<const Eigen::Vector3d> samples, bool includes_endpoint);
  /// Arbitrary parametrisation with its derivative; closure |γ(0) − γ(2π)| is
  /// verified against 1e−10 (NotClosed).
  static LoopCurve from_function(Fn position, Fn derivative);

  Eigen::Vector3d operator()(double theta) const;
  Eigen::Vector3d derivative(double theta) const;
  double closure_residual() const;
  /// Largest |γ(θ)| on a 512-point grid.
  double max_radius() const;

 private:
  Fn position_;
  Fn derivative_;
};

/// γ(θ) = (sin β cos θ, cos β cos θ, sin θ); BetaOutOfRange unless β ∈ [0, π/2).
LoopCurve tilted_circle(double beta);
/// Unit circle in the (y₁, y₂)-plane centred on the axis.
LoopCurve axial_circle(double radius = 1.0);

/// Unit normal of the tilted loop plane, (cos β, −sin β, 0).
Eigen::Vector3d tilted_circle_normal(double beta);

struct LoopCoefficients {
  Eigen::Matrix3d c = Eigen::Matrix3d::Zero();  // c_ij = ∫ γ_i γ_j′ dθ, antisymmetric

  double c12() const { return c(0, 1); }
  double c13() const { return c(0, 2); }
  double c23() const { return c(1, 2); }
  /// (c₂₃, c₃₁, c₁₂) = ½∮ γ ∧ γ′
  Eigen::Vector3d area_vector() const { return {c(1, 2), c(2, 0), c(0, 1)}; }
  Eigen::Vector3d dipole(double current) const { return current * area_vector(); }
};

/// Symmetrised trapezoid rule ½Σ(γ_iγ_j′ − γ_i′γ_j)Δθ, antisymmetric by construction.
LoopCoefficients loop_coefficients(const LoopCurve& loop, int quadrature_points = 512);

/// J(x) along the axis.
class CurrentProfile {
 public:
  static CurrentProfile constant(double j);
  /// (Σ p_k x^k)·exp(−x²/(2w²))
  static CurrentProfile windowed_polynomial(std::vector<double> poly, double width);
  /// Piecewise-linear through (x_i, J_i), constant beyond the ends.
  static CurrentProfile samples(std::vector<double> xs, std::vector<double> js);
  /// Plain polynomial; grows unless it is a constant.
  static CurrentProfile polynomial(std::vector<double> poly);

  double operator()(double x) const;
  bool is_constant() const { return kind_ == Kind::Constant; }
  /// False for profiles that grow along the axis.
  bool bounded() const;

 private:
  enum class Kind { Constant, WindowedPolynomial, Samples, Polynomial };
  Kind kind_ = Kind::Constant;
  double value_ = 0;
  double width_ = 1;
  std::vector<double> poly_;
  std::vector<double> xs_;
  std::vector<double> js_;
};

/// A(x, y) = (μ₀/2π)(J(x)/ρ²)(−c₁₂y₁ − c₁₃y₂, −c₂₃y₂, c₂₃y₁); OnAxis when ρ = 0.
Eigen::Vector3d leading_potential(const LoopCoefficients& c, const CurrentProfile& current, const Eigen::Vector3d& z,
                                  double mu0 = 1.0);
/// a(x, θ) = (μ₀J(x)/2π)(−c₁₂θ₁ − c₁₃θ₂, −c₂₃θ₂, c₂₃θ₁), so that A = a/ρ.
Eigen::Vector3d leading_angular(const LoopCoefficients& c, const CurrentProfile& current, double x,
                                const Eigen::Vector2d& theta, double mu0 = 1.0);
/// The leading term as a singular potential with d = 3, n = 2 and b ≡ 0.
SingularMagneticPotential loop_potential(const LoopCoefficients& c, const CurrentProfile& current, double mu0 = 1.0);

struct BiotSavartOptions {
  int theta_points = 512;
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  double safety = 0.05;  // OnSolenoid below safety·δ from the coil surface
};

/// Ã_δ(z) = (μ₀/4π) δ ∬ J(t) γ′(θ) / |z − (t + δγ₁, δγ₂, δγ₃)| dθ dt.
/// The θ-integral is a trapezoid sum; the axial integral uses t = x + ρτ,
/// pairs ±τ and maps τ = tan φ onto [0, π/2) for adaptive Gauss–Kronrod.
Eigen::Vector3d biot_savart_delta(const LoopCurve& loop, const CurrentProfile& current, double delta,
                                  const Eigen::Vector3d& z, double mu0 = 1.0, const BiotSavartOptions& opts = {});

/// Ideal AB regime: |c₁₂| ≤ tol and |c₁₃| ≤ tol.
bool ab_regime(const LoopCoefficients& c, double tol = 1e-10);

/// inf over samples of dist(c₂₃μ₀J/2π, ℤ).
double flux_nondegeneracy(std::span<const double> current_values, double c23, double mu0 = 1.0);

/// Normalised tilted-loop potential: constant J with μ₀ J cos β / 2 = 1/2.
SingularMagneticPotential tilted_circle_potential(double beta, double mu0 = 1.0);

}  // namespace magreg
