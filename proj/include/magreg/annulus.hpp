#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "magreg/circle_spectrum.hpp"
#include "magreg/trig_poly.hpp"

namespace magreg {

/// Dirichlet problem for (i∇ + A)² on {ε < r < R} ⊂ ℝ², u = 0 on r = ε and
/// u = g on r = R.
struct AnnulusProblem {
  AngularPotential1D pot;
  double epsilon = 0;
  double R = 1;
  TrigPoly boundary;

  /// Throws InsufficientRange unless 0 ≤ ε < R.
  static AnnulusProblem make(AngularPotential1D pot, double epsilon, double R, TrigPoly boundary);
};

/// f(r) = c⁺r^{γ⁺} + c⁻r^{γ⁻}, stored and evaluated as c⁺r^{γ⁺}(1 − (ε/r)^{γ⁺−γ⁻}).
struct ModeSolution {
  int index = 0;
  double mu = 0;
  double gamma_plus = 0;
  double gamma_minus = 0;
  double epsilon = 0;
  Complex g{};
  Complex c_plus{};
  Complex c_minus{};  // −c⁺ε^{γ⁺−γ⁻}, may underflow to zero

  Complex profile(double r) const;
  Complex derivative(double r) const;
};

/// g_k = ⟨g, ψ_k⟩_{L²(S¹)}. Throws BasisIncomplete when the Parseval defect
/// |‖g‖² − Σ|g_k|²| exceeds tol·max(1, ‖g‖²).
std::vector<Complex> expand_boundary(const TrigPoly& g, const SpectralResult& basis, double tol = 1e-10);

/// Throws DegenerateMode when some μ_k < 1e−8.
std::vector<ModeSolution> solve_modes(const AnnulusProblem& prob, const SpectralResult& basis);

class AnnulusSolution {
 public:
  AnnulusSolution(AnnulusProblem prob, SpectralResult basis);
  /// Builds the full eigenbasis at truncation max(K, deg g, deg pot).
  static AnnulusSolution solve(const AnnulusProblem& prob, int truncation = 16);

  const AnnulusProblem& problem() const { return prob_; }
  const SpectralResult& basis() const { return basis_; }
  const std::vector<ModeSolution>& modes() const { return modes_; }
  double gamma1() const { return std::sqrt(basis_.eigenvalues(0)); }

  Complex operator()(double r, double theta) const;
  Complex radial_derivative(double r, double theta) const;
  /// max over an n-point uniform θ grid of |u(r, ·)|
  double sup_abs(double r, int n_theta = 256) const;
  /// max over an n-point uniform θ grid of |∂_r u(r, ·)|
  double sup_abs_derivative(double r, int n_theta = 256) const;
  /// Fourier coefficients (row j + K) of u(r, ·) or ∂_r u(r, ·).
  Eigen::VectorXcd fourier(double r, bool derivative = false) const;

 private:
  AnnulusProblem prob_;
  SpectralResult basis_;
  std::vector<ModeSolution> modes_;
};

/// Least-squares slope of log sup_θ|u| against log r at `samples` geometric
/// points of [r_lo, r_hi]. Throws InsufficientRange.
double decay_fit(const AnnulusSolution& sol, double r_lo, double r_hi, int samples = 32);
/// Window [max(2ε, 1e−4R), 0.1R].
double decay_fit(const AnnulusSolution& sol);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log max_θ|∂_r u_ε(ε, θ)| against log ε.
double gradient_boundary_scaling(const AngularPotential1D& pot, const TrigPoly& g, std::span<const double> eps_list,
                                 double R, int truncation = 16);

/// ‖u_a − u_b‖ in L²(B_R) with each solution extended by zero inside its hole.
/// Both must share the potential, R, boundary data and basis.
double l2_difference(const AnnulusSolution& a, const AnnulusSolution& b);

struct ConvergenceRow {
  double epsilon = 0;
  double l2_diff = 0;
  double boundary_gradient = 0;  // max_θ|∂_r u_ε(ε, θ)|
};

std::vector<ConvergenceRow> convergence_table(const AngularPotential1D& pot, const TrigPoly& g,
                                              std::span<const double> eps_list, double R, int truncation = 16);

/// φ(r, θ) = Σ_j q_j(r)e^{ijθ} on the disk of radius R; q_j are complex
/// polynomials in r (ascending coefficients) vanishing at r = 0 and r = R.
struct HardyTestFunction {
  double R = 1;
  int max_mode = 0;                       // modes j = −max_mode..max_mode
  std::vector<std::vector<Complex>> radial;  // radial[j + max_mode]

  /// Throws NotCompactlySupported if some q_j(0) or q_j(R) is nonzero.
  void validate(double tol = 1e-12) const;
  Complex operator()(double r, double theta) const;
};

/// r(R − r)·p_j(r)e^{ijθ} with standard-normal complex coefficients.
HardyTestFunction random_hardy_test_function(double R, std::mt19937_64& rng, int max_mode = 3, int max_degree = 3);

struct HardyCheck {
  double lhs = 0;  // c∫|φ|²/r²
  double rhs = 0;  // ∫|i∇φ + Aφ|²
  bool violated(double rel_tol = 1e-10) const { return lhs - rhs > rel_tol * std::max(std::abs(rhs), 1e-300); }
};

/// Radial Gauss–Legendre with `radial_points` nodes, exact angular Parseval.
HardyCheck hardy_residual(const AngularPotential1D& pot, const HardyTestFunction& phi, double c, int radial_points = 64);

struct HardySuite {
  int trials = 0;
  int violations = 0;
  double min_margin = 0;  // min (rhs − lhs)/rhs
};

HardySuite hardy_suite(const AngularPotential1D& pot, double c, std::uint64_t seed, int trials = 100, double R = 1.0);

/// max over r of |r²(−f″) − r f′ + μf| / max|f| with 5-point differences of
/// step 1e−3·r.
double ode_residual(const ModeSolution& mode, double mu, std::span<const double> r_grid);

}  // namespace magreg
