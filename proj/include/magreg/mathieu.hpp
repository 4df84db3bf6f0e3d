#pragma once

#include <span>
#include <vector>

#include "magreg/circle_spectrum.hpp"

namespace magreg {

/// Tilted-loop family: g(β) = tan²β/8, Mathieu parameter q = g/2, with the
/// current normalised so that μ₀ J cos β / 2 = 1/2 (flux 1/2).
struct TiltModel {
  double beta = 0;
  double g = 0;
  double q = 0;

  /// Throws BetaOutOfRange unless β ∈ [0, π/2).
  static TiltModel from_beta(double beta);

  double current(double mu0 = 1.0) const;
  /// α ≡ 1/2, h(θ) = g(1 − cos 2θ) = |a′|² for the normalised tilted loop.
  AngularPotential1D angular_potential() const;
};

/// Symmetric tridiagonal truncation of one antiperiodic chain
/// k ∈ {…, −7/2, −3/2, 1/2, 5/2, …}, |k| ≤ cutoff: diagonal k², off-diagonal q.
struct MathieuTridiagonal {
  std::vector<double> orders;
  std::vector<double> diag;
  std::vector<double> off;
};

MathieuTridiagonal antiperiodic_tridiagonal(double q, double cutoff);

struct MathieuCharValues {
  std::vector<double> values;  // ascending, one per chain
  double cutoff = 0;           // converged truncation
  int chain_multiplicity = 2;  // the conjugate chain repeats every value
};

/// Lowest `count` antiperiodic characteristic values a_{h+1/2}(q), by Sturm
/// bisection; the cutoff is doubled until |a₁(K) − a₁(2K)| ≤ 1e−10·max(1, |a₁|).
MathieuCharValues antiperiodic_char_values(double q, int count, double cutoff = 8.0, double abs_tol = 1e-12);

/// −2q + 2(2h+1)√q, the leading large-q behaviour.
double asymptotic_a(double q, int h);

/// μ₁(β) = 2q + a_min(q), q = tan²β/16.
double mu1_from_tilt(double beta);
std::vector<double> mu1_from_tilt(std::span<const double> betas);

/// Smallest β with μ₁(β) = target (μ₁ is increasing in β), by bisection on
/// [0, beta_max]. Throws InvalidArgument if the target is not bracketed.
double tilt_threshold(double target_mu, double beta_max = 1.5707, double beta_tol = 1e-12);

}  // namespace magreg
