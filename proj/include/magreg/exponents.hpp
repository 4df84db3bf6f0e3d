#pragma once

#include <Eigen/Core>

#include <limits>
#include <span>
#include <vector>

#include "magreg/circle_spectrum.hpp"
#include "magreg/core_model.hpp"

namespace magreg {

/// γ^± = −(n−2)/2 ± √(((n−2)/2)² + μ).
struct ExponentPair {
  double gamma_plus = 0;
  double gamma_minus = 0;
  int n = 2;
  double mu = 0;
  bool degenerate = false;  // μ = 0: double root
};

ExponentPair gamma_pm(int n, double mu);

/// Regularity of the data b entering the Hölder/Schauder statements.
struct DataRegularity {
  enum class Kind { Lebesgue, Holder };
  Kind kind = Kind::Lebesgue;
  double q = std::numeric_limits<double>::infinity();  // integrability exponent for Lebesgue data

  static DataRegularity lebesgue(double q) { return {Kind::Lebesgue, q}; }
  static DataRegularity holder() { return {Kind::Holder, std::numeric_limits<double>::infinity()}; }
};

struct RegularityReport {
  double gamma1 = 0;
  double holder_sup = 0;      // supremum of admissible C^{0,α}
  bool schauder_ok = false;   // γ₁ > 1 with Hölder data
  double schauder_sup = 0;    // supremum of admissible C^{1,α} when schauder_ok
  Eigen::VectorXd minimizer;  // x attaining the grid infimum
  double grid_spacing = 0;    // uncertainty of the infimum location
};

/// Hölder cap min(γ₁, 1, 1 − d/q) for Lebesgue data; Schauder flag and cap
/// min(γ₁ − 1, 1) when the data are Hölder and γ₁ > 1.
RegularityReport regularity_report(double gamma1, int d, const DataRegularity& data);

/// One row of the x-scan behind γ₁.
struct Gamma1Sample {
  Eigen::VectorXd x;
  double mu1 = 0;
  double gamma_plus = 0;
};

struct Gamma1Result {
  RegularityReport report;
  std::vector<Gamma1Sample> samples;  // grid rows in input order
  double mu1_inf = 0;
};

/// Angular problem at x for n = 2: α from the tangential part of ã″ and
/// h = |ã′|², both projected on a 4K-point grid.
AngularPotential1D angular_problem_at(const AnisotropyModel& model, const SingularMagneticPotential& pot,
                                      const Eigen::VectorXd& x, int truncation);

/// γ₁(M, a) = inf_x γ⁺(μ₁(ã″(x,·), |ã′(x,·)|²)) over the x-grid (n = 2),
/// refined once around the grid minimiser.
Gamma1Result gamma1(const AnisotropyModel& model, const SingularMagneticPotential& pot,
                    std::span<const Eigen::VectorXd> x_grid, int truncation,
                    const DataRegularity& data = DataRegularity::holder());

/// γ₁ from externally supplied μ₁ values (any n ≥ 2).
Gamma1Result gamma1_from_mu_table(int n, int d, std::span<const Eigen::VectorXd> x_grid, std::span<const double> mu1,
                                  const DataRegularity& data = DataRegularity::holder());

}  // namespace magreg
