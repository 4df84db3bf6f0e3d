#include "magreg/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magreg/detail/parallel.hpp"
#include "magreg/errors.hpp"

namespace magreg {

namespace {

constexpr double kDegenerateMu = 1e-14;

}  // namespace

ExponentPair gamma_pm(int n, double mu) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "gamma_pm needs n >= 2");
  if (mu < 0) throw Error(ErrorKind::InvalidArgument, "mu must be nonnegative");
  const double half = (n - 2) / 2.0;
  const double root = std::sqrt(half * half + mu);
  return ExponentPair{-half + root, -half - root, n, mu, root <= kDegenerateMu};
}

RegularityReport regularity_report(double gamma1, int d, const DataRegularity& data) {
  if (!(gamma1 > 0)) throw Error(ErrorKind::InvalidArgument, "gamma1 must be positive");
  RegularityReport r;
  r.gamma1 = gamma1;
  r.holder_sup = std::min(gamma1, 1.0);
  if (data.kind == DataRegularity::Kind::Lebesgue && std::isfinite(data.q)) {
    r.holder_sup = std::min(r.holder_sup, 1.0 - d / data.q);
  }
  r.schauder_ok = data.kind == DataRegularity::Kind::Holder && gamma1 > 1.0;
  r.schauder_sup = r.schauder_ok ? std::min(gamma1 - 1.0, 1.0) : 0.0;
  return r;
}

AngularPotential1D angular_problem_at(const AnisotropyModel& model, const SingularMagneticPotential& pot,
                                      const Eigen::VectorXd& x, int truncation) {
  const auto& g = model.geometry();
  if (g.n != 2) throw Error(ErrorKind::InvalidDimension, "angular spectra are computed for n = 2 only");
  const int samples = 4 * std::max(truncation, 4);
  std::vector<Eigen::Vector2d> normal(static_cast<std::size_t>(samples));
  std::vector<double> h(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * std::numbers::pi * i / samples;
    Eigen::VectorXd theta(2);
    theta << std::cos(t), std::sin(t);
    const Eigen::VectorXd at = tilde_a(model, pot, x, theta);
    normal[static_cast<std::size_t>(i)] = at.tail(2);
    h[static_cast<std::size_t>(i)] = at.head(g.x_dim()).squaredNorm();
  }
  TrigPoly alpha = tangential_component(normal);
  TrigPoly hp = TrigPoly::project(std::span<const double>(h), std::min(truncation, (samples - 1) / 2)).trimmed();
  if (alpha.degree() > truncation) {
    std::vector<Complex> c;
    for (int k = -truncation; k <= truncation; ++k) c.push_back(alpha.coeff(k));
    alpha = TrigPoly(std::move(c));
  }
  return AngularPotential1D(std::move(alpha), std::move(hp));
}

namespace {

Gamma1Result finish(int n, int d, std::vector<Gamma1Sample> rows, const GridMinimum& best,
                    const DataRegularity& data) {
  Gamma1Result out;
  out.samples = std::move(rows);
  out.mu1_inf = best.value;
  const auto pair = gamma_pm(n, std::max(0.0, best.value));
  if (pair.gamma_plus > 0) {
    out.report = regularity_report(pair.gamma_plus, d, data);
  } else {
    out.report.gamma1 = pair.gamma_plus;  // degenerate: reported, not solvable
  }
  out.report.minimizer = best.argmin;
  out.report.grid_spacing = best.spacing;
  return out;
}

}  // namespace

Gamma1Result gamma1(const AnisotropyModel& model, const SingularMagneticPotential& pot,
                    std::span<const Eigen::VectorXd> x_grid, int truncation, const DataRegularity& data) {
  const auto& g = model.geometry();
  auto mu_at = [&](const Eigen::VectorXd& x) {
    return solve_spectrum(angular_problem_at(model, pot, x, truncation), truncation, 1).eigenvalues(0);
  };

  std::vector<Gamma1Sample> rows(x_grid.size());
  detail::parallel_for(x_grid.size(), [&](std::size_t i) {
    const double mu = mu_at(x_grid[i]);
    rows[i] = Gamma1Sample{x_grid[i], mu, gamma_pm(g.n, std::max(0.0, mu)).gamma_plus};
  });
  // γ⁺ is increasing in μ, so minimising μ₁ minimises γ⁺.
  const auto lookup = [&](const Eigen::VectorXd& x) {
    for (std::size_t k = 0; k < x_grid.size(); ++k) {
      if ((x_grid[k] - x).norm() == 0.0) return rows[k].mu1;
    }
    return mu_at(x);
  };
  const auto best = grid_minimize(lookup, x_grid, true);
  return finish(g.n, g.d, std::move(rows), best, data);
}

Gamma1Result gamma1_from_mu_table(int n, int d, std::span<const Eigen::VectorXd> x_grid, std::span<const double> mu1,
                                  const DataRegularity& data) {
  if (x_grid.size() != mu1.size() || x_grid.empty()) {
    throw Error(ErrorKind::InvalidArgument, "x-grid and mu table must have equal, nonzero length");
  }
  std::vector<Gamma1Sample> rows;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    rows.push_back(Gamma1Sample{x_grid[i], mu1[i], gamma_pm(n, mu1[i]).gamma_plus});
  }
  const auto lookup = [&](const Eigen::VectorXd& x) {
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
      if ((x_grid[i] - x).norm() == 0.0) return mu1[i];
    }
    return std::numeric_limits<double>::infinity();
  };
  const auto best = grid_minimize(lookup, x_grid, false);
  return finish(n, d, std::move(rows), best, data);
}

}  // namespace magreg
