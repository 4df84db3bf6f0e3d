#include "app/commands.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "magreg/annulus.hpp"
#include "magreg/core_model.hpp"
#include "magreg/errors.hpp"
#include "magreg/exponents.hpp"
#include "magreg/mathieu.hpp"

namespace magreg::app {

namespace {

SpectrumOptions spectrum_options(const RunConfig& cfg) {
  SpectrumOptions o;
  o.rel_tol = cfg.tol;
  return o;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

Table cmd_mu1(const RunConfig& cfg) {
  const auto pot = build_potential(cfg.potential);
  const auto res = solve_spectrum(pot, cfg.truncation, cfg.n_eigs, spectrum_options(cfg));
  Table t;
  t.columns = {"k", "mu", "gamma_plus", "gamma_minus"};
  t.note("flux", fmt(pot.flux()));
  t.note("truncation", fmt(res.truncation));
  t.note("residual", fmt(res.residual));
  for (int k = 0; k < res.size(); ++k) {
    const auto g = gamma_pm(2, std::max(0.0, res.eigenvalues(k)));
    t.add({fmt(k + 1), fmt(res.eigenvalues(k)), fmt(g.gamma_plus), fmt(g.gamma_minus)});
  }
  return t;
}

Table cmd_tilt_table(const RunConfig& cfg) {
  const auto betas = linspace(cfg.tilt.beta_min, cfg.tilt.beta_max, cfg.tilt.steps);
  std::vector<AngularPotential1D> pots;
  for (double b : betas) pots.push_back(TiltModel::from_beta(b).angular_potential());
  const auto galerkin = solve_spectra(pots, cfg.truncation, 1, spectrum_options(cfg));
  const auto mathieu = mu1_from_tilt(betas);

  Table t;
  t.columns = {"beta", "g", "q", "a1", "mu1_galerkin", "mu1_mathieu", "difference", "gamma1", "schauder"};
  bool increasing = true;
  double prev = -1;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const auto tilt = TiltModel::from_beta(betas[i]);
    const double mu = galerkin[i].eigenvalues(0);
    const double g1 = gamma_pm(2, mu).gamma_plus;
    const auto report = regularity_report(g1, 3, DataRegularity::holder());
    increasing = increasing && g1 > prev;
    prev = g1;
    t.add({fmt(betas[i]), fmt(tilt.g), fmt(tilt.q), fmt(mathieu[i] - 2 * tilt.q), fmt(mu), fmt(mathieu[i]),
           fmt(std::abs(mu - mathieu[i])), fmt(g1), fmt(report.schauder_ok)});
  }
  t.note("gamma1_increasing", fmt(increasing));
  for (int k = 1; k <= 3; ++k) {
    t.note("beta_gamma1_" + std::to_string(k), fmt(tilt_threshold(static_cast<double>(k * k))));
  }
  return t;
}

SingularMagneticPotential potential_3d(const PotentialSpec& spec, const ProblemGeometry& geom) {
  if (spec.kind == "tilt") return tilted_circle_potential(spec.beta);
  if (spec.kind == "ab_flux") return ab_flux_potential(geom, spec.flux);
  throw ConfigError("gamma needs potential.kind tilt or ab_flux");
}

Table cmd_gamma(const RunConfig& cfg) {
  const auto geom = ProblemGeometry::make(3, 2);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) m(i, i) = std::sqrt(cfg.gamma.metric_diag[static_cast<std::size_t>(i)]);
  const AnisotropyModel model(geom, MatrixField::constant(m));
  const auto pot = potential_3d(cfg.potential, geom);
  std::vector<Eigen::VectorXd> grid;
  for (double x : cfg.gamma.x_grid) grid.push_back(Eigen::VectorXd::Constant(1, x));
  const auto data = cfg.gamma.data == "holder" ? DataRegularity::holder() : DataRegularity::lebesgue(cfg.gamma.q);
  const auto res = gamma1(model, pot, grid, cfg.truncation, data);

  Table t;
  t.columns = {"x", "mu1", "gamma_plus"};
  for (const auto& s : res.samples) t.add({fmt(s.x(0)), fmt(s.mu1), fmt(s.gamma_plus)});
  t.note("gamma1", fmt(res.report.gamma1));
  t.note("mu1_inf", fmt(res.mu1_inf));
  t.note("holder_sup", fmt(res.report.holder_sup));
  t.note("schauder_ok", fmt(res.report.schauder_ok));
  t.note("schauder_sup", fmt(res.report.schauder_sup));
  t.note("minimizer", fmt(res.report.minimizer(0)));
  t.note("grid_spacing", fmt(res.report.grid_spacing));
  const double lambda = *std::min_element(cfg.gamma.metric_diag.begin(), cfg.gamma.metric_diag.end());
  const auto hc = hardy_constant(lambda, 2, res.mu1_inf);
  t.note("hardy_constant", fmt(hc.value));
  t.note("capacity", to_string(capacity_class(2)));
  return t;
}

Table cmd_mathieu(const RunConfig& cfg) {
  Table t;
  t.columns = {"q", "h", "a", "asymptote", "mu"};
  for (double q : cfg.mathieu.q) {
    const auto cv = antiperiodic_char_values(q, cfg.mathieu.count);
    for (std::size_t h = 0; h < cv.values.size(); ++h) {
      t.add({fmt(q), fmt(h), fmt(cv.values[h]), fmt(asymptotic_a(q, static_cast<int>(h))), fmt(2 * q + cv.values[h])});
    }
  }
  t.note("chain_multiplicity", "2");
  return t;
}

Table cmd_solenoid(const RunConfig& cfg) {
  const auto& s = cfg.solenoid;
  const auto loop = build_loop(s);
  const auto c = loop_coefficients(loop);
  const auto current = CurrentProfile::constant(s.current);
  Table t;
  t.note("c12", fmt(c.c12()));
  t.note("c13", fmt(c.c13()));
  t.note("c23", fmt(c.c23()));
  const auto area = c.area_vector();
  const auto dip = c.dipole(s.current);
  t.note("area_vector", fmt(area(0)) + " " + fmt(area(1)) + " " + fmt(area(2)));
  t.note("dipole", fmt(dip(0)) + " " + fmt(dip(1)) + " " + fmt(dip(2)));
  t.note("ab_regime", fmt(ab_regime(c)));
  const double jv[] = {s.current};
  t.note("flux", fmt(c.c23() * s.mu0 * s.current / (2 * std::numbers::pi)));
  t.note("flux_distance_to_integers", fmt(flux_nondegeneracy(jv, c.c23(), s.mu0)));

  t.columns = {"x", "y1", "y2", "delta", "lead1", "lead2", "lead3", "bs1", "bs2", "bs3", "error", "slope"};
  for (const auto& p : s.points) {
    const Eigen::Vector3d z(p[0], p[1], p[2]);
    const Eigen::Vector3d lead = leading_potential(c, current, z, s.mu0);
    double prev_err = 0, prev_delta = 0;
    for (double d : s.deltas) {
      const Eigen::Vector3d bs = biot_savart_delta(loop, current, d, z, s.mu0) / (d * d);
      const double err = (bs - lead).norm();
      const std::string slope = prev_delta > 0 ? fmt(std::log(prev_err / err) / std::log(prev_delta / d)) : "";
      t.add({fmt(z(0)), fmt(z(1)), fmt(z(2)), fmt(d), fmt(lead(0)), fmt(lead(1)), fmt(lead(2)), fmt(bs(0)),
             fmt(bs(1)), fmt(bs(2)), fmt(err), slope});
      prev_err = err;
      prev_delta = d;
    }
  }
  return t;
}

Table cmd_field(const RunConfig& cfg) {
  const auto& s = cfg.solenoid;
  const auto c = loop_coefficients(build_loop(s));
  const auto current = CurrentProfile::constant(s.current);
  Table t;
  t.columns = {"x", "y1", "y2", "rho", "A1", "A2", "A3"};
  for (const auto& p : s.points) {
    const Eigen::Vector3d z(p[0], p[1], p[2]);
    const Eigen::Vector3d a = leading_potential(c, current, z, s.mu0);
    t.add({fmt(z(0)), fmt(z(1)), fmt(z(2)), fmt(std::hypot(z(1), z(2))), fmt(a(0)), fmt(a(1)), fmt(a(2))});
  }
  t.note("flux", fmt(c.c23() * s.mu0 * s.current / (2 * std::numbers::pi)));
  return t;
}

Table cmd_frame(const RunConfig& cfg) {
  const auto curve = build_curve(cfg.curve);
  Table t;
  t.columns = {"x", "T1", "T2", "T3", "N1", "N2", "N3", "B1", "B2", "B3", "kappa", "tau", "defect"};
  double worst = 0;
  for (double x : linspace(curve.lo(), curve.hi(), cfg.curve.points)) {
    const auto f = frenet_frame(curve, x);
    worst = std::max(worst, f.orthonormality_defect());
    t.add({fmt(x), fmt(f.t(0)), fmt(f.t(1)), fmt(f.t(2)), fmt(f.n(0)), fmt(f.n(1)), fmt(f.n(2)), fmt(f.b(0)),
           fmt(f.b(1)), fmt(f.b(2)), fmt(f.curvature), fmt(f.torsion), fmt(f.orthonormality_defect())});
  }
  t.note("max_defect", fmt(worst));
  t.note("speed_defect", fmt(curve.speed_defect()));
  return t;
}

Table cmd_metric(const RunConfig& cfg) {
  const TubularMap map(build_curve(cfg.curve));
  Table t;
  t.columns = {"x", "rho", "theta", "n11", "n12", "n13", "n22", "n23", "n33", "det", "deviation"};
  std::vector<double> rhos, devs;
  for (double rho : cfg.curve.rhos) {
    double worst = 0;
    for (int k = 0; k < cfg.curve.thetas; ++k) {
      const double th = 2 * std::numbers::pi * k / cfg.curve.thetas;
      const auto em = effective_metric(map, Eigen::Vector3d(cfg.curve.x, rho * std::cos(th), rho * std::sin(th)));
      const double dev = (em.n_eff - Eigen::Matrix3d::Identity()).norm();
      worst = std::max(worst, dev);
      const auto& n = em.n_eff;
      t.add({fmt(cfg.curve.x), fmt(rho), fmt(th), fmt(n(0, 0)), fmt(n(0, 1)), fmt(n(0, 2)), fmt(n(1, 1)), fmt(n(1, 2)),
             fmt(n(2, 2)), fmt(em.det), fmt(dev)});
    }
    if (rho > 0) {
      rhos.push_back(rho);
      devs.push_back(worst);
    }
  }
  t.note("r0", fmt(map.r0()));
  if (rhos.size() >= 2) t.note("deviation_slope", fmt(loglog_slope(rhos, devs)));
  return t;
}

TrigPoly boundary_data(const RunConfig& cfg, const AngularPotential1D& pot, int truncation) {
  const auto& a = cfg.annulus;
  if (a.eigen.empty()) return TrigPoly::from_real(a.a0, a.cos_coeffs, a.sin_coeffs);
  const auto basis = full_basis(pot, truncation);
  if (static_cast<int>(a.eigen.size()) > basis.size()) throw ConfigError("annulus.boundary.eigen longer than the basis");
  std::vector<Complex> coeffs(static_cast<std::size_t>(2 * truncation + 1));
  for (std::size_t k = 0; k < a.eigen.size(); ++k) {
    for (int j = 0; j < 2 * truncation + 1; ++j) {
      coeffs[static_cast<std::size_t>(j)] +=
          a.eigen[k] * basis.eigenvectors(j, static_cast<Eigen::Index>(k)) / std::sqrt(2 * std::numbers::pi);
    }
  }
  return TrigPoly(std::move(coeffs));
}

Table cmd_decay(const RunConfig& cfg) {
  const auto pot = build_potential(cfg.potential);
  const double R = cfg.annulus.R;
  const int k = std::max(cfg.truncation, pot.degree());
  const auto g = boundary_data(cfg, pot, k);
  const auto rows = convergence_table(pot, g, cfg.annulus.eps, R, k);
  const auto u0 = AnnulusSolution::solve(AnnulusProblem::make(pot, 0.0, R, g), k);

  Table t;
  t.columns = {"epsilon", "l2_diff", "boundary_gradient", "decay_exponent"};
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto ue = AnnulusSolution(AnnulusProblem::make(pot, rows[i].epsilon, R, g), u0.basis());
    std::string exponent;
    if (2 * rows[i].epsilon < 0.1 * R) exponent = fmt(decay_fit(ue));
    if (i > 0 && rows[i].epsilon < rows[i - 1].epsilon) monotone = monotone && rows[i].l2_diff < rows[i - 1].l2_diff;
    t.add({fmt(rows[i].epsilon), fmt(rows[i].l2_diff), fmt(rows[i].boundary_gradient), exponent});
  }
  t.note("gamma1", fmt(u0.gamma1()));
  t.note("decay_exponent_u0", fmt(decay_fit(u0)));
  t.note("l2_monotone", fmt(monotone));
  auto eps = cfg.annulus.eps;
  std::sort(eps.begin(), eps.end());
  if (eps.size() >= 2) {
    eps.resize(std::min<std::size_t>(eps.size(), 3));
    t.note("gradient_slope", fmt(gradient_boundary_scaling(pot, g, eps, R, k)));
  }
  return t;
}

Table cmd_hardy(const RunConfig& cfg) {
  const auto pot = build_potential(cfg.potential);
  const AngularPotential1D magnetic(pot.alpha());
  const double mu1 = solve_spectrum(magnetic, cfg.truncation, 1, spectrum_options(cfg)).eigenvalues(0);
  const auto hc = hardy_constant(1.0, 2, mu1);
  if (hc.degenerate) throw Error(ErrorKind::DegenerateMode, "Hardy constant vanishes for this potential");

  std::mt19937_64 rng(cfg.seed);
  Table t;
  t.columns = {"trial", "lhs", "rhs", "margin", "violated"};
  int violations = 0;
  for (int i = 0; i < cfg.hardy.trials; ++i) {
    const auto phi = random_hardy_test_function(cfg.hardy.R, rng, cfg.hardy.max_mode, cfg.hardy.max_degree);
    const auto chk = hardy_residual(magnetic, phi, hc.value);
    violations += chk.violated() ? 1 : 0;
    t.add({fmt(i), fmt(chk.lhs), fmt(chk.rhs), fmt((chk.rhs - chk.lhs) / chk.rhs), fmt(chk.violated())});
  }
  t.note("hardy_constant", fmt(hc.value));
  t.note("violations", fmt(violations));
  return t;
}

}  // namespace

const std::vector<std::string>& table_commands() {
  static const std::vector<std::string> names{"mu1",   "tilt-table", "gamma",  "mathieu", "solenoid",
                                              "field", "frame",      "metric", "decay",   "hardy"};
  return names;
}

Table run_command(const RunConfig& cfg) {
  static const std::map<std::string, std::function<Table(const RunConfig&)>> table{
      {"mu1", cmd_mu1},           {"tilt-table", cmd_tilt_table}, {"gamma", cmd_gamma}, {"mathieu", cmd_mathieu},
      {"solenoid", cmd_solenoid}, {"field", cmd_field},           {"frame", cmd_frame}, {"metric", cmd_metric},
      {"decay", cmd_decay},       {"hardy", cmd_hardy}};
  const auto it = table.find(cfg.command);
  if (it == table.end()) throw ConfigError("unknown command '" + cfg.command + "'");
  return it->second(cfg);
}

AngularPotential1D build_potential(const PotentialSpec& spec) {
  if (spec.kind == "ab_flux") return AngularPotential1D::constant_flux(spec.flux);
  if (spec.kind == "tilt") return TiltModel::from_beta(spec.beta).angular_potential();
  return AngularPotential1D(TrigPoly::from_real(spec.alpha0, spec.alpha_cos, spec.alpha_sin),
                            TrigPoly::from_real(spec.h0, spec.h_cos, spec.h_sin));
}

LoopCurve build_loop(const SolenoidSpec& spec) {
  if (spec.loop == "tilted") return tilted_circle(spec.beta);
  if (spec.loop == "axial") return axial_circle(spec.radius);
  std::vector<Eigen::Vector3d> pts;
  for (const auto& r : spec.samples) pts.emplace_back(r[0], r[1], r[2]);
  const bool endpoint = (pts.front() - pts.back()).norm() < 1e-6;
  return LoopCurve::from_samples(pts, endpoint);
}

SpaceCurve build_curve(const CurveSpec& spec) {
  if (spec.kind == "helix") return SpaceCurve::helix(spec.r, spec.b);
  if (spec.kind == "circle") return SpaceCurve::circle(spec.r);
  if (spec.kind == "perturbed_helix") return SpaceCurve::perturbed_helix(spec.r, spec.b, spec.amp, spec.turns);
  std::vector<double> xs;
  std::vector<Eigen::Vector3d> pts;
  for (const auto& row : spec.samples) {
    xs.push_back(row[0]);
    pts.emplace_back(row[1], row[2], row[3]);
  }
  return SpaceCurve::from_samples(std::move(xs), std::move(pts));
}

}  // namespace magreg::app
