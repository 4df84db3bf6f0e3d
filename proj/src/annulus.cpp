#include "magreg/annulus.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "magreg/detail/parallel.hpp"
#include "magreg/errors.hpp"
#include "magreg/quadrature.hpp"

namespace magreg {

namespace {

constexpr double kDegenerateMu = 1e-8;
const double kSqrtTwoPi = std::sqrt(2.0 * std::numbers::pi);

Complex horner(const std::vector<Complex>& p, double x) {
  Complex acc{};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex horner_derivative(const std::vector<Complex>& p, double x) {
  Complex acc{};
  for (std::size_t k = p.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * p[k];
  return acc;
}

// ∫_a^b f(r) dr through r = e^s, GL on panels of width ≤ 0.5 in s.
template <typename F>
double log_integral(F&& f, double a, double b) {
  static const GaussRule rule = gauss_legendre(10);
  if (!(b > a)) return 0.0;
  const double sa = std::log(a), sb = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / 0.5)));
  const double w = (sb - sa) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = sa + (p + 0.5) * w;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = std::exp(mid + 0.5 * w * rule.nodes[k]);
      total += 0.5 * w * rule.weights[k] * f(r) * r;
    }
  }
  return total;
}

}  // namespace

AnnulusProblem AnnulusProblem::make(AngularPotential1D pot, double epsilon, double R, TrigPoly boundary) {
  if (!(epsilon >= 0 && R > epsilon)) {
    throw Error(ErrorKind::InsufficientRange,
                "need 0 <= eps < R, got eps=" + std::to_string(epsilon) + " R=" + std::to_string(R));
  }
  return AnnulusProblem{std::move(pot), epsilon, R, std::move(boundary)};
}

Complex ModeSolution::profile(double r) const {
  if (r < epsilon) return 0.0;
  if (r == 0.0) return 0.0;
  const double delta = gamma_plus - gamma_minus;
  return c_plus * std::pow(r, gamma_plus) * (1.0 - std::pow(epsilon / r, delta));
}

Complex ModeSolution::derivative(double r) const {
  if (r < epsilon) return 0.0;
  const double delta = gamma_plus - gamma_minus;
  return c_plus * std::pow(r, gamma_plus - 1) * (gamma_plus - gamma_minus * std::pow(epsilon / r, delta));
}

std::vector<Complex> expand_boundary(const TrigPoly& g, const SpectralResult& basis, double tol) {
  const int kk = basis.truncation;
  std::vector<Complex> out(static_cast<std::size_t>(basis.size()));
  double captured = 0;
  for (int k = 0; k < basis.size(); ++k) {
    Complex acc{};
    for (int j = -kk; j <= kk; ++j) acc += g.coeff(j) * std::conj(basis.eigenvectors(j + kk, k));
    out[static_cast<std::size_t>(k)] = kSqrtTwoPi * acc;
    captured += std::norm(out[static_cast<std::size_t>(k)]);
  }
  const double norm2 = g.l2_norm_squared();
  const double defect = std::abs(norm2 - captured);
  if (defect > tol * std::max(1.0, norm2)) {
    throw Error(ErrorKind::BasisIncomplete, "Parseval defect " + std::to_string(defect));
  }
  return out;
}

std::vector<ModeSolution> solve_modes(const AnnulusProblem& prob, const SpectralResult& basis) {
  const auto gk = expand_boundary(prob.boundary, basis);
  std::vector<ModeSolution> modes(gk.size());
  for (std::size_t k = 0; k < gk.size(); ++k) {
    const double mu = basis.eigenvalues(static_cast<Eigen::Index>(k));
    if (mu < kDegenerateMu) {
      throw Error(ErrorKind::DegenerateMode, "mu_" + std::to_string(k + 1) + " = " + std::to_string(mu));
    }
    auto& m = modes[k];
    m.index = static_cast<int>(k);
    m.mu = mu;
    m.gamma_plus = std::sqrt(mu);
    m.gamma_minus = -m.gamma_plus;
    m.epsilon = prob.epsilon;
    m.g = gk[k];
    const double delta = m.gamma_plus - m.gamma_minus;
    const double ratio = std::pow(prob.epsilon / prob.R, delta);
    m.c_plus = m.g / (std::pow(prob.R, m.gamma_plus) * (1.0 - ratio));
    m.c_minus = -m.c_plus * std::pow(prob.epsilon, delta);
  }
  return modes;
}

AnnulusSolution::AnnulusSolution(AnnulusProblem prob, SpectralResult basis)
    : prob_(std::move(prob)), basis_(std::move(basis)), modes_(solve_modes(prob_, basis_)) {}

AnnulusSolution AnnulusSolution::solve(const AnnulusProblem& prob, int truncation) {
  const int k = std::max({truncation, prob.boundary.degree(), prob.pot.degree()});
  return AnnulusSolution(prob, full_basis(prob.pot, k));
}

Eigen::VectorXcd AnnulusSolution::fourier(double r, bool derivative) const {
  Eigen::VectorXcd f(static_cast<Eigen::Index>(modes_.size()));
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    f(static_cast<Eigen::Index>(k)) = derivative ? modes_[k].derivative(r) : modes_[k].profile(r);
  }
  return basis_.eigenvectors * f / kSqrtTwoPi;
}

Complex AnnulusSolution::operator()(double r, double theta) const {
  const Eigen::VectorXcd c = fourier(r);
  const int kk = basis_.truncation;
  Complex acc{};
  for (int j = -kk; j <= kk; ++j) acc += c(j + kk) * std::polar(1.0, j * theta);
  return acc;
}

Complex AnnulusSolution::radial_derivative(double r, double theta) const {
  const Eigen::VectorXcd c = fourier(r, true);
  const int kk = basis_.truncation;
  Complex acc{};
  for (int j = -kk; j <= kk; ++j) acc += c(j + kk) * std::polar(1.0, j * theta);
  return acc;
}

double AnnulusSolution::sup_abs(double r, int n_theta) const {
  const Eigen::VectorXcd c = fourier(r);
  double m = 0;
  for (const auto& v : TrigPoly(std::vector<Complex>(c.data(), c.data() + c.size())).sample(n_theta)) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double AnnulusSolution::sup_abs_derivative(double r, int n_theta) const {
  const Eigen::VectorXcd c = fourier(r, true);
  double m = 0;
  for (const auto& v : TrigPoly(std::vector<Complex>(c.data(), c.data() + c.size())).sample(n_theta)) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InsufficientRange, "need >= 2 points to fit");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw Error(ErrorKind::InsufficientRange, "log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0)) throw Error(ErrorKind::InsufficientRange, "abscissae coincide");
  return (n * sxy - sx * sy) / den;
}

double decay_fit(const AnnulusSolution& sol, double r_lo, double r_hi, int samples) {
  if (!(r_lo > sol.problem().epsilon) || !(r_hi > r_lo) || r_hi > sol.problem().R || samples < 2) {
    throw Error(ErrorKind::InsufficientRange, "decay window [" + std::to_string(r_lo) + ", " + std::to_string(r_hi) +
                                                  "] invalid for eps=" + std::to_string(sol.problem().epsilon));
  }
  std::vector<double> rs(static_cast<std::size_t>(samples)), us(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (samples - 1));
    rs[static_cast<std::size_t>(i)] = r;
    us[static_cast<std::size_t>(i)] = sol.sup_abs(r);
  }
  return loglog_slope(rs, us);
}

double decay_fit(const AnnulusSolution& sol) {
  const double R = sol.problem().R;
  return decay_fit(sol, std::max(2 * sol.problem().epsilon, 1e-4 * R), 0.1 * R);
}

double gradient_boundary_scaling(const AngularPotential1D& pot, const TrigPoly& g, std::span<const double> eps_list,
                                 double R, int truncation) {
  if (eps_list.size() < 2) throw Error(ErrorKind::InsufficientRange, "need >= 2 values of eps");
  const int k = std::max({truncation, g.degree(), pot.degree()});
  const auto basis = full_basis(pot, k);
  std::vector<double> grads(eps_list.size());
  detail::parallel_for(eps_list.size(), [&](std::size_t i) {
    const AnnulusSolution sol(AnnulusProblem::make(pot, eps_list[i], R, g), basis);
    grads[i] = sol.sup_abs_derivative(eps_list[i]);
  });
  return loglog_slope(eps_list, grads);
}

double l2_difference(const AnnulusSolution& a, const AnnulusSolution& b) {
  if (a.modes().size() != b.modes().size() || a.problem().R != b.problem().R) {
    throw Error(ErrorKind::InvalidArgument, "solutions do not share a basis");
  }
  const double R = a.problem().R;
  const double e_lo = std::min(a.problem().epsilon, b.problem().epsilon);
  const double e_hi = std::max(a.problem().epsilon, b.problem().epsilon);
  double floor = e_lo;
  if (e_lo == 0.0) floor = e_hi > 0 ? std::min(1e-14 * R, 0.5 * e_hi) : 1e-14 * R;
  double total = 0;
  for (std::size_t k = 0; k < a.modes().size(); ++k) {
    const auto& ma = a.modes()[k];
    const auto& mb = b.modes()[k];
    auto diff2 = [&](double r) { return std::norm(ma.profile(r) - mb.profile(r)) * r; };
    total += log_integral(diff2, floor, std::max(floor, e_hi)) + log_integral(diff2, std::max(floor, e_hi), R);
    if (e_lo == 0.0) {
      // Below the floor only ε = 0 solutions are nonzero, as pure powers.
      const Complex ca = ma.epsilon == 0.0 ? ma.c_plus : Complex{};
      const Complex cb = mb.epsilon == 0.0 ? mb.c_plus : Complex{};
      const double p = 2 * ma.gamma_plus + 2;
      total += std::norm(ca - cb) * std::pow(floor, p) / p;
    }
  }
  return std::sqrt(total);
}

std::vector<ConvergenceRow> convergence_table(const AngularPotential1D& pot, const TrigPoly& g,
                                              std::span<const double> eps_list, double R, int truncation) {
  const int k = std::max({truncation, g.degree(), pot.degree()});
  const auto basis = full_basis(pot, k);
  const AnnulusSolution u0(AnnulusProblem::make(pot, 0.0, R, g), basis);
  std::vector<ConvergenceRow> rows(eps_list.size());
  detail::parallel_for(eps_list.size(), [&](std::size_t i) {
    const AnnulusSolution ue(AnnulusProblem::make(pot, eps_list[i], R, g), basis);
    rows[i] = ConvergenceRow{eps_list[i], l2_difference(ue, u0), ue.sup_abs_derivative(eps_list[i])};
  });
  return rows;
}

void HardyTestFunction::validate(double tol) const {
  if (static_cast<int>(radial.size()) != 2 * max_mode + 1) {
    throw Error(ErrorKind::InvalidArgument, "radial table size does not match max_mode");
  }
  for (std::size_t j = 0; j < radial.size(); ++j) {
    double scale = 0;
    for (const auto& c : radial[j]) scale = std::max(scale, std::abs(c));
    scale *= std::pow(std::max(1.0, R), static_cast<double>(radial[j].size()));
    if (std::abs(horner(radial[j], 0.0)) > tol * scale || std::abs(horner(radial[j], R)) > tol * scale) {
      throw Error(ErrorKind::NotCompactlySupported,
                  "mode " + std::to_string(static_cast<int>(j) - max_mode) + " does not vanish at r = 0 and r = R");
    }
  }
}

Complex HardyTestFunction::operator()(double r, double theta) const {
  Complex acc{};
  for (int j = -max_mode; j <= max_mode; ++j) {
    acc += horner(radial[static_cast<std::size_t>(j + max_mode)], r) * std::polar(1.0, j * theta);
  }
  return acc;
}

HardyTestFunction random_hardy_test_function(double R, std::mt19937_64& rng, int max_mode, int max_degree) {
  std::normal_distribution<double> normal;
  HardyTestFunction phi;
  phi.R = R;
  phi.max_mode = max_mode;
  phi.radial.resize(static_cast<std::size_t>(2 * max_mode + 1));
  for (auto& q : phi.radial) {
    std::vector<Complex> p(static_cast<std::size_t>(max_degree + 1));
    for (auto& c : p) c = Complex(normal(rng), normal(rng));
    // q = (R r − r²)·p
    q.assign(p.size() + 2, Complex{});
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k + 1] += R * p[k];
      q[k + 2] -= p[k];
    }
  }
  return phi;
}

HardyCheck hardy_residual(const AngularPotential1D& pot, const HardyTestFunction& phi, double c, int radial_points) {
  phi.validate();
  const auto rule = gauss_legendre(radial_points);
  const int m = phi.max_mode;
  HardyCheck out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = 0.5 * phi.R * (rule.nodes[i] + 1);
    const double w = 0.5 * phi.R * rule.weights[i];
    std::vector<Complex> val(phi.radial.size()), dr(phi.radial.size()), dtheta(phi.radial.size());
    for (int j = -m; j <= m; ++j) {
      const auto& q = phi.radial[static_cast<std::size_t>(j + m)];
      val[static_cast<std::size_t>(j + m)] = horner(q, r);
      dr[static_cast<std::size_t>(j + m)] = horner_derivative(q, r);
      dtheta[static_cast<std::size_t>(j + m)] = -static_cast<double>(j) * val[static_cast<std::size_t>(j + m)];
    }
    const TrigPoly f(val);
    const TrigPoly covariant = TrigPoly(dtheta) + pot.alpha() * f;
    out.lhs += w * c * f.l2_norm_squared() / r;
    out.rhs += w * (TrigPoly(dr).l2_norm_squared() * r + covariant.l2_norm_squared() / r);
  }
  return out;
}

HardySuite hardy_suite(const AngularPotential1D& pot, double c, std::uint64_t seed, int trials, double R) {
  std::mt19937_64 rng(seed);
  HardySuite suite;
  suite.trials = trials;
  suite.min_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const auto phi = random_hardy_test_function(R, rng);
    const auto check = hardy_residual(pot, phi, c);
    if (check.violated()) ++suite.violations;
    suite.min_margin = std::min(suite.min_margin, (check.rhs - check.lhs) / check.rhs);
  }
  return suite;
}

double ode_residual(const ModeSolution& mode, double mu, std::span<const double> r_grid) {
  double worst = 0, scale = 0;
  for (double r : r_grid) {
    const double h = 1e-3 * r;
    const Complex fm2 = mode.profile(r - 2 * h), fm1 = mode.profile(r - h), f0 = mode.profile(r);
    const Complex fp1 = mode.profile(r + h), fp2 = mode.profile(r + 2 * h);
    const Complex d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12 * h);
    const Complex d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12 * h * h);
    worst = std::max(worst, std::abs(-r * r * d2 - r * d1 + mu * f0));
    scale = std::max(scale, std::abs(f0));
  }
  return scale > 0 ? worst / scale : worst;
}

}  // namespace magreg
