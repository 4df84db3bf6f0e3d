#include "magreg/core_model.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace magreg {

namespace {

MatrixXd checked_inverse(const MatrixXd& m) {
  Eigen::FullPivLU<MatrixXd> lu(m);
  if (!lu.isInvertible()) throw Error(ErrorKind::SingularMatrix, "matrix is not invertible");
  return lu.inverse();
}

}  // namespace

ProblemGeometry ProblemGeometry::make(int d, int n) {
  if (d < 2 || n < 2 || n > d) {
    throw Error(ErrorKind::InvalidDimension,
                "need 2 <= n <= d, got d=" + std::to_string(d) + " n=" + std::to_string(n));
  }
  return ProblemGeometry{d, n};
}

VectorXd ProblemGeometry::join(const VectorXd& x, const VectorXd& y) const {
  VectorXd z(d);
  z << x, y;
  return z;
}

MatrixField MatrixField::constant(MatrixXd m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix field must be square");
  MatrixField f;
  f.dim_ = static_cast<int>(m.rows());
  f.constant_ = std::move(m);
  return f;
}

MatrixField MatrixField::sampled(int dim, Fn fn) {
  MatrixField f;
  f.dim_ = dim;
  f.fn_ = std::move(fn);
  return f;
}

MatrixXd MatrixField::operator()(const VectorXd& z) const {
  if (!fn_) return constant_;
  MatrixXd m = fn_(z);
  if (m.rows() != dim_ || m.cols() != dim_) throw Error(ErrorKind::InvalidArgument, "matrix field returned wrong size");
  return m;
}

EllipticityBounds validate_ellipticity(const MatrixField& metric, std::span<const VectorXd> probes, double tol) {
  if (probes.empty()) throw Error(ErrorKind::InvalidArgument, "no probe points");
  EllipticityBounds out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& z : probes) {
    const MatrixXd nz = metric(z);
    if ((nz - nz.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::NonSymmetric, "metric is not symmetric at a probe");
    }
    const auto eig = symmetric_eigen(MatrixXd((nz + nz.transpose()) / 2.0));
    out.lambda = std::min(out.lambda, eig.values(0));
    out.Lambda = std::max(out.Lambda, eig.values(eig.values.size() - 1));
  }
  if (out.lambda <= 0) throw Error(ErrorKind::NotElliptic, "minimum eigenvalue " + std::to_string(out.lambda));
  return out;
}

AnisotropyModel::AnisotropyModel(ProblemGeometry geometry, MatrixField m) : geometry_(geometry), m_(std::move(m)) {
  if (m_.dim() != geometry_.d) throw Error(ErrorKind::InvalidDimension, "matrix size does not match d");
}

AnisotropyModel AnisotropyModel::identity(ProblemGeometry geometry) {
  return AnisotropyModel(geometry, MatrixField::identity(geometry.d));
}

MatrixXd AnisotropyModel::metric(const VectorXd& z) const {
  const MatrixXd mz = m_(z);
  return mz.transpose() * mz;
}

MatrixField AnisotropyModel::metric_field() const {
  if (m_.is_constant()) return MatrixField::constant(metric(VectorXd::Zero(geometry_.d)));
  return MatrixField::sampled(geometry_.d, [self = *this](const VectorXd& z) { return self.metric(z); });
}

AnisotropyModel::Blocks AnisotropyModel::blocks(const VectorXd& z) const {
  const MatrixXd nz = metric(z);
  const int k = geometry_.x_dim();
  const int n = geometry_.n;
  return Blocks{nz.topLeftCorner(k, k), nz.topRightCorner(k, n), nz.bottomRightCorner(n, n)};
}

double AnisotropyModel::block_residual(std::span<const VectorXd> x_points) const {
  double worst = 0;
  for (const auto& x : x_points) {
    const auto b = blocks(geometry_.join(x, VectorXd::Zero(geometry_.n)));
    if (b.n2.size() > 0) worst = std::max(worst, b.n2.cwiseAbs().maxCoeff());
  }
  return worst;
}

SingularMagneticPotential ab_flux_potential(ProblemGeometry geometry, double flux) {
  if (geometry.n != 2) throw Error(ErrorKind::InvalidDimension, "the AB preset needs n = 2");
  SingularMagneticPotential pot;
  pot.geometry = geometry;
  pot.a = [geometry, flux](const VectorXd&, const VectorXd& theta) {
    VectorXd a = VectorXd::Zero(geometry.d);
    a(geometry.d - 2) = -flux * theta(1);
    a(geometry.d - 1) = flux * theta(0);
    return a;
  };
  return pot;
}

double check_transversality(const MatrixField& m, const SingularMagneticPotential& pot,
                            std::span<const TransversalitySample> samples) {
  const auto& g = pot.geometry;
  double worst = 0;
  for (const auto& s : samples) {
    const VectorXd z = g.join(s.x, s.radius * s.theta);
    const VectorXd am = checked_inverse(m(z)) * pot.a(s.x, s.theta);
    const double residual = std::abs(am.tail(g.n).dot(s.theta));
    worst = std::max(worst, residual);
  }
  return worst;
}

VectorXd tilde_a(const AnisotropyModel& model, const SingularMagneticPotential& pot, const VectorXd& x,
                 const VectorXd& theta) {
  const auto& g = model.geometry();
  const VectorXd z0 = g.join(x, VectorXd::Zero(g.n));
  const MatrixXd m0 = model.m(z0);
  const MatrixXd n0 = m0.transpose() * m0;
  const MatrixXd n3_sqrt = principal_sqrt(n0.bottomRightCorner(g.n, g.n));
  const VectorXd w = n3_sqrt * theta;
  const double wn = w.norm();
  const VectorXd am = checked_inverse(m0) * pot.a(x, w / wn);
  return principal_sqrt(n0) * am / wn;
}

HardyConstant hardy_constant(double lambda, int n, double mu1_inf) {
  if (lambda <= 0 || n < 2 || mu1_inf < 0) {
    throw Error(ErrorKind::InvalidArgument, "hardy_constant needs lambda > 0, n >= 2, mu1 >= 0");
  }
  const double half = (n - 2) / 2.0;
  const double value = lambda * (half * half + mu1_inf);
  return HardyConstant{value, value <= 0};
}

const char* to_string(CapacityClass c) noexcept {
  return c == CapacityClass::InfiniteCapacity ? "InfiniteCapacity" : "ZeroCapacity";
}

CapacityClass capacity_class(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "capacity needs n >= 2");
  return n == 2 ? CapacityClass::InfiniteCapacity : CapacityClass::ZeroCapacity;
}

VectorXd evaluate_A(const SingularMagneticPotential& pot, const VectorXd& z) {
  const auto& g = pot.geometry;
  const VectorXd x = g.x_part(z);
  const VectorXd y = g.y_part(z);
  const double r = y.norm();
  if (r == 0.0) throw Error(ErrorKind::OnSingularSet, "|y| = 0");
  VectorXd out = pot.a(x, y / r) / r;
  if (pot.b) out += pot.b(z);
  return out;
}

GridMinimum grid_minimize(const std::function<double(const VectorXd&)>& f, std::span<const VectorXd> grid,
                          bool refine) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "empty x-grid");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());

  GridMinimum out{grid[best], values[best], 0.0};
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i != best) nearest = std::min(nearest, (grid[i] - grid[best]).norm());
  }
  if (!std::isfinite(nearest)) return out;
  out.spacing = nearest;
  if (!refine) return out;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i == best || (grid[i] - grid[best]).norm() > nearest * (1 + 1e-9)) continue;
    const VectorXd mid = 0.5 * (grid[i] + grid[best]);
    const double v = f(mid);
    if (v < out.value) {
      out.value = v;
      out.argmin = mid;
    }
  }
  return out;
}

}  // namespace magreg
