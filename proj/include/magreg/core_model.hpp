#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <vector>

#include "magreg/errors.hpp"
#include "magreg/linalg.hpp"

namespace magreg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Absolute tolerance for symmetry, transversality and block-vanishing checks.
inline constexpr double kDefaultTol = 1e-10;

/// Total dimension d and codimension n of the singular set Σ₀ = {|y| = 0}.
struct ProblemGeometry {
  int d = 3;
  int n = 2;

  static ProblemGeometry make(int d, int n);

  int x_dim() const { return d - n; }
  VectorXd x_part(const VectorXd& z) const { return z.head(x_dim()); }
  VectorXd y_part(const VectorXd& z) const { return z.tail(n); }
  VectorXd join(const VectorXd& x, const VectorXd& y) const;
};

/// A d×d matrix-valued map z ↦ M(z): either constant or an arbitrary
/// callable sampled at user-chosen points.
class MatrixField {
 public:
  using Fn = std::function<MatrixXd(const VectorXd&)>;

  static MatrixField constant(MatrixXd m);
  static MatrixField identity(int dim) { return constant(MatrixXd::Identity(dim, dim)); }
  static MatrixField sampled(int dim, Fn fn);

  MatrixXd operator()(const VectorXd& z) const;
  int dim() const { return dim_; }
  bool is_constant() const { return !fn_; }

 private:
  int dim_ = 0;
  MatrixXd constant_;
  Fn fn_;
};

struct EllipticityBounds {
  double lambda = 0;
  double Lambda = 0;
};

/// Min and max eigenvalue of N over all probes. Throws NonSymmetric or
/// NotElliptic.
EllipticityBounds validate_ellipticity(const MatrixField& metric, std::span<const VectorXd> probes,
                                       double tol = kDefaultTol);

/// M together with the metric N = MᵀM and its block split
/// N = [[N₁, N₂], [N₂ᵀ, N₃]] with N₃ of size n×n.
class AnisotropyModel {
 public:
  struct Blocks {
    MatrixXd n1, n2, n3;
  };

  AnisotropyModel(ProblemGeometry geometry, MatrixField m);
  static AnisotropyModel identity(ProblemGeometry geometry);

  const ProblemGeometry& geometry() const { return geometry_; }
  const MatrixField& m_field() const { return m_; }
  MatrixXd m(const VectorXd& z) const { return m_(z); }
  MatrixXd metric(const VectorXd& z) const;
  MatrixField metric_field() const;
  Blocks blocks(const VectorXd& z) const;

  /// max over x of max|N₂(x, 0)|; the structure hypothesis asks for zero.
  double block_residual(std::span<const VectorXd> x_points) const;

 private:
  ProblemGeometry geometry_;
  MatrixField m_;
};

/// A(z) = a(x, y/|y|)/|y| + b(z).
struct SingularMagneticPotential {
  using AngularFn = std::function<VectorXd(const VectorXd& x, const VectorXd& theta)>;
  using RegularFn = std::function<VectorXd(const VectorXd& z)>;

  ProblemGeometry geometry;
  AngularFn a;
  RegularFn b;  // empty means b ≡ 0
  double mu0 = 1.0;
};

/// Aharonov–Bohm potential a(x, θ) = flux·(0, …, 0, -θ₂, θ₁) (requires n = 2).
SingularMagneticPotential ab_flux_potential(ProblemGeometry geometry, double flux);

struct TransversalitySample {
  VectorXd x;
  VectorXd theta;
  double radius = 0.0;  // M is evaluated at z = (x, radius·θ)
};

/// max over samples of |M⁻¹a(x,θ)·(0,θ)|.
double check_transversality(const MatrixField& m, const SingularMagneticPotential& pot,
                            std::span<const TransversalitySample> samples);

/// Symmetric positive-definite square root via the spectral decomposition.
template <typename Derived>
MatrixX<typename Derived::Scalar> principal_sqrt(const Eigen::MatrixBase<Derived>& s, double tol = kDefaultTol) {
  using Scalar = typename Derived::Scalar;
  if (s.rows() != s.cols()) throw Error(ErrorKind::InvalidArgument, "principal_sqrt needs a square matrix");
  const Scalar scale = std::max(Scalar(1), s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorKind::NotPositiveDefinite, "input is not symmetric");
  }
  const MatrixX<Scalar> sym = (s + s.transpose()) / Scalar(2);
  const auto eig = symmetric_eigen(sym);
  if (eig.values.size() > 0 && eig.values(0) <= Scalar(0)) {
    throw Error(ErrorKind::NotPositiveDefinite, "smallest eigenvalue is not positive");
  }
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal() * eig.vectors.transpose();
}

/// ã(x, θ) = N^{1/2}(x,0)·(M⁻¹a)(x, w/|w|)/|w| with w = N₃^{1/2}(x,0)θ.
VectorXd tilde_a(const AnisotropyModel& model, const SingularMagneticPotential& pot, const VectorXd& x,
                 const VectorXd& theta);

struct HardyConstant {
  double value = 0;
  bool degenerate = true;
};

/// λ·(((n−2)/2)² + μ₁_inf); degenerate when the result is not positive.
HardyConstant hardy_constant(double lambda, int n, double mu1_inf);

enum class CapacityClass { InfiniteCapacity, ZeroCapacity };

const char* to_string(CapacityClass c) noexcept;

/// Magnetic Sobolev capacity of Σ₀: infinite for n = 2, zero for n > 2.
CapacityClass capacity_class(int n);

/// Throws OnSingularSet when |y| = 0.
VectorXd evaluate_A(const SingularMagneticPotential& pot, const VectorXd& z);

/// Grid realisation of an infimum over x: the grid minimum, optionally
/// refined once by evaluating midpoints towards the nearest neighbours.
struct GridMinimum {
  VectorXd argmin;
  double value = 0;
  double spacing = 0;  // distance from the minimiser to its nearest grid neighbour
};

GridMinimum grid_minimize(const std::function<double(const VectorXd&)>& f, std::span<const VectorXd> grid,
                          bool refine = true);

}  // namespace magreg
