#include "magreg/circle_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magreg/detail/parallel.hpp"
#include "magreg/errors.hpp"
#include "magreg/linalg.hpp"

namespace magreg {

namespace {

constexpr double kNegativeClip = -1e-12;
constexpr int kPositivityGrid = 1024;

SpectralResult decompose(const Eigen::MatrixXcd& h, int truncation, int n_eigs) {
  const auto eig = hermitian_eigen(h);
  SpectralResult out;
  out.truncation = truncation;
  out.eigenvalues = eig.values.head(n_eigs);
  out.eigenvectors = eig.vectors.leftCols(n_eigs);
  for (int k = 0; k < n_eigs; ++k) {
    const Eigen::VectorXcd v = out.eigenvectors.col(k);
    const double r = (h * v - out.eigenvalues(k) * v).norm() / v.norm();
    out.residual = std::max(out.residual, r);
  }
  return out;
}

}  // namespace

AngularPotential1D::AngularPotential1D(TrigPoly alpha, TrigPoly h) : alpha_(std::move(alpha)), h_(std::move(h)) {
  if (!alpha_.is_real(1e-12) || !h_.is_real(1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "alpha and h must be real trigonometric polynomials");
  }
  const int n = std::max(kPositivityGrid, 8 * h_.degree() + 1);
  double lowest = 0;
  for (const auto& v : h_.sample(n)) lowest = std::min(lowest, v.real());
  if (lowest < kNegativeClip) {
    throw Error(ErrorKind::NegativePotential, "h takes the value " + std::to_string(lowest));
  }
  if (lowest < 0) h_ += TrigPoly::constant(-lowest);
}

Complex SpectralResult::eigenfunction(int k, double theta) const {
  const int kk = truncation;
  Complex acc{};
  for (int j = -kk; j <= kk; ++j) acc += eigenvectors(j + kk, k) * std::polar(1.0, j * theta);
  return acc / std::sqrt(2.0 * std::numbers::pi);
}

std::vector<int> SpectralResult::multiplicities(double rel_tol) const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k) {
    const double prev = k > 0 ? eigenvalues(k - 1) : 0.0;
    if (k > 0 && std::abs(eigenvalues(k) - prev) <= rel_tol * std::max(1.0, std::abs(eigenvalues(k)))) {
      ++out.back();
    } else {
      out.push_back(1);
    }
  }
  return out;
}

TrigPoly tangential_component(std::span<const Eigen::Vector2d> p_samples, double tol) {
  const auto n = static_cast<int>(p_samples.size());
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "need at least 3 samples");
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    const Eigen::Vector2d radial(std::cos(t), std::sin(t));
    const Eigen::Vector2d tangent(-std::sin(t), std::cos(t));
    const auto& p = p_samples[static_cast<std::size_t>(i)];
    if (std::abs(p.dot(radial)) > tol) {
      throw Error(ErrorKind::NotTangential, "radial component " + std::to_string(p.dot(radial)));
    }
    alpha[static_cast<std::size_t>(i)] = p.dot(tangent);
  }
  return TrigPoly::project(std::span<const double>(alpha), (n - 1) / 2).trimmed();
}

Eigen::MatrixXcd assemble_galerkin(const AngularPotential1D& pot, int truncation) {
  if (truncation < pot.degree()) {
    throw Error(ErrorKind::TruncationTooSmall,
                "K=" + std::to_string(truncation) + " below degree " + std::to_string(pot.degree()));
  }
  const int k_max = truncation;
  const int da = pot.alpha().degree();
  const int rows = 2 * (k_max + da) + 1;
  const int cols = 2 * k_max + 1;

  // (i∂ + α) e_k = Σ_l (α_{l−k} − k δ_{lk}) e_l, with l spilling past ±K.
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(rows, cols);
  for (int k = -k_max; k <= k_max; ++k) {
    for (int m = -da; m <= da; ++m) p(k + m + k_max + da, k + k_max) += pot.alpha().coeff(m);
    p(k + k_max + da, k + k_max) -= static_cast<double>(k);
  }
  Eigen::MatrixXcd h = p.adjoint() * p;
  for (int j = -k_max; j <= k_max; ++j) {
    for (int k = -k_max; k <= k_max; ++k) h(j + k_max, k + k_max) += pot.h().coeff(j - k);
  }
  return h;
}

double rayleigh_quotient(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v) {
  return v.dot(h * v).real() / v.squaredNorm();
}

SpectralResult solve_spectrum(const AngularPotential1D& pot, int truncation, int n_eigs, const SpectrumOptions& opts) {
  if (n_eigs < 1 || n_eigs > 2 * truncation + 1) {
    throw Error(ErrorKind::InvalidArgument, "need 1 <= n_eigs <= 2K+1");
  }
  int k = std::max(truncation, pot.degree());
  SpectralResult current = decompose(assemble_galerkin(pot, k), k, n_eigs);
  while (2 * k <= opts.max_truncation) {
    SpectralResult finer = decompose(assemble_galerkin(pot, 2 * k), 2 * k, n_eigs);
    const double change = std::abs(finer.eigenvalues(0) - current.eigenvalues(0));
    const bool converged = change < opts.rel_tol * std::max(1.0, std::abs(finer.eigenvalues(0)));
    current = std::move(finer);
    k *= 2;
    if (converged) return current;
  }
  throw Error(ErrorKind::NoConvergence, "mu1 not converged at K=" + std::to_string(k));
}

SpectralResult full_basis(const AngularPotential1D& pot, int truncation) {
  return decompose(assemble_galerkin(pot, truncation), truncation, 2 * truncation + 1);
}

std::vector<SpectralResult> solve_spectra(std::span<const AngularPotential1D> pots, int truncation, int n_eigs,
                                          const SpectrumOptions& opts) {
  std::vector<SpectralResult> out(pots.size());
  detail::parallel_for(pots.size(), [&](std::size_t i) { out[i] = solve_spectrum(pots[i], truncation, n_eigs, opts); });
  return out;
}

GaugeReduction gauge_reduce(const AngularPotential1D& pot) {
  const double flux = pot.flux();
  const int d = pot.alpha().degree();
  std::vector<Complex> chi(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) {
    if (k != 0) chi[static_cast<std::size_t>(k + d)] = pot.alpha().coeff(k) / Complex(0.0, static_cast<double>(k));
  }
  return GaugeReduction{flux, AngularPotential1D(TrigPoly::constant(flux), pot.h()), TrigPoly(std::move(chi))};
}

}  // namespace magreg
