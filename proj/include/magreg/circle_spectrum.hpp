#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <span>
#include <vector>

#include "magreg/trig_poly.hpp"

namespace magreg {

/// Magnetic data on S¹: p(θ) = α(θ)(−sin θ, cos θ) and electric term h(θ) ≥ 0,
/// both real trigonometric polynomials.
class AngularPotential1D {
 public:
  /// Validates that α and h are real and that h ≥ 0 on a dense grid; tiny
  /// negative values down to −1e−12 are treated as interpolation noise.
  AngularPotential1D(TrigPoly alpha, TrigPoly h = TrigPoly{});

  static AngularPotential1D constant_flux(double flux) { return AngularPotential1D(TrigPoly::constant(flux)); }

  const TrigPoly& alpha() const { return alpha_; }
  const TrigPoly& h() const { return h_; }
  double flux() const { return alpha_.mean().real(); }
  int degree() const { return std::max(alpha_.degree(), h_.degree()); }

 private:
  TrigPoly alpha_;
  TrigPoly h_;
};

/// Ascending eigenpairs of the Galerkin matrix in the basis e_j = e^{ijθ}/√(2π),
/// j = −K..K (eigenvector row j + K).
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  int truncation = 0;
  double residual = 0;  // max ‖Hv − μv‖/‖v‖ over the returned pairs

  int size() const { return static_cast<int>(eigenvalues.size()); }
  /// ψ_k(θ) for the zero-based eigen-index k.
  Complex eigenfunction(int k, double theta) const;
  /// Sizes of clusters of eigenvalues equal within `rel_tol` (the m_k).
  std::vector<int> multiplicities(double rel_tol = 1e-8) const;
};

/// Tangential magnitude α(θᵢ) = p(θᵢ)·(−sin θᵢ, cos θᵢ) from samples on the
/// uniform grid θᵢ = 2πi/N, projected to a trigonometric polynomial.
/// Throws NotTangential if |p·θ| exceeds `tol` anywhere.
TrigPoly tangential_component(std::span<const Eigen::Vector2d> p_samples, double tol = 1e-10);

/// H[j,k] = ⟨(i∂+α)e_k, (i∂+α)e_j⟩ + ⟨h e_k, e_j⟩, assembled exactly from the
/// Fourier coefficients. Throws TruncationTooSmall if K < degree.
Eigen::MatrixXcd assemble_galerkin(const AngularPotential1D& pot, int truncation);

double rayleigh_quotient(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v);

struct SpectrumOptions {
  // Stop doubling K once μ₁ moves less than rel_tol·max(1, |μ₁|).
  double rel_tol = 1e-10;
  int max_truncation = 512;
};

/// Lowest `n_eigs` eigenpairs, doubling K until μ₁ is converged.
SpectralResult solve_spectrum(const AngularPotential1D& pot, int truncation, int n_eigs,
                              const SpectrumOptions& opts = {});

/// All 2K+1 eigenpairs at fixed K (no adaptation): an orthonormal basis of
/// the truncated space.
SpectralResult full_basis(const AngularPotential1D& pot, int truncation);

/// Spectra for many potentials, evaluated concurrently; output order matches input.
std::vector<SpectralResult> solve_spectra(std::span<const AngularPotential1D> pots, int truncation, int n_eigs,
                                          const SpectrumOptions& opts = {});

struct GaugeReduction {
  double flux = 0;
  AngularPotential1D reduced;
  TrigPoly phase;  // χ with χ′ = α − ᾱ, zero mean
};

/// Replaces α by its mean ᾱ; the spectrum is unchanged by the gauge e^{−iχ}.
GaugeReduction gauge_reduce(const AngularPotential1D& pot);

}  // namespace magreg
