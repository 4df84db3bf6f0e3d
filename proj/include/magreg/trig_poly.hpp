#pragma once

#include <complex>
#include <span>
#include <vector>

namespace magreg {

using Complex = std::complex<double>;

/// Trigonometric polynomial f(θ) = Σ_{|k|≤D} c_k e^{ikθ} on the circle.
/// Real-valued polynomials are the ones with c_{-k} = conj(c_k).
class TrigPoly {
 public:
  TrigPoly() : coeffs_{Complex{}} {}
  /// `coeffs` has odd length 2D+1 and is indexed by k + D.
  explicit TrigPoly(std::vector<Complex> coeffs);

  static TrigPoly constant(Complex c);
  /// a0 + Σ_k (cos_coeffs[k-1] cos kθ + sin_coeffs[k-1] sin kθ)
  static TrigPoly from_real(double a0, std::span<const double> cos_coeffs, std::span<const double> sin_coeffs);
  /// Single exponential e^{ikθ} scaled by `c`.
  static TrigPoly monomial(int k, Complex c = 1.0);
  /// Discrete Fourier projection of samples on the uniform grid θ_i = 2πi/N,
  /// keeping |k| ≤ max_degree (requires N > 2·max_degree).
  static TrigPoly project(std::span<const Complex> samples, int max_degree);
  static TrigPoly project(std::span<const double> samples, int max_degree);

  int degree() const { return static_cast<int>(coeffs_.size() / 2); }
  Complex coeff(int k) const;
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex operator()(double theta) const;
  Complex derivative(double theta) const;
  Complex mean() const { return coeff(0); }

  bool is_real(double tol = 1e-14) const;
  /// ∫_0^{2π} |f|² dθ
  double l2_norm_squared() const;
  /// Drops trailing modes whose magnitude is below rel_tol·max|c_k|.
  TrigPoly trimmed(double rel_tol = 1e-14) const;
  std::vector<Complex> sample(int n) const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator*=(Complex s);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator*(TrigPoly a, Complex s) { return a *= s; }
  friend TrigPoly operator*(Complex s, TrigPoly a) { return a *= s; }
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);

 private:
  std::vector<Complex> coeffs_;
};

}  // namespace magreg
