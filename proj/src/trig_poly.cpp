#include "magreg/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magreg/errors.hpp"

namespace magreg {

TrigPoly::TrigPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 == 0) throw Error(ErrorKind::InvalidArgument, "TrigPoly needs 2D+1 coefficients");
}

TrigPoly TrigPoly::constant(Complex c) { return TrigPoly(std::vector<Complex>{c}); }

TrigPoly TrigPoly::from_real(double a0, std::span<const double> cos_coeffs, std::span<const double> sin_coeffs) {
  const int deg = static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size()));
  std::vector<Complex> c(static_cast<std::size_t>(2 * deg + 1));
  c[static_cast<std::size_t>(deg)] = a0;
  for (int k = 1; k <= deg; ++k) {
    const double a = k <= static_cast<int>(cos_coeffs.size()) ? cos_coeffs[static_cast<std::size_t>(k - 1)] : 0.0;
    const double b = k <= static_cast<int>(sin_coeffs.size()) ? sin_coeffs[static_cast<std::size_t>(k - 1)] : 0.0;
    // a cos kθ + b sin kθ = (a - ib)/2 e^{ikθ} + (a + ib)/2 e^{-ikθ}
    c[static_cast<std::size_t>(deg + k)] = Complex(a, -b) * 0.5;
    c[static_cast<std::size_t>(deg - k)] = Complex(a, b) * 0.5;
  }
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::monomial(int k, Complex c) {
  const int deg = std::abs(k);
  std::vector<Complex> coeffs(static_cast<std::size_t>(2 * deg + 1));
  coeffs[static_cast<std::size_t>(deg + k)] = c;
  return TrigPoly(std::move(coeffs));
}

TrigPoly TrigPoly::project(std::span<const Complex> samples, int max_degree) {
  const auto n = static_cast<int>(samples.size());
  if (max_degree < 0 || n <= 2 * max_degree) {
    throw Error(ErrorKind::InvalidArgument, "projection grid too coarse for the requested degree");
  }
  std::vector<Complex> c(static_cast<std::size_t>(2 * max_degree + 1));
  for (int k = -max_degree; k <= max_degree; ++k) {
    Complex acc{};
    for (int i = 0; i < n; ++i) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) * i / n;
      acc += samples[static_cast<std::size_t>(i)] * Complex(std::cos(phase), std::sin(phase));
    }
    c[static_cast<std::size_t>(k + max_degree)] = acc / static_cast<double>(n);
  }
  return TrigPoly(std::move(c));
}

TrigPoly TrigPoly::project(std::span<const double> samples, int max_degree) {
  std::vector<Complex> z(samples.begin(), samples.end());
  TrigPoly p = project(std::span<const Complex>(z), max_degree);
  // Enforce exact Hermitian symmetry for real data.
  const int d = p.degree();
  for (int k = 0; k <= d; ++k) {
    const Complex avg = 0.5 * (p.coeffs_[static_cast<std::size_t>(d + k)] + std::conj(p.coeffs_[static_cast<std::size_t>(d - k)]));
    p.coeffs_[static_cast<std::size_t>(d + k)] = avg;
    p.coeffs_[static_cast<std::size_t>(d - k)] = std::conj(avg);
  }
  return p;
}

Complex TrigPoly::coeff(int k) const {
  const int d = degree();
  if (k < -d || k > d) return {};
  return coeffs_[static_cast<std::size_t>(k + d)];
}

Complex TrigPoly::operator()(double theta) const {
  const int d = degree();
  Complex acc{};
  for (int k = -d; k <= d; ++k) acc += coeffs_[static_cast<std::size_t>(k + d)] * std::polar(1.0, k * theta);
  return acc;
}

Complex TrigPoly::derivative(double theta) const {
  const int d = degree();
  Complex acc{};
  for (int k = -d; k <= d; ++k) {
    acc += Complex(0.0, static_cast<double>(k)) * coeffs_[static_cast<std::size_t>(k + d)] * std::polar(1.0, k * theta);
  }
  return acc;
}

bool TrigPoly::is_real(double tol) const {
  const int d = degree();
  for (int k = 0; k <= d; ++k) {
    if (std::abs(coeff(k) - std::conj(coeff(-k))) > tol) return false;
  }
  return true;
}

double TrigPoly::l2_norm_squared() const {
  double s = 0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return 2.0 * std::numbers::pi * s;
}

TrigPoly TrigPoly::trimmed(double rel_tol) const {
  double peak = 0;
  for (const auto& c : coeffs_) peak = std::max(peak, std::abs(c));
  int d = degree();
  while (d > 0 && std::abs(coeff(d)) <= rel_tol * peak && std::abs(coeff(-d)) <= rel_tol * peak) --d;
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = coeff(k);
  return TrigPoly(std::move(c));
}

std::vector<Complex> TrigPoly::sample(int n) const {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (*this)(2.0 * std::numbers::pi * i / n);
  return out;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  const int d = std::max(degree(), o.degree());
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int k = -d; k <= d; ++k) c[static_cast<std::size_t>(k + d)] = coeff(k) + o.coeff(k);
  coeffs_ = std::move(c);
  return *this;
}

TrigPoly& TrigPoly::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  const int da = a.degree();
  const int db = b.degree();
  const int d = da + db;
  std::vector<Complex> c(static_cast<std::size_t>(2 * d + 1));
  for (int i = -da; i <= da; ++i) {
    for (int j = -db; j <= db; ++j) c[static_cast<std::size_t>(i + j + d)] += a.coeff(i) * b.coeff(j);
  }
  return TrigPoly(std::move(c));
}

}  // namespace magreg
