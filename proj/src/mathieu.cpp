#include "magreg/mathieu.hpp"

#include <cmath>
#include <numbers>

#include "magreg/detail/parallel.hpp"
#include "magreg/errors.hpp"
#include "magreg/linalg.hpp"

namespace magreg {

namespace {

constexpr double kCutoffConvergence = 1e-10;
constexpr double kMaxCutoff = 8192.0;

}  // namespace

TiltModel TiltModel::from_beta(double beta) {
  if (!(beta >= 0.0 && beta < std::numbers::pi / 2)) {
    throw Error(ErrorKind::BetaOutOfRange, "beta must lie in [0, pi/2), got " + std::to_string(beta));
  }
  const double t = std::tan(beta);
  const double g = t * t / 8.0;
  return TiltModel{beta, g, g / 2.0};
}

double TiltModel::current(double mu0) const { return 1.0 / (mu0 * std::cos(beta)); }

AngularPotential1D TiltModel::angular_potential() const {
  const double cos_terms[] = {0.0, -g};
  return AngularPotential1D(TrigPoly::constant(0.5), TrigPoly::from_real(g, cos_terms, {}));
}

MathieuTridiagonal antiperiodic_tridiagonal(double q, double cutoff) {
  if (q < 0) throw Error(ErrorKind::NegativeQ, "q = " + std::to_string(q));
  MathieuTridiagonal t;
  const auto m_lo = static_cast<long>(std::ceil((-cutoff - 0.5) / 2.0));
  const auto m_hi = static_cast<long>(std::floor((cutoff - 0.5) / 2.0));
  for (long m = m_lo; m <= m_hi; ++m) {
    const double k = 0.5 + 2.0 * static_cast<double>(m);
    t.orders.push_back(k);
    t.diag.push_back(k * k);
  }
  t.off.assign(t.diag.empty() ? 0 : t.diag.size() - 1, q);
  return t;
}

MathieuCharValues antiperiodic_char_values(double q, int count, double cutoff, double abs_tol) {
  if (q < 0) throw Error(ErrorKind::NegativeQ, "q = " + std::to_string(q));
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "count must be positive");
  cutoff = std::max(cutoff, 8.0);

  auto lowest = [&](double kc, int how_many) {
    const auto t = antiperiodic_tridiagonal(q, kc);
    if (static_cast<int>(t.diag.size()) < how_many) {
      throw Error(ErrorKind::InvalidArgument, "cutoff too small for the requested count");
    }
    std::vector<double> vals;
    for (int k = 0; k < how_many; ++k) {
      vals.push_back(tridiagonal_eigenvalue<double>(t.diag, t.off, k, abs_tol));
    }
    return vals;
  };

  // Make sure the chain is long enough to hold `count` values.
  while (static_cast<int>(antiperiodic_tridiagonal(q, cutoff).diag.size()) < count + 2) cutoff *= 2;

  double a1 = lowest(cutoff, 1).front();
  while (cutoff * 2 <= kMaxCutoff) {
    const double a1_fine = lowest(2 * cutoff, 1).front();
    const bool converged = std::abs(a1_fine - a1) <= kCutoffConvergence * std::max(1.0, std::abs(a1_fine));
    cutoff *= 2;
    a1 = a1_fine;
    if (converged) return MathieuCharValues{lowest(cutoff, count), cutoff, 2};
  }
  throw Error(ErrorKind::NoConvergence, "Mathieu truncation did not converge");
}

double asymptotic_a(double q, int h) { return -2.0 * q + 2.0 * (2.0 * h + 1.0) * std::sqrt(q); }

double mu1_from_tilt(double beta) {
  const auto tilt = TiltModel::from_beta(beta);
  return 2.0 * tilt.q + antiperiodic_char_values(tilt.q, 1).values.front();
}

std::vector<double> mu1_from_tilt(std::span<const double> betas) {
  std::vector<double> out(betas.size());
  detail::parallel_for(betas.size(), [&](std::size_t i) { out[i] = mu1_from_tilt(betas[i]); });
  return out;
}

double tilt_threshold(double target_mu, double beta_max, double beta_tol) {
  double lo = 0.0;
  double hi = beta_max;
  if (mu1_from_tilt(lo) >= target_mu || mu1_from_tilt(hi) < target_mu) {
    throw Error(ErrorKind::InvalidArgument, "target mu not bracketed by [0, beta_max]");
  }
  while (hi - lo > beta_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mu1_from_tilt(mid) < target_mu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace magreg
