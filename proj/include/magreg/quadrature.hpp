#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "magreg/errors.hpp"

namespace magreg {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule, nodes by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "gauss_legendre needs n >= 1");
  GaussRule rule{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().maxCoeff();
}

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename V>
struct KronrodPanel {
  double a, b;
  V value;
  double error;
  bool operator<(const KronrodPanel& o) const { return error < o.error; }
};

template <typename V, typename F>
KronrodPanel<V> kronrod_panel(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = f(c);
  V kronrod = fc * kKronrodWeights[7];
  V gauss = fc * kGauss7Weights[3];
  for (int i = 0; i < 7; ++i) {
    const V sum = f(c - h * kKronrodNodes[static_cast<std::size_t>(i)]) + f(c + h * kKronrodNodes[static_cast<std::size_t>(i)]);
    kronrod += sum * kKronrodWeights[static_cast<std::size_t>(i)];
    if (i % 2 == 1) gauss += sum * kGauss7Weights[static_cast<std::size_t>(i / 2)];
  }
  kronrod *= h;
  gauss *= h;
  return KronrodPanel<V>{a, b, kronrod, magnitude(V(kronrod - gauss))};
}

}  // namespace detail

template <typename V>
struct QuadratureResult {
  V value;
  double error_estimate = 0;
  int panels = 0;
};

/// Globally adaptive Gauss–Kronrod (7/15) on [a, b]: the panel with the
/// largest error estimate is bisected until the summed estimate falls below
/// max(abs_tol, rel_tol·|I|). V is double or an Eigen vector.
template <typename V, typename F>
QuadratureResult<V> integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                                       int max_panels = 2000) {
  std::priority_queue<detail::KronrodPanel<V>> panels;
  panels.push(detail::kronrod_panel<V>(f, a, b));
  V total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  while (error > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (count >= max_panels) throw Error(ErrorKind::NoConvergence, "adaptive quadrature panel cap reached");
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::kronrod_panel<V>(f, worst.a, mid);
    auto right = detail::kronrod_panel<V>(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(std::move(left));
    panels.push(std::move(right));
    ++count;
  }
  // Re-sum to shed the drift of incremental updates.
  V sum = panels.top().value * 0.0;
  double err = 0;
  while (!panels.empty()) {
    sum += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return QuadratureResult<V>{sum, err, count};
}

}  // namespace magreg
