#pragma once

// Dense eigen-kernels used by the spectral modules. Eigen provides the
// storage types only; the decompositions are implemented here.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "magreg/errors.hpp"

namespace magreg {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Implicit-shift QL sweeps allowed per eigenvalue before giving up.
inline constexpr int kMaxQlSweeps = 50;

template <typename Scalar>
struct SymmetricEigen {
  VectorX<Scalar> values;   // ascending
  MatrixX<Scalar> vectors;  // column k pairs with values[k]
};

template <typename Scalar>
struct HermitianEigen {
  VectorX<Scalar> values;                // ascending
  MatrixX<std::complex<Scalar>> vectors;  // orthonormal columns
};

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form. On exit
// `v` holds the accumulated orthogonal transform, `d` the diagonal and `e`
// the subdiagonal in e[1..n-1].
template <typename Scalar>
void householder_tridiagonalize(MatrixX<Scalar>& v, VectorX<Scalar>& d, VectorX<Scalar>& e) {
  const Eigen::Index n = v.rows();
  d.resize(n);
  e.setZero(n);
  for (Eigen::Index j = 0; j < n; ++j) d(j) = v(n - 1, j);

  for (Eigen::Index i = n - 1; i > 0; --i) {
    Scalar scale = 0;
    Scalar h = 0;
    for (Eigen::Index k = 0; k < i; ++k) scale += std::abs(d(k));
    if (scale == Scalar(0)) {
      e(i) = d(i - 1);
      for (Eigen::Index j = 0; j < i; ++j) {
        d(j) = v(i - 1, j);
        v(i, j) = 0;
        v(j, i) = 0;
      }
    } else {
      for (Eigen::Index k = 0; k < i; ++k) {
        d(k) /= scale;
        h += d(k) * d(k);
      }
      Scalar f = d(i - 1);
      Scalar g = std::sqrt(h);
      if (f > 0) g = -g;
      e(i) = scale * g;
      h -= f * g;
      d(i - 1) = f - g;
      for (Eigen::Index j = 0; j < i; ++j) e(j) = 0;

      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        v(j, i) = f;
        g = e(j) + v(j, j) * f;
        for (Eigen::Index k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d(k);
          e(k) += v(k, j) * f;
        }
        e(j) = g;
      }
      f = 0;
      for (Eigen::Index j = 0; j < i; ++j) {
        e(j) /= h;
        f += e(j) * d(j);
      }
      const Scalar hh = f / (h + h);
      for (Eigen::Index j = 0; j < i; ++j) e(j) -= hh * d(j);
      for (Eigen::Index j = 0; j < i; ++j) {
        f = d(j);
        g = e(j);
        for (Eigen::Index k = j; k <= i - 1; ++k) v(k, j) -= (f * e(k) + g * d(k));
        d(j) = v(i - 1, j);
        v(i, j) = 0;
      }
    }
    d(i) = h;
  }

  for (Eigen::Index i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1;
    const Scalar h = d(i + 1);
    if (h != Scalar(0)) {
      for (Eigen::Index k = 0; k <= i; ++k) d(k) = v(k, i + 1) / h;
      for (Eigen::Index j = 0; j <= i; ++j) {
        Scalar g = 0;
        for (Eigen::Index k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (Eigen::Index k = 0; k <= i; ++k) v(k, j) -= g * d(k);
      }
    }
    for (Eigen::Index k = 0; k <= i; ++k) v(k, i + 1) = 0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    d(j) = v(n - 1, j);
    v(n - 1, j) = 0;
  }
  v(n - 1, n - 1) = 1;
  e(0) = 0;
}

// Implicit-shift QL on the tridiagonal (d, e) produced above, accumulating
// rotations into `v`.
template <typename Scalar>
void tridiagonal_ql(MatrixX<Scalar>& v, VectorX<Scalar>& d, VectorX<Scalar>& e) {
  const Eigen::Index n = d.size();
  for (Eigen::Index i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0;

  Scalar f = 0;
  Scalar tst1 = 0;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Eigen::Index m = l;
    while (m < n - 1) {
      if (std::abs(e(m)) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int sweeps = 0;
      do {
        if (++sweeps > kMaxQlSweeps) {
          throw Error(ErrorKind::NoConvergence, "implicit QL exceeded the sweep cap");
        }
        Scalar g = d(l);
        Scalar p = (d(l + 1) - g) / (Scalar(2) * e(l));
        Scalar r = std::hypot(p, Scalar(1));
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const Scalar dl1 = d(l + 1);
        Scalar h = g - d(l);
        for (Eigen::Index i = l + 2; i < n; ++i) d(i) -= h;
        f += h;

        p = d(m);
        Scalar c = 1, c2 = 1, c3 = 1;
        const Scalar el1 = e(l + 1);
        Scalar s = 0, s2 = 0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
          for (Eigen::Index k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += f;
    e(l) = 0;
  }
}

}  // namespace detail

/// Full eigendecomposition of a real symmetric matrix (upper and lower
/// triangles are both read; the caller guarantees symmetry).
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> symmetric_eigen(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  SymmetricEigen<Scalar> out;
  if (n == 0) return out;
  MatrixX<Scalar> v = a;
  VectorX<Scalar> d, e;
  if (n == 1) {
    out.values = v.col(0);
    out.vectors = MatrixX<Scalar>::Identity(1, 1);
    return out;
  }
  detail::householder_tridiagonalize(v, d, e);
  detail::tridiagonal_ql(v, d, e);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return d(i) < d(j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = d(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Eigendecomposition of a complex Hermitian matrix H = A + iB through the
/// real symmetric embedding [[A, -B], [B, A]], whose spectrum is that of H
/// with every eigenvalue doubled. Each doubled cluster is reduced back to an
/// orthonormal complex basis by pivoted Gram-Schmidt.
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> hermitian_eigen(const Eigen::MatrixBase<Derived>& h,
                                                              typename Derived::RealScalar tol = 1e-10) {
  using Real = typename Derived::RealScalar;
  using Complex = std::complex<Real>;
  const Eigen::Index m = h.rows();
  if (h.cols() != m) throw Error(ErrorKind::InvalidArgument, "hermitian_eigen needs a square matrix");
  HermitianEigen<Real> out;
  if (m == 0) return out;

  const Real scale = std::max(Real(1), h.cwiseAbs().maxCoeff());
  const Real asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) throw Error(ErrorKind::NotHermitian, "asymmetry " + std::to_string(double(asym)));

  MatrixX<Complex> hs = ((h + h.adjoint()) * Real(0.5)).template cast<Complex>();
  MatrixX<Real> embed(2 * m, 2 * m);
  embed.topLeftCorner(m, m) = hs.real();
  embed.bottomRightCorner(m, m) = hs.real();
  embed.topRightCorner(m, m) = -hs.imag();
  embed.bottomLeftCorner(m, m) = hs.imag();
  const auto real_eig = symmetric_eigen(embed);

  std::vector<VectorX<Complex>> accepted;
  std::vector<Real> accepted_values;
  accepted.reserve(static_cast<std::size_t>(m));

  const Real cluster_tol = Real(1e-9) * std::max(Real(1), real_eig.values.cwiseAbs().maxCoeff());
  Eigen::Index start = 0;
  while (start < 2 * m) {
    Eigen::Index stop = start + 1;
    while (stop < 2 * m && real_eig.values(stop) - real_eig.values(stop - 1) <= cluster_tol) ++stop;

    std::vector<VectorX<Complex>> candidates;
    for (Eigen::Index k = start; k < stop; ++k) {
      VectorX<Complex> z(m);
      for (Eigen::Index i = 0; i < m; ++i) z(i) = Complex(real_eig.vectors(i, k), real_eig.vectors(i + m, k));
      candidates.push_back(std::move(z));
    }
    const auto wanted = static_cast<std::size_t>((stop - start) / 2);
    for (std::size_t taken = 0; taken < wanted; ++taken) {
      std::size_t best = 0;
      Real best_norm = -1;
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        const Real nrm = candidates[c].norm();
        if (nrm > best_norm) {
          best_norm = nrm;
          best = c;
        }
      }
      VectorX<Complex> q = candidates[best] / best_norm;
      for (auto& c : candidates) c -= q * q.dot(c);
      accepted_values.push_back(std::real(q.dot(hs * q)));
      accepted.push_back(std::move(q));
    }
    start = stop;
  }

  // An odd cluster size means roundoff split a doubled pair.
  if (static_cast<Eigen::Index>(accepted.size()) != m) {
    throw Error(ErrorKind::NoConvergence, "could not recover the complex eigenbasis");
  }

  std::vector<std::size_t> order(accepted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return accepted_values[i] < accepted_values[j]; });
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = accepted_values[src];
    out.vectors.col(k) = accepted[src];
  }
  return out;
}

/// Number of eigenvalues strictly below `x` of the symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (size n-1).
template <typename Scalar>
int sturm_count(std::span<const Scalar> diag, std::span<const Scalar> off, Scalar x) {
  int count = 0;
  Scalar q = 1;
  const Scalar tiny = std::numeric_limits<Scalar>::min() / std::numeric_limits<Scalar>::epsilon();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const Scalar b2 = i == 0 ? Scalar(0) : off[i - 1] * off[i - 1];
    q = diag[i] - x - (i == 0 ? Scalar(0) : b2 / q);
    if (std::abs(q) < tiny) q = -tiny;
    if (q < 0) ++count;
  }
  return count;
}

/// The k-th smallest eigenvalue (k zero-based) of a symmetric tridiagonal
/// matrix by bisection on the Sturm count. The bracket is the Gershgorin
/// enclosure; `abs_tol` is raised to a few ulps of the bracket if needed.
template <typename Scalar>
Scalar tridiagonal_eigenvalue(std::span<const Scalar> diag, std::span<const Scalar> off, int k,
                              Scalar abs_tol) {
  const std::size_t n = diag.size();
  Scalar lo = std::numeric_limits<Scalar>::max();
  Scalar hi = std::numeric_limits<Scalar>::lowest();
  for (std::size_t i = 0; i < n; ++i) {
    Scalar radius = 0;
    if (i > 0) radius += std::abs(off[i - 1]);
    if (i + 1 < n) radius += std::abs(off[i]);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  const Scalar floor_tol =
      Scalar(4) * std::numeric_limits<Scalar>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  const Scalar tol = std::max(abs_tol, floor_tol);
  while (hi - lo > tol) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(diag, off, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace magreg
