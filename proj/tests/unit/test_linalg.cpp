#include <doctest.h>

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "expect_error.hpp"
#include "magreg/linalg.hpp"

using namespace magreg;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
  return (a + a.transpose()) / 2;
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = {nd(rng), nd(rng)};
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

}  // namespace

TEST_CASE("symmetric_eigen agrees with Eigen's self-adjoint solver") {
  for (int n : {2, 3, 7, 40}) {
    const auto a = random_symmetric(n, 11u + static_cast<unsigned>(n));
    const auto ours = symmetric_eigen(a);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    CHECK((ours.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd resid = a * ours.vectors - ours.vectors * ours.values.asDiagonal();
    CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd gram = ours.vectors.transpose() * ours.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("symmetric_eigen is templated on the scalar") {
  const Eigen::MatrixXf a = random_symmetric(6, 3).cast<float>();
  const auto ours = symmetric_eigen(a);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXf> ref(a);
  CHECK((ours.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-4f);
}

TEST_CASE("symmetric_eigen trivial sizes") {
  CHECK(symmetric_eigen(Eigen::MatrixXd(0, 0)).values.size() == 0);
  Eigen::MatrixXd one(1, 1);
  one << 3.5;
  const auto e = symmetric_eigen(one);
  CHECK(e.values(0) == 3.5);
  CHECK(e.vectors(0, 0) == 1.0);
}

TEST_CASE("symmetric_eigen sorts ascending with repeated values") {
  const Eigen::MatrixXd d = Eigen::Vector4d(2, -1, 2, 0).asDiagonal();
  const auto e = symmetric_eigen(d);
  CHECK(e.values(0) == doctest::Approx(-1));
  CHECK(e.values(1) == doctest::Approx(0));
  CHECK(e.values(2) == doctest::Approx(2));
  CHECK(e.values(3) == doctest::Approx(2));
}

TEST_CASE("hermitian_eigen recovers a prescribed degenerate spectrum") {
  const int n = 9;
  const Eigen::VectorXd spec = (Eigen::VectorXd(n) << 0.25, 0.25, 2.25, 2.25, 3, 6.25, 6.25, 7, 9).finished();
  const auto u = random_unitary(n, 5);
  const Eigen::MatrixXcd h = u * spec.cast<std::complex<double>>().asDiagonal() * u.adjoint();
  const auto e = hermitian_eigen(h);
  CHECK((e.values - spec).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXcd gram = e.vectors.adjoint() * e.vectors;
  CHECK((gram - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXcd resid = h * e.vectors - e.vectors * e.values.cast<std::complex<double>>().asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("hermitian_eigen matches Eigen's complex solver on random input") {
  const auto u = random_unitary(12, 9);
  Eigen::MatrixXcd h = u * u.adjoint();
  std::mt19937 rng(4);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) h(i, j) = {nd(rng), nd(rng)};
  h = (h + h.adjoint()).eval() / 2.0;
  const auto ours = hermitian_eigen(h);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(h);
  CHECK((ours.values - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hermitian_eigen accepts real input and rejects non-Hermitian input") {
  const auto a = random_symmetric(5, 1);
  CHECK((hermitian_eigen(a).values - symmetric_eigen(a).values).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
  bad(0, 1) = {0.0, 1.0};
  EXPECT_ERROR_KIND(hermitian_eigen(bad), ErrorKind::NotHermitian);
}

TEST_CASE("Sturm bisection matches the dense tridiagonal spectrum") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ud(-3, 3);
  const int n = 25;
  std::vector<double> diag(n), off(n - 1);
  for (auto& v : diag) v = ud(rng);
  for (auto& v : off) v = ud(rng);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) t(i, i) = diag[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = off[static_cast<std::size_t>(i)];
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(t);
  for (int k = 0; k < n; ++k) {
    const double v = tridiagonal_eigenvalue<double>(diag, off, k, 1e-13);
    CHECK(std::abs(v - ref.eigenvalues()(k)) < 1e-11);
  }
  CHECK(sturm_count<double>(diag, off, ref.eigenvalues()(0) - 1.0) == 0);
  CHECK(sturm_count<double>(diag, off, ref.eigenvalues()(n - 1) + 1.0) == n);
  CHECK(sturm_count<double>(diag, off, 0.5 * (ref.eigenvalues()(9) + ref.eigenvalues()(10))) == 10);
}
