#include <doctest.h>

#include "hexscat/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace hexscat;

namespace {

Eigen::MatrixXcd random_hermitian(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0, 1);
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = Complex(d(rng), d(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("operator norm against a dense SVD") {
  const int n = 60;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d(0, 1);
  Eigen::MatrixXcd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = Complex(d(rng), d(rng));
  LinOp op = [&](const CVec& v) { return CVec(a * v); };
  LinOp opT = [&](const CVec& v) { return CVec(a.adjoint() * v); };
  const double got = operator_norm(op, opT, n, {1e-9, 2000, 5});
  const double exact = a.jacobiSvd().singularValues()[0];
  CHECK(got == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("extreme eigenvalues by Lanczos") {
  const int n = 80;
  Eigen::MatrixXcd a = random_hermitian(n, 17);
  LinOp op = [&](const CVec& v) { return CVec(a * v); };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  CHECK(hermitian_extreme_eig(op, n, true) ==
        doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-7));
  CHECK(hermitian_extreme_eig(op, n, false) ==
        doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-7));
}

TEST_CASE("gmres solves a shifted Hermitian system") {
  const int n = 70;
  Eigen::MatrixXcd a = random_hermitian(n, 23);
  a += Complex(0, 0.3) * Eigen::MatrixXcd::Identity(n, n);
  LinOp op = [&](const CVec& v) { return CVec(a * v); };
  CVec b = random_unit_vector(n, 9);
  GmresResult r = gmres(op, b, {70, 10, 1e-10});
  CHECK(r.converged);
  CHECK((a * r.x - b).norm() < 1e-9);
}

TEST_CASE("Bessel ladder against the standard library") {
  for (double z : {0.5, 3.0, 12.0, 80.0}) {
    auto j = bessel_j_ladder(30, z);
    for (int k = 0; k <= 30; ++k) {
      CHECK(std::abs(j[k] - std::cyl_bessel_j(k, z)) < 1e-12);
    }
  }
}

TEST_CASE("Chebyshev expansion of exp(-itx) and of a window") {
  const double radius = 3.4;
  ChebyshevSeries es = ChebyshevSeries::of_exp(2.7, radius, 1e-12);
  for (double x : {-3.3, -1.0, 0.0, 0.77, 3.12}) {
    const Complex expected = std::exp(Complex(0, -2.7 * x));
    CHECK(std::abs(es.eval(x) - expected) < 1e-11);
  }
  ChebyshevSeries em = ChebyshevSeries::of_exp(-5.0, radius, 1e-12);
  CHECK(std::abs(em.eval(1.3) - std::exp(Complex(0, 6.5))) < 1e-11);

  SmoothWindow w{1.2, 2.8, 0.1};
  ChebyshevSeries cw =
      ChebyshevSeries::of_function([&](double x) { return w(x); }, radius, 1e-9);
  CHECK(cw.tail_estimate() <= 1e-9);
  for (double x : {-2.0, 0.5, 1.5, 2.0, 2.9}) {
    CHECK(std::abs(cw.eval(x) - w(x)) < 2e-9);
  }
}

TEST_CASE("Chebyshev operator application matches the dense exponential") {
  const int n = 40;
  Eigen::MatrixXcd a = random_hermitian(n, 31);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const double radius = 1.05 * std::max(std::abs(es.eigenvalues().minCoeff()),
                                        std::abs(es.eigenvalues().maxCoeff()));
  const double t = 3.3;
  ChebyshevSeries prop = ChebyshevSeries::of_exp(t, radius, 1e-13);
  LinOp op = [&](const CVec& v) { return CVec(a * v); };
  CVec v = random_unit_vector(n, 3);
  CVec got = prop.apply(op, v);
  Eigen::VectorXcd phases = (Complex(0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
  CVec expected = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * v;
  CHECK((got - expected).norm() < 1e-11);
}

TEST_CASE("filtered subspace iteration finds interval eigenvalues") {
  const int n = 120;
  Eigen::MatrixXcd a = random_hermitian(n, 41);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const double radius = 1.05 * es.eigenvalues().cwiseAbs().maxCoeff();
  // pick a window holding a handful of eigenvalues
  const double lo = es.eigenvalues()[n / 2] - 1e-9;
  const double hi = es.eigenvalues()[n / 2 + 3] + 1e-9;
  LinOp op = [&](const CVec& v) { return CVec(a * v); };
  FilteredEigOpts opts;
  opts.block = 12;
  opts.iters = 14;
  opts.filter_degree = 400;
  opts.residual_tol = 1e-6;
  auto pairs = filtered_interval_eigs(op, n, lo, hi, radius, opts);
  REQUIRE(pairs.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(pairs[k].value == doctest::Approx(es.eigenvalues()[n / 2 + k]).epsilon(1e-7));
  }
}
