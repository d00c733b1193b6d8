#include <doctest.h>

#include "hexscat/propagators.hpp"

#include <Eigen/Eigenvalues>
#include <random>

using namespace hexscat;

namespace {

StateVector random_state(const LatticeBox& box, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  StateVector u(box);
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i) {
      u.u1(i, j) = Complex(d(rng), d(rng));
      u.u2(i, j) = Complex(d(rng), d(rng));
    }
  Complex inv(1.0 / norm2(u), 0);
  return inv * u;
}

Eigen::MatrixXcd assemble_dense(const Hamiltonian& ham) {
  const int n = ham.dim();
  Eigen::MatrixXcd m(n, n);
  CVec e = CVec::Zero(n);
  LinOp op = ham.as_linop();
  for (int c = 0; c < n; ++c) {
    e[c] = 1.0;
    m.col(c) = op(e);
    e[c] = 0.0;
  }
  return m;
}

KappaCutoff test_kappa() { return build_kappa(1.2, 0.5); }

}  // namespace

TEST_CASE("free evolution: identity at t=0, unitary, group law") {
  LatticeBox box = make_box(8, Boundary::Periodic);
  StateVector u = random_state(box, 1);
  KappaCutoff kap = test_kappa();
  for (HamKind kind : {HamKind::Free, HamKind::GappedFree}) {
    StateVector v0 = free_evolve(u, 0.0, kind, kap);
    CHECK(norm2(v0 - u) < 1e-13);
    for (double t : {1.0, 10.0, 100.0}) {
      StateVector vt = free_evolve(u, t, kind, kap);
      CHECK(std::abs(norm2(vt) - norm2(u)) < 1e-12);
    }
    StateVector a = free_evolve(free_evolve(u, 3.5, kind, kap), 2.25, kind, kap);
    StateVector b = free_evolve(u, 5.75, kind, kap);
    CHECK(norm2(a - b) < 1e-11);
  }
}

TEST_CASE("polynomial propagator against the dense oracle at L=8") {
  LatticeBox box = make_box(8, Boundary::Periodic);
  PotentialSpec spec;
  spec.rho = 0.7;
  spec.amp_long = 0.4;
  spec.amp_short = 0.2;
  auto pot = std::make_shared<RealizedPotential>(realize_potential(spec, box));
  Hamiltonian ham(HamKind::Full, box, test_kappa(), pot);

  Eigen::MatrixXcd hm = assemble_dense(ham);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
  StateVector u = random_state(box, 2);
  const double t = 3.0;
  Eigen::VectorXcd phases =
      (Complex(0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
  CVec exact = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * pack(u);

  StateVector got = full_evolve(u, t, ham, 1e-10);
  CHECK((pack(got) - exact).norm() < 1e-9);

  // energy conservation along the polynomial evolution
  const double e0 = std::real(dot(u, ham.apply(u)));
  const double e1 = std::real(dot(got, ham.apply(got)));
  CHECK(std::abs(e1 - e0) <= 2e-10 * ham.radius());
}

TEST_CASE("polynomial propagator matches the exact free propagator") {
  LatticeBox box = make_box(32, Boundary::Periodic);
  PotentialSpec zero;
  zero.rho = 0.7;
  auto pot = std::make_shared<RealizedPotential>(realize_potential(zero, box));
  Hamiltonian ham(HamKind::Full, box, test_kappa(), pot);
  StateVector u = random_state(box, 3);
  PolynomialPropagator prop(ham, 5.0, 1e-10);  // force the expansion route
  StateVector via_poly = prop.apply(u);
  StateVector via_exact = free_evolve(u, 5.0, HamKind::Free, test_kappa());
  CHECK(norm2(via_poly - via_exact) < 1e-10);
}

TEST_CASE("norm preservation at long time") {
  LatticeBox box = make_box(16, Boundary::Periodic);
  PotentialSpec spec;
  spec.rho = 0.9;
  spec.amp_long = 0.3;
  auto pot = std::make_shared<RealizedPotential>(realize_potential(spec, box));
  Hamiltonian ham(HamKind::Full, box, test_kappa(), pot);
  StateVector u = random_state(box, 4);
  StateVector v = full_evolve(u, 50.0, ham, 1e-9);
  CHECK(std::abs(norm2(v) - norm2(u)) < 1e-9);
}

TEST_CASE("functional calculus: flat chi, multiplier oracle, idempotence") {
  LatticeBox box = make_box(10, Boundary::Periodic);
  KappaCutoff kap = test_kappa();
  PotentialSpec zero;
  zero.rho = 0.7;
  auto pot = std::make_shared<RealizedPotential>(realize_potential(zero, box));
  Hamiltonian free_ham(HamKind::Free, box, kap);
  StateVector u = random_state(box, 5);

  StateVector id = apply_chi(u, [](double) { return 1.0; }, free_ham, 1e-10);
  CHECK(norm2(id - u) < 1e-9);

  SmoothWindow win{1.2, 2.8, 0.1};
  auto chi = [win](double x) { return win(x); };
  StateVector via_poly = apply_chi(u, chi, free_ham, 1e-10);
  StateVector via_mult = apply_chi_multiplier(u, chi, HamKind::Free, kap);
  CHECK(norm2(via_poly - via_mult) < 1e-9);

  // applying chi twice agrees with applying chi^2 once
  StateVector twice = apply_chi(via_poly, chi, free_ham, 1e-10);
  StateVector sq_once =
      apply_chi(u, [win](double x) { return sq(win(x)); }, free_ham, 1e-10);
  CHECK(norm2(twice - sq_once) < 2e-8);
}

TEST_CASE("window packets pass through chi unchanged") {
  LatticeBox box = make_box(12, Boundary::Periodic);
  KappaCutoff kap = test_kappa();
  // on-grid Bloch state of the positive band with p(xi0) inside the window
  const Fourier& f = fourier(box.side());
  int best_i = 0, best_j = 0;
  double best = 1e9;
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i) {
      const double p = std::abs(alpha(f.grid().xi(i), f.grid().xi(j)));
      if (std::abs(p - 2.0) < best) {
        best = std::abs(p - 2.0);
        best_i = i;
        best_j = j;
      }
    }
  const double xi1 = f.grid().xi(best_i), xi2 = f.grid().xi(best_j);
  SymbolPoint sp = eval_symbol(xi1, xi2, kap);
  REQUIRE(sp.p > 1.3);
  REQUIRE(sp.p < 2.7);
  StateVector u(box);
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i) {
      const Complex ph = std::polar(1.0, xi1 * box.coord(i) + xi2 * box.coord(j));
      u.u1(i, j) = ph * sp.uprime(0, 0);
      u.u2(i, j) = ph * sp.uprime(1, 0);
    }
  Complex inv(1.0 / norm2(u), 0);
  u = inv * u;
  SmoothWindow win{1.2, 2.8, 0.05};
  Hamiltonian free_ham(HamKind::Free, box, kap);
  StateVector v = apply_chi(u, [win](double x) { return win(x); }, free_ham, 1e-8);
  CHECK(norm2(v - u) <= 1e-6);
}

TEST_CASE("band rotation: unitarity and diagonalization of the gapped operator") {
  LatticeBox box = make_box(9, Boundary::Periodic);
  KappaCutoff kap = test_kappa();
  MatrixMultiplier to_band = make_to_band(box, kap);
  MatrixMultiplier from_band = make_from_band(box, kap);
  StateVector u = random_state(box, 6);
  StateVector round = from_band.apply(to_band.apply(u));
  CHECK(norm2(round - u) < 1e-12);

  // U'^* H'_0 U' acts as the diagonal band multiplier
  Hamiltonian gapped(HamKind::GappedFree, box, kap);
  StateVector lhs = to_band.apply(gapped.apply(from_band.apply(u)));
  ScalarMultiplier lam_plus(box.side(), [kap](double x1, double x2) {
    return Complex(eval_symbol(x1, x2, kap).lam, 0);
  });
  StateVector rhs(box);
  rhs.u1 = lam_plus.apply(u.u1);
  rhs.u2 = -lam_plus.apply(u.u2);
  CHECK(norm2(lhs - rhs) < 1e-10);
}

TEST_CASE("gapped long-range handle: reduction at V_l = 0 and symmetry") {
  LatticeBox box = make_box(9, Boundary::Periodic);
  KappaCutoff kap = test_kappa();
  PotentialSpec zero;
  zero.rho = 0.7;
  auto pot0 = std::make_shared<RealizedPotential>(realize_potential(zero, box));
  Hamiltonian h0(HamKind::GappedFree, box, kap);
  Hamiltonian hl0(HamKind::GappedLong, box, kap, pot0);
  StateVector u = random_state(box, 7);
  CHECK(norm2(hl0.apply(u) - h0.apply(u)) < 1e-12);

  PotentialSpec spec;
  spec.rho = 0.7;
  spec.amp_long = 0.3;
  auto pot = std::make_shared<RealizedPotential>(realize_potential(spec, box));
  Hamiltonian hl(HamKind::GappedLong, box, kap, pot);
  StateVector w = random_state(box, 8);
  const Complex s1 = dot(hl.apply(u), w);
  const Complex s2 = dot(u, hl.apply(w));
  CHECK(std::abs(s1 - s2) <= 1e-11 * norm2(u) * norm2(w));
}

TEST_CASE("window states evolve identically under both free operators") {
  LatticeBox box = make_box(16, Boundary::Periodic);
  KappaCutoff kap = test_kappa();
  StateVector u = random_state(box, 9);
  SmoothWindow win{1.2, 2.8, 0.05};
  StateVector packet = apply_chi_multiplier(u, [win](double x) { return win(x); },
                                            HamKind::Free, kap);
  Complex inv(1.0 / norm2(packet), 0);
  packet = inv * packet;
  for (double t : {1.0, 7.0}) {
    StateVector a = free_evolve(packet, t, HamKind::Free, kap);
    StateVector b = free_evolve(packet, t, HamKind::GappedFree, kap);
    CHECK(norm2(a - b) <= 1e-9);
  }
}
