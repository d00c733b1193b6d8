#include <doctest.h>

#include "hexscat/io.hpp"
#include "hexscat/lattice.hpp"
#include "hexscat/symbols.hpp"

#include <random>

using namespace hexscat;

namespace {

StateVector random_state(const LatticeBox& box, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  StateVector u(box);
  const int s = box.side();
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      u.u1(i, j) = Complex(d(rng), d(rng));
      u.u2(i, j) = Complex(d(rng), d(rng));
    }
  return u;
}

}  // namespace

TEST_CASE("stencil on a sublattice-1 delta") {
  LatticeBox box = make_box(4, Boundary::ZeroPadded);
  StateVector u(box);
  const int c = box.half_width;
  u.u1(c, c) = 1.0;  // delta at x=(0,0)
  StateVector v = apply_h0(u);
  CHECK(v.u1.cwiseAbs().maxCoeff() == 0.0);
  // second component gets -1 at exactly (0,0), (-1,0), (0,-1)
  int nonzero = 0;
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i)
      if (v.u2(i, j) != Complex(0, 0)) {
        ++nonzero;
        CHECK(v.u2(i, j) == Complex(-1.0, 0));
      }
  CHECK(nonzero == 3);
  CHECK(v.u2(c, c) == Complex(-1.0, 0));
  CHECK(v.u2(c - 1, c) == Complex(-1.0, 0));
  CHECK(v.u2(c, c - 1) == Complex(-1.0, 0));
}

TEST_CASE("stencil on a sublattice-2 delta") {
  LatticeBox box = make_box(4, Boundary::ZeroPadded);
  StateVector u(box);
  const int c = box.half_width;
  u.u2(c, c) = 1.0;
  StateVector v = apply_h0(u);
  CHECK(v.u2.cwiseAbs().maxCoeff() == 0.0);
  CHECK(v.u1(c, c) == Complex(-1.0, 0));
  CHECK(v.u1(c + 1, c) == Complex(-1.0, 0));
  CHECK(v.u1(c, c + 1) == Complex(-1.0, 0));
  int nonzero = 0;
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i)
      if (v.u1(i, j) != Complex(0, 0)) ++nonzero;
  CHECK(nonzero == 3);
}

TEST_CASE("free operator: norm bound, symmetry, Fourier diagonalization") {
  LatticeBox box = make_box(7, Boundary::Periodic);
  StateVector u = random_state(box, 11);
  StateVector v = apply_h0(u);
  CHECK(norm2(v) <= 3.0 * norm2(u) * (1 + 1e-12));

  StateVector w = random_state(box, 12);
  const Complex s1 = dot(apply_h0(u), w);
  const Complex s2 = dot(u, apply_h0(w));
  CHECK(std::abs(s1 - s2) <= 1e-12 * norm2(u) * norm2(w));

  // multiplier oracle: F(H0 u)(xi) = H0(xi) F(u)(xi)
  const Fourier& f = fourier(box.side());
  CField f1 = f.dft(u.u1), f2 = f.dft(u.u2);
  CField g1(box.side(), box.side()), g2(box.side(), box.side());
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i) {
      const Mat2 m = h0_symbol(f.grid().xi(i), f.grid().xi(j));
      g1(i, j) = m(0, 0) * f1(i, j) + m(0, 1) * f2(i, j);
      g2(i, j) = m(1, 0) * f1(i, j) + m(1, 1) * f2(i, j);
    }
  CField h1 = f.dft(v.u1), h2 = f.dft(v.u2);
  CHECK((h1 - g1).cwiseAbs().maxCoeff() < 1e-12 * norm2(u));
  CHECK((h2 - g2).cwiseAbs().maxCoeff() < 1e-12 * norm2(u));
}

TEST_CASE("norm 3 is achieved by the zone-center Bloch state") {
  LatticeBox box = make_box(6, Boundary::Periodic);
  StateVector u(box);
  u.u1.setConstant(1.0);
  u.u2.setConstant(-1.0);  // eigenvector of the symbol at xi = 0
  StateVector v = apply_h0(u);
  CHECK(norm2(v) == doctest::Approx(3.0 * norm2(u)).epsilon(1e-13));
}

TEST_CASE("potential realization") {
  PotentialSpec spec;
  spec.rho = 0.7;
  spec.amp_long = 1.0;
  spec.amp_short = 0.0;
  LatticeBox box = make_box(64, Boundary::ZeroPadded);
  RealizedPotential pot = realize_potential(spec, box);

  const int c = box.half_width;
  CHECK(pot.v_long(c, c) == doctest::Approx(1.0));  // <0>^{-rho} = 1
  CHECK(pot.v1 == pot.v2);                          // zero short-range part
  CHECK(pot.v1 == pot.v_long);

  // decay constants of all discrete derivatives up to order 3 saturate:
  // the half-box scan already attains the full-box constant
  auto scans = scan_decay_constants(pot.v_long, box, spec.rho, 3);
  for (const auto& s : scans) {
    CHECK(s.constant < 10.0);
    CHECK(s.constant <= s.constant_half_box * 1.001 + 1e-12);
  }

  PotentialSpec bad = spec;
  bad.rho = -0.1;
  CHECK_THROWS_AS(realize_potential(bad, box), ConfigError);
}

TEST_CASE("short-range profiles and the bound |Vs| <= c <x>^{-1-rho}") {
  PotentialSpec spec;
  spec.rho = 0.7;
  spec.amp_long = 0.0;
  spec.amp_short = 0.4;
  spec.profile = ShortProfile::SublatticeSplit;
  LatticeBox box = make_box(32, Boundary::ZeroPadded);
  RealizedPotential pot = realize_potential(spec, box);
  for (int j = 0; j < box.side(); ++j)
    for (int i = 0; i < box.side(); ++i) {
      const double br = jbracket(box.coord(i), box.coord(j));
      const double bound = spec.amp_short * std::pow(br, -1.0 - spec.rho) * (1 + 1e-12);
      CHECK(std::abs(pot.v1(i, j)) <= bound);
      CHECK(std::abs(pot.v2(i, j)) <= bound);
      CHECK(pot.v1(i, j) == doctest::Approx(-pot.v2(i, j)));
    }
}

TEST_CASE("perturbed operator: diagonal action and symmetry") {
  PotentialSpec spec;
  spec.rho = 0.7;
  spec.amp_long = 0.5;
  spec.amp_short = 0.2;
  LatticeBox box = make_box(6, Boundary::Periodic);
  RealizedPotential pot = realize_potential(spec, box);

  // V = 0 reduces to the free stencil
  PotentialSpec zero;
  zero.rho = 0.7;
  RealizedPotential pot0 = realize_potential(zero, box);
  StateVector u = random_state(box, 21);
  StateVector d = apply_h(u, pot0) - apply_h0(u);
  CHECK(norm2(d) == 0.0);

  // diagonal action at the origin
  StateVector delta(box);
  delta.u1(box.half_width, box.half_width) = 1.0;
  RealizedPotential pot5 = pot;
  pot5.v1.setZero();
  pot5.v2.setZero();
  pot5.v1(box.half_width, box.half_width) = 5.0;
  StateVector hd = apply_h(delta, pot5);
  CHECK(hd.u1(box.half_width, box.half_width) == Complex(5.0, 0));

  StateVector w = random_state(box, 22);
  const Complex s1 = dot(apply_h(u, pot), w);
  const Complex s2 = dot(u, apply_h(w, pot));
  CHECK(std::abs(s1 - s2) <= 1e-12 * norm2(u) * norm2(w));
}

TEST_CASE("state round trip through the binary format") {
  LatticeBox box = make_box(5, Boundary::ZeroPadded);
  StateVector u = random_state(box, 77);
  const auto path = std::filesystem::temp_directory_path() / "hexscat_state_rt.bin";
  save_state(u, path);
  StateVector v = load_state(path);
  CHECK(v.box.half_width == u.box.half_width);
  CHECK(v.box.boundary == u.box.boundary);
  CHECK((v.u1 - u.u1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((v.u2 - u.u2).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
