#include <doctest.h>

#include "hexscat/fourier.hpp"

#include <random>

using namespace hexscat;

namespace {

CField random_field(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  CField f(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) f(i, j) = Complex(d(rng), d(rng));
  return f;
}

// brute-force centered transform, the oracle
CField naive_dft(const CField& u, const TorusGrid& g) {
  const int n = g.n;
  const int c = g.center();
  CField out = CField::Zero(n, n);
  for (int k2 = 0; k2 < n; ++k2) {
    for (int k1 = 0; k1 < n; ++k1) {
      Complex s = 0;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          s += u(i, j) * std::polar(1.0, -(g.xi(k1) * (i - c) + g.xi(k2) * (j - c)));
      out(k1, k2) = s;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("torus grid anchors") {
  TorusGrid even{12};
  CHECK(even.xi(6) == doctest::Approx(0.0));
  CHECK(even.xi(0) == doctest::Approx(-M_PI));
  CHECK(even.contains_minus_pi());
  CHECK(even.dirac_on_grid());

  TorusGrid odd{33};  // dual grid of the box with half-width 16
  CHECK(odd.xi(16) == doctest::Approx(0.0));
  CHECK(!odd.contains_minus_pi());
  CHECK(odd.dirac_on_grid());

  // Dirac momenta land on-grid exactly when 3 | n
  TorusGrid g{18};
  bool found = false;
  for (int i = 0; i < g.n; ++i)
    if (std::abs(g.xi(i) - kTwoPi / 3.0) < 1e-12) found = true;
  CHECK(found);
}

TEST_CASE("centered dft matches brute force") {
  for (int n : {8, 9, 15}) {
    const Fourier& f = fourier(n);
    CField u = random_field(n, 31 + n);
    CField fast = f.dft(u);
    CField slow = naive_dft(u, f.grid());
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("round trip and Parseval") {
  const int n = 33;
  const Fourier& f = fourier(n);
  CField u = random_field(n, 5);
  CField spec = f.dft(u);
  CField back = f.idft(spec);
  CHECK((back - u).cwiseAbs().maxCoeff() < 1e-12);

  // physical normalization: F = (2pi)^{-1} dft, measure (2pi/n)^2
  const double lhs = sq(Fourier::forward_scale()) * f.measure_weight() * spec.squaredNorm();
  CHECK(lhs == doctest::Approx(u.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("delta transforms to a flat (2pi)^{-1} profile") {
  const int n = 21;
  const Fourier& f = fourier(n);
  CField u = CField::Zero(n, n);
  u(n / 2, n / 2) = 1.0;  // x = 0
  CField spec = Fourier::forward_scale() * f.dft(u);
  CHECK((spec.array() - Complex(1.0 / kTwoPi, 0)).abs().maxCoeff() < 1e-13);
}
