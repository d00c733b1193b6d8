#ifndef HEXSCAT_FOURIER_HPP
#define HEXSCAT_FOURIER_HPP

#include "hexscat/common.hpp"

#include <memory>

namespace hexscat {

/// Uniform grid on the torus [-pi, pi)^2, one axis:
/// xi_j = 2*pi*(j - n/2)/n, j = 0..n-1 (integer division).
/// Even n anchors both 0 and -pi on-grid; odd n (the dual grid of a
/// lattice box of side n) is symmetric around the on-grid point 0.
struct TorusGrid {
  int n = 0;
  int center() const { return n / 2; }
  double xi(int j) const { return kTwoPi * (j - center()) / n; }
  Vec2 xi2(int j1, int j2) const { return {xi(j1), xi(j2)}; }
  bool contains_zero() const { return true; }
  bool contains_minus_pi() const { return n % 2 == 0; }
  bool dirac_on_grid() const { return n % 3 == 0; }
};

/// Centered 2-D DFT engine for one grid size.
///
/// dft(g)[k1,k2]  = sum_x exp(-i x.xi_k) g[x],  x_i = i - c, xi_k = 2pi(k-c)/n
/// idft = inverse of dft (includes the 1/n^2 factor).
///
/// The physical transform of the model carries a (2pi)^{-1} prefactor per
/// component; callers that need it use forward_scale()/inverse_scale().
class Fourier {
 public:
  explicit Fourier(int n);

  int size() const { return n_; }
  const TorusGrid& grid() const { return grid_; }

  void dft(const CField& in, CField& out) const;
  void idft(const CField& in, CField& out) const;
  CField dft(const CField& in) const;
  CField idft(const CField& in) const;

  // physical normalization: F u = forward_scale * dft(u)
  static double forward_scale() { return 1.0 / kTwoPi; }
  double inverse_scale() const { return kTwoPi; }  // applied on top of idft
  // grid measure weight for one point of the dual grid, (2pi/n)^2
  double measure_weight() const { return sq(kTwoPi / n_); }

 private:
  void transform_axis(CField& f, bool inverse, bool rows) const;

  int n_;
  TorusGrid grid_;
  Eigen::VectorXcd pre_, post_;  // centering phases, one axis
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

/// Shared per-size engines (plan reuse). Single-threaded use.
const Fourier& fourier(int n);

}  // namespace hexscat

#endif
