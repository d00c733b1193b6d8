#ifndef HEXSCAT_SYMBOLS_HPP
#define HEXSCAT_SYMBOLS_HPP

#include "hexscat/common.hpp"
#include "hexscat/fourier.hpp"

#include <functional>
#include <optional>

namespace hexscat {

// ---- closed forms of the free Bloch symbol -------------------------------

inline Complex alpha(double xi1, double xi2) {
  return -(1.0 + std::polar(1.0, xi1) + std::polar(1.0, xi2));
}
inline Complex alpha(const Vec2& xi) { return alpha(xi[0], xi[1]); }

inline double p_squared(double xi1, double xi2) {
  return 3.0 + 2.0 * std::cos(xi1) + 2.0 * std::cos(xi2) + 2.0 * std::cos(xi1 - xi2);
}
inline double p_squared(const Vec2& xi) { return p_squared(xi[0], xi[1]); }

inline Vec2 grad_p_squared(double xi1, double xi2) {
  const double s12 = std::sin(xi1 - xi2);
  return {-2.0 * std::sin(xi1) - 2.0 * s12, -2.0 * std::sin(xi2) + 2.0 * s12};
}
inline Eigen::Matrix2d hess_p_squared(double xi1, double xi2) {
  const double c12 = std::cos(xi1 - xi2);
  Eigen::Matrix2d h;
  h << -2.0 * std::cos(xi1) - 2.0 * c12, 2.0 * c12, 2.0 * c12, -2.0 * std::cos(xi2) - 2.0 * c12;
  return h;
}

inline Mat2 h0_symbol(double xi1, double xi2) {
  const Complex a = alpha(xi1, xi2);
  Mat2 m;
  m << Complex(0, 0), std::conj(a), a, Complex(0, 0);
  return m;
}

// ---- gap cutoff ----------------------------------------------------------

/// Smooth profile kappa >= 0 with supp kappa in [0, delta^2/4),
/// kappa(0) = g and E + kappa(E)^2 < delta^2/4 throughout the support.
struct KappaCutoff {
  double delta = 0.0;  // dist(0, window)
  double g = 0.0;      // gap value kappa(0), in (0, delta/2)

  double support_end() const { return 0.25 * delta * delta; }
  double operator()(double e) const;
  double derivative(double e) const;

  /// dense 1-D scan of the defining constraints; throws on violation
  void validate(int scan_points = 100000) const;
};

KappaCutoff build_kappa(double delta, double g);

// ---- energy window -------------------------------------------------------

/// Open interval inside the band, bounded away from the threshold set
/// {0, +-1, +-3}; single-signed.
struct EnergyWindow {
  double a = 0.0, b = 0.0;
  double dist_to_zero() const { return std::min(std::abs(a), std::abs(b)); }
  bool contains(double x) const { return a < x && x < b; }
  // window on |lambda| for the +/- band pair; {a,b} for positive windows
  double abs_lo() const { return a > 0 ? a : -b; }
  double abs_hi() const { return a > 0 ? b : -a; }
  void validate(double margin = 0.05) const;
  SmoothWindow smoothed(double eta = 0.02) const { return {a, b, eta}; }
};

// ---- per-point modified symbol data --------------------------------------

struct SymbolPoint {
  Complex alpha;
  double p2 = 0, p = 0;
  double kap = 0;       // kappa(p^2)
  double lam = 0;       // positive band, sqrt(kap^2 + p^2)
  double cnorm = 0;     // normalizer of the diagonalizer
  Mat2 uprime;          // pointwise unitary diagonalizer
  Mat2 hprime;          // gapped symbol

  double lambda_minus() const { return -lam; }
};

SymbolPoint eval_symbol(double xi1, double xi2, const KappaCutoff& kappa);

/// gradient of the positive band function (smooth thanks to the gap)
Vec2 grad_lambda_plus(double xi1, double xi2, const KappaCutoff& kappa);

// chi(M) for the free and gapped symbols at one point
Mat2 chi_of_h0(double xi1, double xi2, const std::function<double(double)>& chi);
Mat2 chi_of_hprime(const SymbolPoint& sp, const std::function<double(double)>& chi);

// ---- sampled grid --------------------------------------------------------

/// Momentum-space fields sampled on an N x N torus grid. The matrix-valued
/// entries are recomputed on demand from the stored scalars.
struct SymbolGrid {
  TorusGrid grid;
  KappaCutoff kappa;
  CField alpha;
  RField p;             // |alpha|
  RField kappa_of_p2;
  RField lambda_plus;   // lambda_minus is -lambda_plus by construction

  double lambda_minus(int i, int j) const { return -lambda_plus(i, j); }
  SymbolPoint point(int i, int j) const {
    return eval_symbol(grid.xi(i), grid.xi(j), kappa);
  }
};

SymbolGrid build_symbol_grid(const TorusGrid& grid, const EnergyWindow& window,
                             const KappaCutoff& kappa);

// ---- critical structure of the band --------------------------------------

struct CriticalPointReport {
  std::vector<Vec2> points;          // gradient zeros of p off the Dirac set
  std::vector<double> values;        // p at those points
  std::vector<double> dirac_points_p;  // p at the on-grid Dirac set (empty if off-grid)
  double band_min = 0, band_max = 0;
  std::vector<double> threshold_set() const;  // {0, ±values...} sorted
};

CriticalPointReport eval_critical_points(const TorusGrid& grid);

}  // namespace hexscat

#endif
