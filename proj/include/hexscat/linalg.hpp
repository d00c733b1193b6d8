#ifndef HEXSCAT_LINALG_HPP
#define HEXSCAT_LINALG_HPP

#include "hexscat/common.hpp"

#include <functional>
#include <random>

namespace hexscat {

using CVec = Eigen::VectorXcd;
using LinOp = std::function<CVec(const CVec&)>;

CVec random_unit_vector(int dim, uint64_t seed);

/// ||A|| by power iteration on A*A. `aT` is the adjoint; pass the same
/// callable for self-adjoint operators.
struct PowerOpts {
  double rel_tol = 1e-6;
  int max_iter = 500;
  uint64_t seed = 1234;
};
double operator_norm(const LinOp& a, const LinOp& aT, int dim, const PowerOpts& opts = {});

/// Extreme eigenvalue of a Hermitian operator by Lanczos with full
/// reorthogonalization.
struct LanczosOpts {
  int max_iter = 200;
  double tol = 1e-8;
  uint64_t seed = 4321;
};
double hermitian_extreme_eig(const LinOp& a, int dim, bool largest, const LanczosOpts& opts = {});

/// Restarted GMRES for a x = b.
struct GmresOpts {
  int restart = 80;
  int max_outer = 25;
  double rel_tol = 1e-9;
};
struct GmresResult {
  CVec x;
  double rel_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};
GmresResult gmres(const LinOp& a, const CVec& b, const GmresOpts& opts = {},
                  const CVec* x0 = nullptr);

/// J_0..J_kmax at z >= 0 by the downward (Miller) recurrence.
std::vector<double> bessel_j_ladder(int kmax, double z);

/// Truncated Chebyshev expansion sum_k c_k T_k(x / radius) of a scalar
/// function; applies to operators through the forward three-term recurrence.
class ChebyshevSeries {
 public:
  static ChebyshevSeries of_function(const std::function<double(double)>& f, double radius,
                                     double target_uniform_error, int max_degree = 20000);
  /// expansion of x -> exp(-i t x) on [-radius, radius]
  static ChebyshevSeries of_exp(double t, double radius, double target_tail);

  Complex eval(double x) const;
  /// sum_k c_k T_k(A/radius) v; `apply` must implement v -> A v
  CVec apply(const LinOp& apply_a, const CVec& v) const;

  int degree() const { return int(coeff_.size()) - 1; }
  double radius() const { return radius_; }
  double tail_estimate() const { return tail_; }

 private:
  std::vector<Complex> coeff_;
  double radius_ = 1.0;
  double tail_ = 0.0;
};

/// Ritz pairs of a Hermitian operator inside [lo, hi], found by
/// Chebyshev-filtered subspace iteration.
struct RitzPair {
  double value;
  CVec vector;
  double residual;
};
struct FilteredEigOpts {
  int block = 16;
  int iters = 6;
  int filter_degree = 120;
  double residual_tol = 1e-7;
  uint64_t seed = 97;
};
std::vector<RitzPair> filtered_interval_eigs(const LinOp& a, int dim, double lo, double hi,
                                             double radius, const FilteredEigOpts& opts = {});

}  // namespace hexscat

#endif
