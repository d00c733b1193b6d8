#ifndef HEXSCAT_PDO_HPP
#define HEXSCAT_PDO_HPP

#include "hexscat/fourier.hpp"
#include "hexscat/lattice.hpp"

#include <functional>

namespace hexscat {

/// Symbol a(xi, y), smooth in xi per lattice point y, with the decay order
/// sup_xi |d_xi^alpha a(xi, y)| <= C_alpha <y>^{-m1}.
struct PdoSymbol {
  std::function<Complex(double xi1, double xi2, double y1, double y2)> a;
  double m1 = 0.0;
  bool y_independent = false;
};

inline PdoSymbol multiplier_symbol(std::function<Complex(double, double)> m) {
  return {[m = std::move(m)](double x1, double x2, double, double) { return m(x1, x2); }, 0.0,
          true};
}

/// Multiplication operator b[x] with the variation order
/// |b[x] - b[x - e_j]| <= C <x>^{-m2}.
struct LatticeMultiplier {
  RField b;  // sampled on the box
  double m2 = 0.0;
};

/// Op(a) u[x] = (2pi)^{-d} int sum_y exp(i(x-y).xi) a(xi, y) u[y] dxi,
/// discretized on the periodic box's dual grid. a == 1 gives the identity.
CField apply_op(const PdoSymbol& sym, const CField& u, const LatticeBox& box);

/// kernel A[x,y] = int exp(i(x-y).xi) a(xi,y) dxi of Op(a), one column
CField op_kernel_column(const PdoSymbol& sym, const LatticeBox& box, int yi, int yj);

/// dense matrix of Op(a) in storage order (small boxes only)
Eigen::MatrixXcd assemble_op_dense(const PdoSymbol& sym, const LatticeBox& box);

/// sup_xi |d^alpha_xi a(xi, y)| <y>^{m1} over |alpha| <= max_order, via
/// spectral differentiation on an n x n sample grid.
struct SymbolDerivativeScan {
  int order;
  double constant;
};
std::vector<SymbolDerivativeScan> scan_symbol_derivatives(const PdoSymbol& sym, int n,
                                                          const std::vector<Vec2>& y_samples,
                                                          int max_order = 3);

/// Weighted commutator kernel study:
///   K[x,y] = <x>^p <y>^q (b[x] - b[y]) A[x,y]
/// with row/column sums, the <x-y>^{d+1} envelope, and a box ladder.
struct KernelLadderEntry {
  int half_width;
  double row_sum_max;
  double col_sum_max;
  double envelope_max;
};
struct KernelReport {
  double p = 0, q = 0;
  double row_sum_max = 0;     // at the largest box
  double col_sum_max = 0;
  double envelope_max = 0;    // sup |K| <x-y>^3
  double envelope_exponent = 0;
  double schur_bound = 0;     // (2pi)^{-2} sqrt(row_sum_max * col_sum_max)
  std::vector<KernelLadderEntry> ladder;
  bool ladder_stable(double max_growth = 1.05) const;
};

/// b_of_box builds the multiplier on each ladder box (the fields must agree
/// with the same closed form across sizes).
KernelReport weighted_commutator_kernel(
    const std::function<LatticeMultiplier(const LatticeBox&)>& b_of_box, const PdoSymbol& sym,
    double p, double q, const std::vector<int>& ladder_half_widths);

/// ||<x>^p [Op(b), Op(a)] <x>^q|| measured by power iteration on the
/// assembled dense operator (small boxes).
double weighted_commutator_norm_dense(const LatticeMultiplier& b, const PdoSymbol& sym, double p,
                                      double q, const LatticeBox& box);

}  // namespace hexscat

#endif
