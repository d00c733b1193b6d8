#ifndef HEXSCAT_MOURRE_HPP
#define HEXSCAT_MOURRE_HPP

#include "hexscat/propagators.hpp"

#include <Eigen/Sparse>

namespace hexscat {

// ---- conjugate operator ----------------------------------------------------

/// A = U' diag(A_+, A_-) U'^* with
/// A_# = (1/2) sum_j [ (d_j lambda_#)(D) x_j + x_j (d_j lambda_#)(D) ],
/// applied matrix-free through transforms and coordinate multiplication.
class ConjugateOperator {
 public:
  ConjugateOperator(const LatticeBox& box, const KappaCutoff& kappa);
  StateVector apply(const StateVector& u) const;
  /// one scalar band branch; sign +1 uses lambda_+, -1 uses lambda_-
  CField apply_branch(const CField& f, int sign) const;
  const LatticeBox& box() const { return box_; }

 private:
  LatticeBox box_;
  KappaCutoff kappa_;
  ScalarMultiplier d1_, d2_;  // (d_j lambda_+)(D)
  MatrixMultiplier to_band_, from_band_;
  RField x1_, x2_;
};

/// [S, iA] for the gapped free operator, two independent routes:
/// the direct commutator of applications and the closed-form multiplier
/// U' diag(|grad lambda_+|^2, |grad lambda_-|^2)(D) U'^*.
StateVector commutator_gapped_direct(const StateVector& u, const Hamiltonian& gapped,
                                     const ConjugateOperator& conj);
StateVector commutator_gapped_multiplier(const StateVector& u, const KappaCutoff& kappa);

/// the scalar commutator field |grad lambda_+ (xi)|^2
double commutator_field_value(double xi1, double xi2, const KappaCutoff& kappa);

/// [W, iA] for a diagonal potential pair W
StateVector commutator_potential(const StateVector& u, const RField& w1, const RField& w2,
                                 const ConjugateOperator& conj);

enum class PerturbationKind { ShortRange, LongRange, RotatedLongRange };

/// [W, iA] for the three perturbation classes; the rotated long-range case
/// goes through the band-picture identity
/// (U')^* [U' V_l U'^*, iA] U' = [V_l, i A~]
StateVector perturbation_commutator(const StateVector& u, PerturbationKind kind,
                                    const RealizedPotential& pot, const ConjugateOperator& conj,
                                    const MatrixMultiplier& to_band,
                                    const MatrixMultiplier& from_band);

// ---- Mourre constant -------------------------------------------------------

struct MourreConstant {
  double grid_min = 0;     // min over the in-window grid points
  double refined = 0;      // after penalized descent from the grid argmin
  Vec2 argmin{0, 0};
};

/// c = inf |grad lambda_#|^2 over the in-window momentum set, per branch,
/// with a local-descent refinement pass.
MourreConstant mourre_constant(const EnergyWindow& window, const KappaCutoff& kappa, int grid_n);

/// smallest eigenvalue of P [S, iA] P on ran P, with P the sharp grid window
/// projection of the gapped free operator (route-1 commutator inside)
double projected_commutator_min(const EnergyWindow& window, const KappaCutoff& kappa,
                                const LatticeBox& box);

// ---- weighted commutator ladders -------------------------------------------

struct LadderNorms {
  PerturbationKind kind;
  std::vector<int> half_widths;
  std::vector<double> norms;  // ||<x>^rho [W, iA]|| per box
  bool stable(double max_growth = 1.05) const;
};

LadderNorms perturbed_mourre_check(const PotentialSpec& spec, PerturbationKind kind,
                                   const KappaCutoff& kappa, const std::vector<int>& ladder);

/// || theta(<x>/2^k) [W, iA] || for k = 0..kmax and the log-log decay fit
struct DyadicScan {
  std::vector<double> lambdas;
  std::vector<double> norms;
  double fitted_exponent = 0;
};
DyadicScan c11_integrand_scan(const PotentialSpec& spec, PerturbationKind kind,
                              const KappaCutoff& kappa, int kmax);

// ---- eigenvalue counting ---------------------------------------------------

struct EigenCountEntry {
  int half_width;
  int interior_count;
  std::vector<double> interior_values;  // eigenvalues passing the mass filter
};
struct EigenCountResult {
  std::vector<EigenCountEntry> ladder;
  bool stable() const;
  int final_count() const { return ladder.empty() ? 0 : ladder.back().interior_count; }
};

/// eigenvalues of the truncated operator inside [lo, hi] whose eigenvectors
/// hold at least `interior_mass` of their weight in the half-size core box;
/// dense diagonalization per ladder box
EigenCountResult eigen_count(double lo, double hi, HamKind kind, const PotentialSpec& spec,
                             const KappaCutoff& kappa, const std::vector<int>& ladder,
                             double interior_mass = 0.9);

// ---- limiting absorption scans ----------------------------------------------

/// states-per-unit-energy of the truncated operator near lambda, from the
/// band functions on a fine momentum grid; the honesty floor is 3x spacing
double level_spacing_estimate(double lambda, const KappaCutoff& kappa, int box_side,
                              double halfwidth = 0.05);

struct LapScan {
  std::vector<double> lambdas;
  std::vector<double> epsilons;           // decreasing
  Eigen::MatrixXd norms;                  // lambdas x epsilons
  double honesty_floor = 0;               // 3x worst level spacing
  double worst_plateau_deviation = 0;     // max relative change over the last step
  bool plateau(double tol = 0.10) const { return worst_plateau_deviation <= tol; }
};

/// || <x>^{-s} (S - lambda -/+ i eps)^{-1} <x>^{-s} || over a (lambda, eps)
/// mesh; sparse factorization for the stencil operators, preconditioned
/// GMRES in the band picture for the gapped long-range operator
LapScan lap_scan(HamKind kind, const PotentialSpec& spec, const KappaCutoff& kappa,
                 const LatticeBox& box, double s, std::vector<double> lambdas,
                 std::vector<double> epsilons);

/// sup over the mesh of || G delta(lambda,eps) G* ||, G = <x>^{-s} chi(S),
/// computed as the top eigenvalue of <x>^{-s} f(S) <x>^{-s} with
/// f = chi^2 * (eps/pi) / ((x-lambda)^2 + eps^2)
struct KatoCheck {
  double sup_norm = 0;
  std::vector<double> lambdas, epsilons;
  Eigen::MatrixXd norms;
};
KatoCheck kato_smooth_check(HamKind kind, const PotentialSpec& spec, const KappaCutoff& kappa,
                            const LatticeBox& box, double s, const SmoothWindow& chi,
                            std::vector<double> lambdas, std::vector<double> epsilons);

// ---- assembly --------------------------------------------------------------

/// sparse matrix of the stencil + diagonal operators (Free / Full)
Eigen::SparseMatrix<Complex> assemble_sparse(const LatticeBox& box, const RealizedPotential* pot);

}  // namespace hexscat

#endif
