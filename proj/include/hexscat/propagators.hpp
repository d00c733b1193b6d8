#ifndef HEXSCAT_PROPAGATORS_HPP
#define HEXSCAT_PROPAGATORS_HPP

#include "hexscat/lattice.hpp"
#include "hexscat/linalg.hpp"
#include "hexscat/symbols.hpp"

namespace hexscat {

// ---- flattening between StateVector and CVec ------------------------------

CVec pack(const StateVector& u);
StateVector unpack(const CVec& v, const LatticeBox& box);
CVec pack_field(const CField& f);
CField unpack_field(const CVec& v, int side);

// ---- Fourier multipliers on states ----------------------------------------

/// 2x2 matrix multiplier sampled on the dual grid of a periodic box.
class MatrixMultiplier {
 public:
  MatrixMultiplier(const LatticeBox& box, const std::function<Mat2(double, double)>& fn);
  StateVector apply(const StateVector& u) const;
  const LatticeBox& box() const { return box_; }

 private:
  LatticeBox box_;
  CField m00_, m01_, m10_, m11_;
};

/// scalar multiplier f(D) on a single component field
class ScalarMultiplier {
 public:
  ScalarMultiplier(int side, const std::function<Complex(double, double)>& fn);
  CField apply(const CField& u) const;

 private:
  int side_;
  CField m_;
};

// band-basis rotation u -> U'^* u (to_band) and u -> U' u (from_band)
MatrixMultiplier make_to_band(const LatticeBox& box, const KappaCutoff& kappa);
MatrixMultiplier make_from_band(const LatticeBox& box, const KappaCutoff& kappa);

// ---- operator handles ------------------------------------------------------

/// The four Hamiltonians of the study:
///   Free        the hexagonal difference operator
///   GappedFree  its gap-opened modification (Fourier multiplier)
///   Full        Free + V
///   GappedLong  GappedFree + U' V_long U'^*
enum class HamKind { Free, GappedFree, Full, GappedLong };

class Hamiltonian {
 public:
  Hamiltonian(HamKind kind, const LatticeBox& box, const KappaCutoff& kappa,
              std::shared_ptr<const RealizedPotential> pot = nullptr);

  StateVector apply(const StateVector& u) const;
  LinOp as_linop() const;
  HamKind kind() const { return kind_; }
  const LatticeBox& box() const { return box_; }
  const KappaCutoff& kappa() const { return kappa_; }
  const RealizedPotential* potential() const { return pot_.get(); }
  int dim() const { return 2 * box_.sites(); }
  /// spectral enclosure half-width 3 + ||V||_inf + margin
  double radius() const { return radius_; }

 private:
  HamKind kind_;
  LatticeBox box_;
  KappaCutoff kappa_;
  std::shared_ptr<const RealizedPotential> pot_;
  double radius_;
  std::shared_ptr<const MatrixMultiplier> gapped_;    // gapped free symbol
  std::shared_ptr<const MatrixMultiplier> to_band_, from_band_;
};

// ---- propagators -----------------------------------------------------------

/// exact unitary evolution exp(-i t S) for the two free operators,
/// realized as a per-xi matrix exponential
StateVector free_evolve(const StateVector& u, double t, HamKind which, const KappaCutoff& kappa);

/// Chebyshev-expansion propagator for any handle. eps is the uniform
/// polynomial accuracy of exp(-i t x) on the enclosure.
class PolynomialPropagator {
 public:
  PolynomialPropagator(const Hamiltonian& ham, double t, double eps = 1e-9);
  StateVector apply(const StateVector& u) const;
  double time() const { return t_; }
  int degree() const { return series_.degree(); }

 private:
  const Hamiltonian& ham_;
  double t_;
  ChebyshevSeries series_;
};

StateVector full_evolve(const StateVector& u, double t, const Hamiltonian& ham,
                        double eps_prop = 1e-9);

/// chi(S) by polynomial functional calculus; reusable across states.
class FunctionOfOperator {
 public:
  FunctionOfOperator(const Hamiltonian& ham, const std::function<double(double)>& chi,
                     double eps_fc = 1e-8);
  StateVector apply(const StateVector& u) const;
  int degree() const { return series_.degree(); }

 private:
  const Hamiltonian& ham_;
  ChebyshevSeries series_;
};

StateVector apply_chi(const StateVector& u, const std::function<double(double)>& chi,
                      const Hamiltonian& ham, double eps_fc = 1e-8);

/// chi(S) for the two multiplier operators (exact route, no expansion)
StateVector apply_chi_multiplier(const StateVector& u, const std::function<double(double)>& chi,
                                 HamKind which, const KappaCutoff& kappa);

}  // namespace hexscat

#endif
