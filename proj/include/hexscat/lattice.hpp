#ifndef HEXSCAT_LATTICE_HPP
#define HEXSCAT_LATTICE_HPP

#include "hexscat/common.hpp"
#include "hexscat/fourier.hpp"

namespace hexscat {

enum class Boundary { ZeroPadded, Periodic };

/// Square truncation {x in Z^2 : |x1|,|x2| <= L} of the lattice.
/// Storage index i = x + L per axis, side s = 2L+1.
struct LatticeBox {
  int half_width = 0;
  Boundary boundary = Boundary::Periodic;

  int side() const { return 2 * half_width + 1; }
  int sites() const { return side() * side(); }
  double coord(int i) const { return i - half_width; }
  bool operator==(const LatticeBox& o) const {
    return half_width == o.half_width && boundary == o.boundary;
  }
};

inline LatticeBox make_box(int half_width, Boundary b) {
  if (half_width < 2) throw ConfigError("LatticeBox: half_width must be >= 2");
  return {half_width, b};
}

/// C^2-valued function on a LatticeBox; components on the two sublattices.
struct StateVector {
  LatticeBox box;
  CField u1, u2;

  StateVector() = default;
  explicit StateVector(const LatticeBox& bx)
      : box(bx), u1(CField::Zero(bx.side(), bx.side())), u2(CField::Zero(bx.side(), bx.side())) {}

  CField& comp(int c) { return c == 0 ? u1 : u2; }
  const CField& comp(int c) const { return c == 0 ? u1 : u2; }
};

inline double norm2_sq(const StateVector& u) { return u.u1.squaredNorm() + u.u2.squaredNorm(); }
inline double norm2(const StateVector& u) { return std::sqrt(norm2_sq(u)); }
inline Complex dot(const StateVector& a, const StateVector& b) {
  // conjugate-linear in the first argument
  return (a.u1.conjugate().cwiseProduct(b.u1)).sum() + (a.u2.conjugate().cwiseProduct(b.u2)).sum();
}
inline void axpy(Complex alpha, const StateVector& x, StateVector& y) {
  y.u1 += alpha * x.u1;
  y.u2 += alpha * x.u2;
}
inline StateVector operator-(const StateVector& a, const StateVector& b) {
  StateVector r(a.box);
  r.u1 = a.u1 - b.u1;
  r.u2 = a.u2 - b.u2;
  return r;
}
inline StateVector operator+(const StateVector& a, const StateVector& b) {
  StateVector r(a.box);
  r.u1 = a.u1 + b.u1;
  r.u2 = a.u2 + b.u2;
  return r;
}
inline StateVector operator*(Complex s, const StateVector& a) {
  StateVector r(a.box);
  r.u1 = s * a.u1;
  r.u2 = s * a.u2;
  return r;
}

/// Mass within `margin` sites of the box edge, relative to the total.
double boundary_mass_fraction(const StateVector& u, int margin);

/// Free tight-binding operator of the hexagonal lattice:
///   v1[x] = -(u2[x] + u2[x-e1] + u2[x-e2])
///   v2[x] = -(u1[x] + u1[x+e1] + u1[x+e2])
StateVector apply_h0(const StateVector& u);

/// Decaying potential pair (V1, V2) = (Vl + Vs1, Vl + Vs2) with
/// Vl = amp_long <x>^{-rho} and |Vs_j| <= amp_short <x>^{-1-rho}.
enum class ShortProfile { Isotropic, SublatticeSplit };

struct PotentialSpec {
  double rho = 0.7;
  double amp_long = 0.0;
  double amp_short = 0.0;
  ShortProfile profile = ShortProfile::Isotropic;
  // optional compact well added to both short components (bound-state probe)
  double well_depth = 0.0;
  double well_radius = 1.5;

  void validate() const;
  double v_long(double x1, double x2) const;      // closed form, real arguments
  Vec2 grad_v_long(double x1, double x2) const;   // gradient of the extension
  double v_short(int j, double x1, double x2) const;
};

struct RealizedPotential {
  LatticeBox box;
  PotentialSpec spec;
  RField v1, v2;      // total multiplication data per sublattice
  RField v_long;      // long-range part kept separate
  double sup_abs() const { return std::max(v1.cwiseAbs().maxCoeff(), v2.cwiseAbs().maxCoeff()); }
};

RealizedPotential realize_potential(const PotentialSpec& spec, const LatticeBox& box);

/// H = H0 + V (diagonal action of the potential pair).
StateVector apply_h(const StateVector& u, const RealizedPotential& pot);

/// Diagonal weight <x>^s.
struct JapaneseBracketWeight {
  double exponent = 0.0;
  double operator()(double x1, double x2) const { return std::pow(jbracket(x1, x2), exponent); }
};

RField weight_field(const LatticeBox& box, double exponent);
StateVector apply_weight(const StateVector& u, const RField& w);

/// Backward difference along axis j (zero-padded outside the box).
RField backward_diff(const RField& f, int axis);

/// sup over |x|<=radius of |d~^alpha f| * <x>^{|alpha|+rho}; used to verify
/// the decay hypotheses of realized potentials.
struct DecayScan {
  int order;                 // |alpha|
  double constant;           // fitted C_alpha
  double constant_half_box;  // same scan on half of the range
};
std::vector<DecayScan> scan_decay_constants(const RField& f, const LatticeBox& box, double rho,
                                            int max_order);

}  // namespace hexscat

#endif
