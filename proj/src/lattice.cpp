#include "hexscat/lattice.hpp"

namespace hexscat {

double boundary_mass_fraction(const StateVector& u, int margin) {
  const int s = u.box.side();
  const int m = std::min(margin, u.box.half_width);
  double edge = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (i >= m && i < s - m && j >= m && j < s - m) continue;
      edge += std::norm(u.u1(i, j)) + std::norm(u.u2(i, j));
    }
  }
  const double total = norm2_sq(u);
  return total > 0 ? edge / total : 0.0;
}

namespace {

// neighbor index with the box's boundary rule; returns -1 for "outside"
inline int shift(int i, int d, int s, Boundary b) {
  int k = i + d;
  if (k >= 0 && k < s) return k;
  if (b == Boundary::Periodic) return (k + s) % s;
  return -1;
}

inline Complex at(const CField& f, int i, int j) {
  return (i < 0 || j < 0) ? Complex(0, 0) : f(i, j);
}

}  // namespace

StateVector apply_h0(const StateVector& u) {
  const int s = u.box.side();
  const Boundary b = u.box.boundary;
  StateVector v(u.box);
  for (int j = 0; j < s; ++j) {
    const int jm = shift(j, -1, s, b);
    const int jp = shift(j, +1, s, b);
    for (int i = 0; i < s; ++i) {
      const int im = shift(i, -1, s, b);
      const int ip = shift(i, +1, s, b);
      v.u1(i, j) = -(u.u2(i, j) + at(u.u2, im, j) + at(u.u2, i, jm));
      v.u2(i, j) = -(u.u1(i, j) + at(u.u1, ip, j) + at(u.u1, i, jp));
    }
  }
  return v;
}

void PotentialSpec::validate() const {
  if (rho <= 0.0) throw ConfigError("potential.rho: must be > 0");
  if (rho > 1.7) throw ConfigError("potential.rho: supported range is (0, 1.7]");
  if (well_radius <= 0.0) throw ConfigError("potential.well_radius: must be > 0");
}

double PotentialSpec::v_long(double x1, double x2) const {
  return amp_long * std::pow(jbracket(x1, x2), -rho);
}

Vec2 PotentialSpec::grad_v_long(double x1, double x2) const {
  const double br = jbracket(x1, x2);
  const double f = -rho * amp_long * std::pow(br, -rho - 2.0);
  return {f * x1, f * x2};
}

double PotentialSpec::v_short(int j, double x1, double x2) const {
  const double base = amp_short * std::pow(jbracket(x1, x2), -1.0 - rho);
  double v = (profile == ShortProfile::SublatticeSplit && j == 2) ? -base : base;
  if (well_depth != 0.0) {
    const double r2 = x1 * x1 + x2 * x2;
    v += well_depth * std::exp(-r2 / (2.0 * well_radius * well_radius));
  }
  return v;
}

RealizedPotential realize_potential(const PotentialSpec& spec, const LatticeBox& box) {
  spec.validate();
  RealizedPotential pot;
  pot.box = box;
  pot.spec = spec;
  const int s = box.side();
  pot.v1.resize(s, s);
  pot.v2.resize(s, s);
  pot.v_long.resize(s, s);
  for (int j = 0; j < s; ++j) {
    const double x2 = box.coord(j);
    for (int i = 0; i < s; ++i) {
      const double x1 = box.coord(i);
      const double vl = spec.v_long(x1, x2);
      pot.v_long(i, j) = vl;
      pot.v1(i, j) = vl + spec.v_short(1, x1, x2);
      pot.v2(i, j) = vl + spec.v_short(2, x1, x2);
    }
  }
  return pot;
}

StateVector apply_h(const StateVector& u, const RealizedPotential& pot) {
  if (!(u.box == pot.box)) throw std::invalid_argument("apply_h: state/potential box mismatch");
  StateVector v = apply_h0(u);
  v.u1 += pot.v1.cast<Complex>().cwiseProduct(u.u1);
  v.u2 += pot.v2.cast<Complex>().cwiseProduct(u.u2);
  return v;
}

RField weight_field(const LatticeBox& box, double exponent) {
  const int s = box.side();
  RField w(s, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i)
      w(i, j) = std::pow(jbracket(box.coord(i), box.coord(j)), exponent);
  return w;
}

StateVector apply_weight(const StateVector& u, const RField& w) {
  StateVector v(u.box);
  v.u1 = w.cast<Complex>().cwiseProduct(u.u1);
  v.u2 = w.cast<Complex>().cwiseProduct(u.u2);
  return v;
}

RField backward_diff(const RField& f, int axis) {
  RField g = f;
  const int r = f.rows(), c = f.cols();
  if (axis == 1) {
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) g(i, j) = f(i, j) - (i > 0 ? f(i - 1, j) : 0.0);
  } else {
    for (int j = 0; j < c; ++j)
      for (int i = 0; i < r; ++i) g(i, j) = f(i, j) - (j > 0 ? f(i, j - 1) : 0.0);
  }
  return g;
}

std::vector<DecayScan> scan_decay_constants(const RField& f, const LatticeBox& box, double rho,
                                            int max_order) {
  // all multi-indices alpha with |alpha| <= max_order, realized as iterated
  // backward differences; rows within |alpha| of the box edge are excluded
  // (the difference there sees the artificial zero outside the sampled range)
  std::vector<DecayScan> out;
  const int s = box.side();
  for (int order = 0; order <= max_order; ++order) {
    double cmax = 0.0, cmax_half = 0.0;
    for (int a1 = 0; a1 <= order; ++a1) {
      const int a2 = order - a1;
      RField g = f;
      for (int k = 0; k < a1; ++k) g = backward_diff(g, 1);
      for (int k = 0; k < a2; ++k) g = backward_diff(g, 2);
      for (int j = order; j < s; ++j) {
        for (int i = order; i < s; ++i) {
          const double x1 = box.coord(i), x2 = box.coord(j);
          const double w = std::pow(jbracket(x1, x2), order + rho);
          const double val = std::abs(g(i, j)) * w;
          cmax = std::max(cmax, val);
          if (std::max(std::abs(x1), std::abs(x2)) <= box.half_width / 2) {
            cmax_half = std::max(cmax_half, val);
          }
        }
      }
    }
    out.push_back({order, cmax, cmax_half});
  }
  return out;
}

}  // namespace hexscat
