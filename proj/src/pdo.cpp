#include "hexscat/pdo.hpp"

#include "hexscat/linalg.hpp"

namespace hexscat {

namespace {

// sample a(., y) on the dual grid of the box
CField sample_symbol(const PdoSymbol& sym, const TorusGrid& g, double y1, double y2) {
  CField f(g.n, g.n);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) f(i, j) = sym.a(g.xi(i), g.xi(j), y1, y2);
  return f;
}

inline int wrap_disp(int d, int s) {
  // displacement wrapped to the symmetric representative in [-s/2, s/2]
  d %= s;
  if (d > s / 2) d -= s;
  if (d < -(s / 2)) d += s;
  return d;
}

}  // namespace

CField apply_op(const PdoSymbol& sym, const CField& u, const LatticeBox& box) {
  const int s = box.side();
  if (u.rows() != s || u.cols() != s) throw std::invalid_argument("apply_op: size mismatch");
  if (box.boundary != Boundary::Periodic)
    throw std::invalid_argument("apply_op: periodic box required");
  const Fourier& f = fourier(s);
  if (sym.y_independent) {
    CField spec = f.dft(u);
    CField m = sample_symbol(sym, f.grid(), 0, 0);
    return f.idft(m.cwiseProduct(spec));
  }
  // general path: accumulate per-y kernel columns (periodic convolution rows)
  CField out = CField::Zero(s, s);
  for (int yj = 0; yj < s; ++yj) {
    for (int yi = 0; yi < s; ++yi) {
      const Complex uy = u(yi, yj);
      if (uy == Complex(0, 0)) continue;
      CField col = op_kernel_column(sym, box, yi, yj);  // (2pi)^2-scaled kernel
      out += (uy / sq(kTwoPi)) * col;
    }
  }
  return out;
}

CField op_kernel_column(const PdoSymbol& sym, const LatticeBox& box, int yi, int yj) {
  const int s = box.side();
  const Fourier& f = fourier(s);
  const double y1 = box.coord(yi), y2 = box.coord(yj);
  CField spec = sample_symbol(sym, f.grid(), y1, y2);
  // A[x,y] = int e^{i(x-y).xi} a(xi,y) dxi ~ (2pi/s)^2 sum_j ...
  //        = (2pi)^2 idft(a(., y)) evaluated at the wrapped displacement x-y
  CField k = f.idft(spec);
  CField col(s, s);
  const int c = s / 2;
  for (int xj = 0; xj < s; ++xj) {
    for (int xi2 = 0; xi2 < s; ++xi2) {
      const int d1 = (xi2 - yi + s) % s;
      const int d2 = (xj - yj + s) % s;
      // idft output index for displacement (d1, d2), centered storage
      col(xi2, xj) = sq(kTwoPi) * k((d1 + c) % s, (d2 + c) % s);
    }
  }
  return col;
}

Eigen::MatrixXcd assemble_op_dense(const PdoSymbol& sym, const LatticeBox& box) {
  const int s = box.side();
  const int n = s * s;
  Eigen::MatrixXcd m(n, n);
  for (int yj = 0; yj < s; ++yj) {
    for (int yi = 0; yi < s; ++yi) {
      CField col = op_kernel_column(sym, box, yi, yj);
      m.col(yj * s + yi) = Eigen::Map<const Eigen::VectorXcd>(col.data(), n) / sq(kTwoPi);
    }
  }
  return m;
}

std::vector<SymbolDerivativeScan> scan_symbol_derivatives(const PdoSymbol& sym, int n,
                                                          const std::vector<Vec2>& y_samples,
                                                          int max_order) {
  const Fourier& f = fourier(n);
  const TorusGrid& g = f.grid();
  std::vector<SymbolDerivativeScan> out;
  for (int order = 0; order <= max_order; ++order) out.push_back({order, 0.0});
  for (const Vec2& y : y_samples) {
    CField samples = sample_symbol(sym, g, y[0], y[1]);
    CField coeffs = f.dft(samples);  // frequency k at centered index
    const double wy = std::pow(jbracket(y), sym.m1);
    for (int order = 0; order <= max_order; ++order) {
      for (int a1 = 0; a1 <= order; ++a1) {
        const int a2 = order - a1;
        CField d(n, n);
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < n; ++i) {
            // d^alpha picks up (i k)^alpha; the dual index of the xi grid
            // is the centered lattice frequency
            const double k1 = g.xi(i) * n / kTwoPi;  // integer frequency
            const double k2 = g.xi(j) * n / kTwoPi;
            Complex factor = std::pow(Complex(0, k1), a1) * std::pow(Complex(0, k2), a2);
            d(i, j) = coeffs(i, j) * factor;
          }
        }
        CField deriv = f.idft(d);
        out[order].constant = std::max(out[order].constant, deriv.cwiseAbs().maxCoeff() * wy);
      }
    }
  }
  return out;
}

bool KernelReport::ladder_stable(double max_growth) const {
  for (size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i].row_sum_max > max_growth * ladder[i - 1].row_sum_max + 1e-14) return false;
    if (ladder[i].col_sum_max > max_growth * ladder[i - 1].col_sum_max + 1e-14) return false;
    if (ladder[i].envelope_max > max_growth * ladder[i - 1].envelope_max + 1e-14) return false;
  }
  return true;
}

KernelReport weighted_commutator_kernel(
    const std::function<LatticeMultiplier(const LatticeBox&)>& b_of_box, const PdoSymbol& sym,
    double p, double q, const std::vector<int>& ladder_half_widths) {
  KernelReport rep;
  rep.p = p;
  rep.q = q;
  {
    LatticeBox probe = make_box(ladder_half_widths.front(), Boundary::Periodic);
    const double m2 = b_of_box(probe).m2;
    if (std::abs(p + q - (sym.m1 + m2)) > 1e-12)
      throw ConfigError("weighted commutator: need p + q = m1 + m2 (got p+q=" +
                        std::to_string(p + q) + ", m1+m2=" + std::to_string(sym.m1 + m2) + ")");
  }
  std::vector<double> env_bins_x, env_bins_y;
  for (int hw : ladder_half_widths) {
    LatticeBox box = make_box(hw, Boundary::Periodic);
    const int s = box.side();
    const Fourier& f = fourier(s);
    LatticeMultiplier b = b_of_box(box);
    RField wp = weight_field(box, p), wq = weight_field(box, q);
    // y-independent symbols have a circulant kernel: one transform serves
    // every column
    CField base;
    if (sym.y_independent) {
      base = f.idft(sample_symbol(sym, f.grid(), 0, 0));
    }
    const int c = s / 2;
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(s * s);
    double col_max = 0, env_max = 0;
    std::vector<double> shell_max(2 * hw + 2, 0.0);
    for (int yj = 0; yj < s; ++yj) {
      for (int yi = 0; yi < s; ++yi) {
        CField col;
        if (sym.y_independent) {
          col.resize(s, s);
          for (int xj = 0; xj < s; ++xj)
            for (int xi2 = 0; xi2 < s; ++xi2)
              col(xi2, xj) = sq(kTwoPi) * base(((xi2 - yi + s) % s + c) % s,
                                               ((xj - yj + s) % s + c) % s);
        } else {
          col = op_kernel_column(sym, box, yi, yj);
        }
        double col_sum = 0;
        const double by = b.b(yi, yj);
        const double wqy = wq(yi, yj);
        for (int xj = 0; xj < s; ++xj) {
          for (int xi2 = 0; xi2 < s; ++xi2) {
            const double kval =
                wp(xi2, xj) * wqy * std::abs((b.b(xi2, xj) - by) * col(xi2, xj));
            col_sum += kval;
            row_sums[xj * s + xi2] += kval;
            const int d1 = wrap_disp(xi2 - yi, s), d2 = wrap_disp(xj - yj, s);
            const double dist = jbracket(d1, d2);
            env_max = std::max(env_max, kval * dist * dist * dist);
            const int shell = std::min<int>(shell_max.size() - 1,
                                            int(std::floor(std::hypot(d1, d2))));
            shell_max[shell] = std::max(shell_max[shell], kval);
          }
        }
        col_max = std::max(col_max, col_sum);
      }
    }
    rep.ladder.push_back({hw, row_sums.maxCoeff(), col_max, env_max});
    if (hw == ladder_half_widths.back()) {
      rep.row_sum_max = row_sums.maxCoeff();
      rep.col_sum_max = col_max;
      rep.envelope_max = env_max;
      // radial decay fit over 2 <= |x-y| <= hw
      for (int r = 2; r <= hw; ++r) {
        if (shell_max[r] > 0) {
          env_bins_x.push_back(std::log(jbracket(r, 0)));
          env_bins_y.push_back(std::log(shell_max[r]));
        }
      }
    }
  }
  rep.schur_bound = std::sqrt(rep.row_sum_max * rep.col_sum_max) / sq(kTwoPi);
  if (env_bins_x.size() >= 2) rep.envelope_exponent = fit_line(env_bins_x, env_bins_y).slope;
  return rep;
}

double weighted_commutator_norm_dense(const LatticeMultiplier& b, const PdoSymbol& sym, double p,
                                      double q, const LatticeBox& box) {
  const int s = box.side();
  const int n = s * s;
  Eigen::MatrixXcd op = assemble_op_dense(sym, box);
  Eigen::VectorXd bd(n), wp(n), wq(n);
  RField wpf = weight_field(box, p), wqf = weight_field(box, q);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) {
      bd[j * s + i] = b.b(i, j);
      wp[j * s + i] = wpf(i, j);
      wq[j * s + i] = wqf(i, j);
    }
  Eigen::MatrixXcd comm = bd.asDiagonal() * op - op * bd.asDiagonal();
  Eigen::MatrixXcd weighted = wp.asDiagonal() * comm * wq.asDiagonal();
  LinOp a = [&](const CVec& v) { return CVec(weighted * v); };
  LinOp aT = [&](const CVec& v) { return CVec(weighted.adjoint() * v); };
  return operator_norm(a, aT, n, {1e-8, 1000, 11});
}

}  // namespace hexscat
