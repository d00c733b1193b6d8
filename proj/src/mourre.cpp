#include "hexscat/mourre.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace hexscat {

namespace {

RField coordinate_field(const LatticeBox& box, int axis) {
  const int s = box.side();
  RField f(s, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) f(i, j) = axis == 1 ? box.coord(i) : box.coord(j);
  return f;
}

// smooth bump supported on [1/2, 2]
double dyadic_bump(double t) {
  if (t <= 0.5 || t >= 2.0) return 0.0;
  return std::exp(-1.0 / ((t - 0.5) * (2.0 - t)));
}

}  // namespace

ConjugateOperator::ConjugateOperator(const LatticeBox& box, const KappaCutoff& kappa)
    : box_(box),
      kappa_(kappa),
      d1_(box.side(),
          [kappa](double x1, double x2) {
            return Complex(grad_lambda_plus(x1, x2, kappa)[0], 0);
          }),
      d2_(box.side(),
          [kappa](double x1, double x2) {
            return Complex(grad_lambda_plus(x1, x2, kappa)[1], 0);
          }),
      to_band_(make_to_band(box, kappa)),
      from_band_(make_from_band(box, kappa)),
      x1_(coordinate_field(box, 1)),
      x2_(coordinate_field(box, 2)) {}

CField ConjugateOperator::apply_branch(const CField& f, int sign) const {
  CField xf1 = x1_.cast<Complex>().cwiseProduct(f);
  CField xf2 = x2_.cast<Complex>().cwiseProduct(f);
  CField out = d1_.apply(xf1) + d2_.apply(xf2);
  out += x1_.cast<Complex>().cwiseProduct(d1_.apply(f));
  out += x2_.cast<Complex>().cwiseProduct(d2_.apply(f));
  out *= 0.5 * sign;
  return out;
}

StateVector ConjugateOperator::apply(const StateVector& u) const {
  StateVector w = to_band_.apply(u);
  w.u1 = apply_branch(w.u1, +1);
  w.u2 = apply_branch(w.u2, -1);
  return from_band_.apply(w);
}

StateVector commutator_gapped_direct(const StateVector& u, const Hamiltonian& gapped,
                                     const ConjugateOperator& conj) {
  StateVector out = gapped.apply(conj.apply(u)) - conj.apply(gapped.apply(u));
  return Complex(0, 1) * out;
}

double commutator_field_value(double xi1, double xi2, const KappaCutoff& kappa) {
  return grad_lambda_plus(xi1, xi2, kappa).squaredNorm();
}

StateVector commutator_gapped_multiplier(const StateVector& u, const KappaCutoff& kappa) {
  MatrixMultiplier m(u.box, [kappa](double x1, double x2) {
    const SymbolPoint sp = eval_symbol(x1, x2, kappa);
    const double f = commutator_field_value(x1, x2, kappa);
    Eigen::Vector2cd d(f, f);  // |grad lambda_-|^2 = |grad lambda_+|^2
    return Mat2(sp.uprime * d.asDiagonal() * sp.uprime.adjoint());
  });
  return m.apply(u);
}

StateVector commutator_potential(const StateVector& u, const RField& w1, const RField& w2,
                                 const ConjugateOperator& conj) {
  StateVector au = conj.apply(u);
  au.u1 = w1.cast<Complex>().cwiseProduct(au.u1);
  au.u2 = w2.cast<Complex>().cwiseProduct(au.u2);
  StateVector wu = u;
  wu.u1 = w1.cast<Complex>().cwiseProduct(wu.u1);
  wu.u2 = w2.cast<Complex>().cwiseProduct(wu.u2);
  StateVector out = au - conj.apply(wu);
  return Complex(0, 1) * out;
}

StateVector perturbation_commutator(const StateVector& u, PerturbationKind kind,
                                    const RealizedPotential& pot, const ConjugateOperator& conj,
                                    const MatrixMultiplier& to_band,
                                    const MatrixMultiplier& from_band) {
  switch (kind) {
    case PerturbationKind::ShortRange: {
      RField s1 = pot.v1 - pot.v_long;
      RField s2 = pot.v2 - pot.v_long;
      return commutator_potential(u, s1, s2, conj);
    }
    case PerturbationKind::LongRange:
      return commutator_potential(u, pot.v_long, pot.v_long, conj);
    case PerturbationKind::RotatedLongRange: {
      StateVector w = to_band.apply(u);
      const CField vw1 = pot.v_long.cast<Complex>().cwiseProduct(w.u1);
      const CField vw2 = pot.v_long.cast<Complex>().cwiseProduct(w.u2);
      StateVector z(u.box);
      z.u1 = pot.v_long.cast<Complex>().cwiseProduct(conj.apply_branch(w.u1, +1)) -
             conj.apply_branch(vw1, +1);
      z.u2 = pot.v_long.cast<Complex>().cwiseProduct(conj.apply_branch(w.u2, -1)) -
             conj.apply_branch(vw2, -1);
      z.u1 *= Complex(0, 1);
      z.u2 *= Complex(0, 1);
      return from_band.apply(z);
    }
  }
  throw std::logic_error("unreachable");
}

MourreConstant mourre_constant(const EnergyWindow& window, const KappaCutoff& kappa, int grid_n) {
  window.validate();
  const double lo = window.abs_lo(), hi = window.abs_hi();
  TorusGrid grid{grid_n};
  MourreConstant out;
  out.grid_min = 1e300;
  for (int j = 0; j < grid_n; ++j) {
    const double x2 = grid.xi(j);
    for (int i = 0; i < grid_n; ++i) {
      const double x1 = grid.xi(i);
      const SymbolPoint sp = eval_symbol(x1, x2, kappa);
      if (sp.lam < lo || sp.lam > hi) continue;
      const double f = grad_lambda_plus(x1, x2, kappa).squaredNorm();
      if (f < out.grid_min) {
        out.grid_min = f;
        out.argmin = {x1, x2};
      }
    }
  }
  if (out.grid_min > 1e299) throw ConfigError("mourre_constant: window mask is empty on the grid");

  // descend F + mu * dist(lambda, [lo,hi])^2 from the grid argmin; the
  // minimizer typically sits on a window boundary contour
  auto value = [&](const Vec2& xi, double mu) {
    const double lam = eval_symbol(xi[0], xi[1], kappa).lam;
    const double d = lam > hi ? lam - hi : (lam < lo ? lo - lam : 0.0);
    return grad_lambda_plus(xi[0], xi[1], kappa).squaredNorm() + mu * d * d;
  };
  Vec2 x = out.argmin;
  for (double mu : {1e4, 1e6, 1e8}) {
    double step = 1e-2;
    double fx = value(x, mu);
    for (int it = 0; it < 800; ++it) {
      const double h = 1e-6;
      Vec2 g((value({x[0] + h, x[1]}, mu) - value({x[0] - h, x[1]}, mu)) / (2 * h),
             (value({x[0], x[1] + h}, mu) - value({x[0], x[1] - h}, mu)) / (2 * h));
      if (g.norm() < 1e-12) break;
      Vec2 cand = x - step * g / g.norm();
      const double fc = value(cand, mu);
      if (fc < fx) {
        x = cand;
        fx = fc;
        step *= 1.3;
      } else {
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
  }
  out.argmin = x;
  out.refined = grad_lambda_plus(x[0], x[1], kappa).squaredNorm();
  const double lam = eval_symbol(x[0], x[1], kappa).lam;
  if (lam < lo - 1e-4 || lam > hi + 1e-4)
    throw std::runtime_error("mourre_constant: descent left the window");
  if (out.refined <= 0.0) throw std::runtime_error("mourre_constant: constant degenerated");
  return out;
}

double projected_commutator_min(const EnergyWindow& window, const KappaCutoff& kappa,
                                const LatticeBox& box) {
  const double lo = window.abs_lo(), hi = window.abs_hi();
  const double big_shift = 50.0;
  MatrixMultiplier proj(box, [&](double x1, double x2) {
    const SymbolPoint sp = eval_symbol(x1, x2, kappa);
    const double in_plus = (sp.lam >= lo && sp.lam <= hi) ? 1.0 : 0.0;
    const double in_minus = (-sp.lam >= window.a && -sp.lam <= window.b) ? 1.0 : 0.0;
    Eigen::Vector2cd d(in_plus, in_minus);
    return Mat2(sp.uprime * d.asDiagonal() * sp.uprime.adjoint());
  });
  Hamiltonian gapped(HamKind::GappedFree, box, kappa);
  ConjugateOperator conj(box, kappa);
  LinOp op = [&](const CVec& v) {
    StateVector u = unpack(v, box);
    StateVector pu = proj.apply(u);
    StateVector pbpu = proj.apply(commutator_gapped_direct(pu, gapped, conj));
    StateVector rest = u - pu;
    axpy(big_shift, rest, pbpu);
    return pack(pbpu);
  };
  return hermitian_extreme_eig(op, 2 * box.sites(), false, {260, 1e-9, 7});
}

bool LadderNorms::stable(double max_growth) const {
  for (size_t i = 1; i < norms.size(); ++i)
    if (norms[i] > max_growth * norms[i - 1] + 1e-14) return false;
  return true;
}

LadderNorms perturbed_mourre_check(const PotentialSpec& spec, PerturbationKind kind,
                                   const KappaCutoff& kappa, const std::vector<int>& ladder) {
  LadderNorms out;
  out.kind = kind;
  out.half_widths = ladder;
  for (int hw : ladder) {
    LatticeBox box = make_box(hw, Boundary::Periodic);
    RealizedPotential pot = realize_potential(spec, box);
    ConjugateOperator conj(box, kappa);
    MatrixMultiplier to_band = make_to_band(box, kappa);
    MatrixMultiplier from_band = make_from_band(box, kappa);
    RField w = weight_field(box, spec.rho);
    LinOp b = [&](const CVec& v) {
      StateVector u = unpack(v, box);
      StateVector c = perturbation_commutator(u, kind, pot, conj, to_band, from_band);
      return pack(apply_weight(c, w));
    };
    LinOp bT = [&](const CVec& v) {
      StateVector u = apply_weight(unpack(v, box), w);
      StateVector c = perturbation_commutator(u, kind, pot, conj, to_band, from_band);
      return pack(c);
    };
    out.norms.push_back(operator_norm(b, bT, 2 * box.sites(), {1e-6, 300, 31}));
  }
  return out;
}

DyadicScan c11_integrand_scan(const PotentialSpec& spec, PerturbationKind kind,
                              const KappaCutoff& kappa, int kmax) {
  DyadicScan scan;
  std::vector<double> lx, ly;
  for (int k = 0; k <= kmax; ++k) {
    const double lambda = std::pow(2.0, k);
    // the theta shell reaches <x> = 2 lambda; keep it inside the box
    const int hw = std::max(12, int(2 * lambda) + 8);
    LatticeBox box = make_box(hw, Boundary::Periodic);
    RealizedPotential pot = realize_potential(spec, box);
    ConjugateOperator conj(box, kappa);
    MatrixMultiplier to_band = make_to_band(box, kappa);
    MatrixMultiplier from_band = make_from_band(box, kappa);
    const int s = box.side();
    RField theta(s, s);
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i)
        theta(i, j) = dyadic_bump(jbracket(box.coord(i), box.coord(j)) / lambda);
    LinOp b = [&](const CVec& v) {
      StateVector u = unpack(v, box);
      StateVector c = perturbation_commutator(u, kind, pot, conj, to_band, from_band);
      return pack(apply_weight(c, theta));
    };
    LinOp bT = [&](const CVec& v) {
      StateVector u = apply_weight(unpack(v, box), theta);
      return pack(perturbation_commutator(u, kind, pot, conj, to_band, from_band));
    };
    const double nrm = operator_norm(b, bT, 2 * box.sites(), {1e-5, 150, 53});
    scan.lambdas.push_back(lambda);
    scan.norms.push_back(nrm);
    if (nrm > 0) {
      lx.push_back(std::log(lambda));
      ly.push_back(std::log(nrm));
    }
  }
  if (lx.size() >= 2) scan.fitted_exponent = fit_line(lx, ly).slope;
  return scan;
}

bool EigenCountResult::stable() const {
  const size_t n = ladder.size();
  if (n < 2) return false;
  return ladder[n - 1].interior_count == ladder[n - 2].interior_count;
}

namespace {

// dense circulant block of a real even multiplier symbol (band picture)
Eigen::MatrixXd multiplier_dense(const LatticeBox& box,
                                 const std::function<double(double, double)>& symbol) {
  const int s = box.side();
  const Fourier& f = fourier(s);
  CField spec(s, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i) spec(i, j) = Complex(symbol(f.grid().xi(i), f.grid().xi(j)), 0);
  CField kern = f.idft(spec);
  const int c = s / 2;
  const int n = s * s;
  Eigen::MatrixXd m(n, n);
  for (int yj = 0; yj < s; ++yj)
    for (int yi = 0; yi < s; ++yi) {
      const int ycol = yj * s + yi;
      for (int xj = 0; xj < s; ++xj)
        for (int xi = 0; xi < s; ++xi) {
          const int d1 = ((xi - yi + s) % s + c) % s;
          const int d2 = ((xj - yj + s) % s + c) % s;
          m(xj * s + xi, ycol) = std::real(kern(d1, d2));
        }
    }
  return m;
}

double interior_mass_fraction(const CVec& v, const LatticeBox& box, int components) {
  const int s = box.side();
  const int half = box.half_width / 2;
  double inside = 0, total = 0;
  for (int comp = 0; comp < components; ++comp) {
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i) {
        const double m = std::norm(v[comp * s * s + j * s + i]);
        total += m;
        if (std::abs(box.coord(i)) <= half && std::abs(box.coord(j)) <= half) inside += m;
      }
  }
  return total > 0 ? inside / total : 0.0;
}

}  // namespace

EigenCountResult eigen_count(double lo, double hi, HamKind kind, const PotentialSpec& spec,
                             const KappaCutoff& kappa, const std::vector<int>& ladder,
                             double interior_mass) {
  if (kind != HamKind::Full && kind != HamKind::GappedLong)
    throw std::invalid_argument("eigen_count: perturbed operators only");
  EigenCountResult out;
  for (int hw : ladder) {
    LatticeBox box = make_box(hw, Boundary::Periodic);
    RealizedPotential pot = realize_potential(spec, box);
    EigenCountEntry entry;
    entry.half_width = hw;
    entry.interior_count = 0;
    if (kind == HamKind::Full) {
      // real symmetric stencil + diagonal
      Eigen::SparseMatrix<Complex> hs = assemble_sparse(box, &pot);
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(hs.rows(), hs.cols());
      for (int k = 0; k < hs.outerSize(); ++k)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(hs, k); it; ++it)
          h(it.row(), it.col()) += std::real(it.value());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      for (int c = 0; c < h.rows(); ++c) {
        const double ev = es.eigenvalues()[c];
        if (ev < lo || ev > hi) continue;
        CVec vec = es.eigenvectors().col(c).cast<Complex>();
        if (interior_mass_fraction(vec, box, 2) >= interior_mass) {
          ++entry.interior_count;
          entry.interior_values.push_back(ev);
        }
      }
    } else {
      // two decoupled scalar blocks lambda_#(D) + V_l in the band picture
      MatrixMultiplier from_band = make_from_band(box, kappa);
      for (int sign : {+1, -1}) {
        const double vmax = pot.v_long.maxCoeff(), vmin = pot.v_long.minCoeff();
        const double smax = (sign > 0 ? 3.0 : -kappa.g) + vmax;
        const double smin = (sign > 0 ? kappa.g : -3.0) + vmin;
        if (smax < lo || smin > hi) continue;
        auto symbol = [&](double x1, double x2) {
          return sign * eval_symbol(x1, x2, kappa).lam;
        };
        Eigen::MatrixXd block = multiplier_dense(box, symbol);
        const int n = box.sites();
        for (int c = 0; c < n; ++c) block(c, c) += pot.v_long.data()[c];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
        for (int c = 0; c < n; ++c) {
          const double ev = es.eigenvalues()[c];
          if (ev < lo || ev > hi) continue;
          StateVector w(box);
          Eigen::VectorXd col = es.eigenvectors().col(c);
          CField comp =
              Eigen::Map<const RField>(col.data(), box.side(), box.side()).cast<Complex>();
          if (sign > 0)
            w.u1 = comp;
          else
            w.u2 = comp;
          StateVector v = from_band.apply(w);
          if (interior_mass_fraction(pack(v), box, 2) >= interior_mass) {
            ++entry.interior_count;
            entry.interior_values.push_back(ev);
          }
        }
      }
    }
    std::sort(entry.interior_values.begin(), entry.interior_values.end());
    out.ladder.push_back(std::move(entry));
  }
  return out;
}

double level_spacing_estimate(double lambda, const KappaCutoff& kappa, int box_side,
                              double halfwidth) {
  const int n = 516;
  TorusGrid grid{n};
  long count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double lam = eval_symbol(grid.xi(i), grid.xi(j), kappa).lam;
      if (std::abs(lam - lambda) <= halfwidth) ++count;
      if (std::abs(-lam - lambda) <= halfwidth) ++count;
    }
  const double states = double(count) / double(n) / double(n) * sq(double(box_side));
  if (states < 1.0) return 2.0 * halfwidth;  // spectral gap at this resolution
  return 2.0 * halfwidth / states;
}

namespace {

// (lambda_sign(D) + V_l - z)^{-1} on one scalar branch; left-preconditioned
// GMRES with the free multiplier resolvent
struct TildeSolver {
  LatticeBox box;
  const RField* v_long;
  CField pre;

  TildeSolver(const LatticeBox& bx, const RField& vl, const KappaCutoff& kap, int sign, Complex z)
      : box(bx), v_long(&vl) {
    const int s = bx.side();
    const TorusGrid& g = fourier(s).grid();
    pre.resize(s, s);
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i)
        pre(i, j) = 1.0 / (double(sign) * eval_symbol(g.xi(i), g.xi(j), kap).lam - z);
  }

  CField apply_pre(const CField& u) const {
    const Fourier& f = fourier(box.side());
    return f.idft(pre.cwiseProduct(f.dft(u)).eval());
  }

  CField solve(const CField& b, double tol) const {
    LinOp op = [&](const CVec& v) {
      CField u = unpack_field(v, box.side());
      CField vu = v_long->cast<Complex>().cwiseProduct(u);
      return pack_field(CField(u + apply_pre(vu)));
    };
    CVec rhs = pack_field(apply_pre(b));
    GmresOpts opts;
    opts.restart = 110;
    opts.max_outer = 12;
    opts.rel_tol = tol;
    GmresResult r = gmres(op, rhs, opts);
    if (!r.converged && r.rel_residual > 100 * tol)
      throw std::runtime_error("lap_scan: band-picture solve stagnated (rel residual " +
                               std::to_string(r.rel_residual) + ")");
    return unpack_field(r.x, box.side());
  }
};

}  // namespace

LapScan lap_scan(HamKind kind, const PotentialSpec& spec, const KappaCutoff& kappa,
                 const LatticeBox& box, double s, std::vector<double> lambdas,
                 std::vector<double> epsilons) {
  if (s <= 0.5) throw ConfigError("lap_scan: weight exponent must exceed 1/2");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<double>());
  LapScan scan;
  scan.lambdas = lambdas;
  scan.epsilons = epsilons;
  scan.norms.resize(lambdas.size(), epsilons.size());
  double worst_spacing = 0;
  for (double l : lambdas)
    worst_spacing = std::max(worst_spacing, level_spacing_estimate(l, kappa, box.side()));
  scan.honesty_floor = 3.0 * worst_spacing;
  for (double e : epsilons)
    if (e < scan.honesty_floor)
      throw ConfigError("lap_scan: eps " + std::to_string(e) +
                        " is below the truncation honesty floor " +
                        std::to_string(scan.honesty_floor));

  RField w = weight_field(box, -s);
  const int dim = 2 * box.sites();
  RealizedPotential pot = realize_potential(spec, box);

  for (size_t li = 0; li < lambdas.size(); ++li) {
    for (size_t ei = 0; ei < epsilons.size(); ++ei) {
      const Complex z(lambdas[li], epsilons[ei]);
      std::function<CVec(const CVec&)> resolvent, resolvent_adj;
      std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>> lu;
      std::shared_ptr<MatrixMultiplier> to_band, from_band;
      std::shared_ptr<TildeSolver> sol_p, sol_m;
      if (kind == HamKind::Free || kind == HamKind::Full) {
        Eigen::SparseMatrix<Complex> h =
            assemble_sparse(box, kind == HamKind::Full ? &pot : nullptr);
        Eigen::SparseMatrix<Complex> eye(dim, dim);
        eye.setIdentity();
        Eigen::SparseMatrix<Complex> shifted = h - z * eye;
        lu = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<Complex>>>();
        lu->compute(shifted);
        if (lu->info() != Eigen::Success)
          throw std::runtime_error("lap_scan: sparse factorization failed");
        resolvent = [lu](const CVec& v) { return CVec(lu->solve(v)); };
        // the stencil matrix is real symmetric, so the adjoint solve is
        // conj o solve o conj
        resolvent_adj = [lu](const CVec& v) {
          return CVec(lu->solve(v.conjugate()).conjugate());
        };
      } else if (kind == HamKind::GappedLong) {
        to_band = std::make_shared<MatrixMultiplier>(make_to_band(box, kappa));
        from_band = std::make_shared<MatrixMultiplier>(make_from_band(box, kappa));
        sol_p = std::make_shared<TildeSolver>(box, pot.v_long, kappa, +1, z);
        sol_m = std::make_shared<TildeSolver>(box, pot.v_long, kappa, -1, z);
        LatticeBox bx = box;
        auto solve_full = [bx, sol_p, sol_m, to_band, from_band](const CVec& v, bool adj) {
          StateVector u = unpack(v, bx);
          StateVector t = to_band->apply(u);
          if (!adj) {
            t.u1 = sol_p->solve(t.u1, 1e-8);
            t.u2 = sol_m->solve(t.u2, 1e-8);
          } else {
            t.u1 = sol_p->solve(t.u1.conjugate().eval(), 1e-8).conjugate();
            t.u2 = sol_m->solve(t.u2.conjugate().eval(), 1e-8).conjugate();
          }
          return pack(from_band->apply(t));
        };
        resolvent = [solve_full](const CVec& v) { return solve_full(v, false); };
        resolvent_adj = [solve_full](const CVec& v) { return solve_full(v, true); };
      } else {
        throw std::invalid_argument("lap_scan: unsupported operator kind");
      }
      LinOp t = [&](const CVec& v) {
        StateVector u = apply_weight(unpack(v, box), w);
        return pack(apply_weight(unpack(resolvent(pack(u)), box), w));
      };
      LinOp tAdj = [&](const CVec& v) {
        StateVector u = apply_weight(unpack(v, box), w);
        return pack(apply_weight(unpack(resolvent_adj(pack(u)), box), w));
      };
      scan.norms(li, ei) = operator_norm(t, tAdj, dim, {1e-4, 120, 71});
    }
  }
  double worst = 0;
  const size_t ne = epsilons.size();
  if (ne >= 2) {
    for (size_t li = 0; li < lambdas.size(); ++li) {
      const double a = scan.norms(li, ne - 2), b = scan.norms(li, ne - 1);
      if (a > 0) worst = std::max(worst, std::abs(b - a) / a);
    }
  }
  scan.worst_plateau_deviation = worst;
  return scan;
}

KatoCheck kato_smooth_check(HamKind kind, const PotentialSpec& spec, const KappaCutoff& kappa,
                            const LatticeBox& box, double s, const SmoothWindow& chi,
                            std::vector<double> lambdas, std::vector<double> epsilons) {
  KatoCheck out;
  out.lambdas = lambdas;
  out.epsilons = epsilons;
  out.norms.resize(lambdas.size(), epsilons.size());
  auto pot_ptr = std::make_shared<RealizedPotential>(realize_potential(spec, box));
  const bool perturbed = kind == HamKind::Full || kind == HamKind::GappedLong;
  Hamiltonian ham(kind, box, kappa, perturbed ? pot_ptr : nullptr);
  RField w = weight_field(box, -s);
  LinOp hop = ham.as_linop();
  for (size_t li = 0; li < lambdas.size(); ++li) {
    for (size_t ei = 0; ei < epsilons.size(); ++ei) {
      const double lambda = lambdas[li], eps = epsilons[ei];
      // chi(S) delta(lambda,eps) chi(S) = f(S) with a single smooth f
      auto f = [&](double x) {
        const double c = chi(x);
        return c * c * (eps / M_PI) / (sq(x - lambda) + eps * eps);
      };
      ChebyshevSeries series =
          ChebyshevSeries::of_function(f, ham.radius(), 1e-5 / (M_PI * eps), 16384);
      LinOp t = [&](const CVec& v) {
        StateVector u = apply_weight(unpack(v, box), w);
        CVec r = series.apply(hop, pack(u));
        return pack(apply_weight(unpack(r, box), w));
      };
      out.norms(li, ei) = hermitian_extreme_eig(t, 2 * box.sites(), true, {60, 1e-5, 19});
      out.sup_norm = std::max(out.sup_norm, out.norms(li, ei));
    }
  }
  return out;
}

Eigen::SparseMatrix<Complex> assemble_sparse(const LatticeBox& box, const RealizedPotential* pot) {
  const int sside = box.side();
  const int n = box.sites();
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(8 * n);
  auto idx = [sside](int comp, int i, int j) { return comp * sside * sside + j * sside + i; };
  auto nb = [&](int i, int d) -> int {
    int k = i + d;
    if (k >= 0 && k < sside) return k;
    if (box.boundary == Boundary::Periodic) return (k + sside) % sside;
    return -1;
  };
  for (int j = 0; j < sside; ++j) {
    for (int i = 0; i < sside; ++i) {
      trip.emplace_back(idx(0, i, j), idx(1, i, j), Complex(-1, 0));
      if (int im = nb(i, -1); im >= 0)
        trip.emplace_back(idx(0, i, j), idx(1, im, j), Complex(-1, 0));
      if (int jm = nb(j, -1); jm >= 0)
        trip.emplace_back(idx(0, i, j), idx(1, i, jm), Complex(-1, 0));
      trip.emplace_back(idx(1, i, j), idx(0, i, j), Complex(-1, 0));
      if (int ip = nb(i, +1); ip >= 0)
        trip.emplace_back(idx(1, i, j), idx(0, ip, j), Complex(-1, 0));
      if (int jp = nb(j, +1); jp >= 0)
        trip.emplace_back(idx(1, i, j), idx(0, i, jp), Complex(-1, 0));
      if (pot) {
        trip.emplace_back(idx(0, i, j), idx(0, i, j), Complex(pot->v1(i, j), 0));
        trip.emplace_back(idx(1, i, j), idx(1, i, j), Complex(pot->v2(i, j), 0));
      }
    }
  }
  Eigen::SparseMatrix<Complex> m(2 * n, 2 * n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace hexscat
