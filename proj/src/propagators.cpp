#include "hexscat/propagators.hpp"

namespace hexscat {

CVec pack(const StateVector& u) {
  const int n = u.box.sites();
  CVec v(2 * n);
  v.head(n) = Eigen::Map<const CVec>(u.u1.data(), n);
  v.tail(n) = Eigen::Map<const CVec>(u.u2.data(), n);
  return v;
}

StateVector unpack(const CVec& v, const LatticeBox& box) {
  const int s = box.side();
  const int n = box.sites();
  StateVector u(box);
  u.u1 = Eigen::Map<const CField>(v.data(), s, s);
  u.u2 = Eigen::Map<const CField>(v.data() + n, s, s);
  return u;
}

CVec pack_field(const CField& f) {
  return Eigen::Map<const CVec>(f.data(), f.size());
}

CField unpack_field(const CVec& v, int side) {
  return Eigen::Map<const CField>(v.data(), side, side);
}

MatrixMultiplier::MatrixMultiplier(const LatticeBox& box,
                                   const std::function<Mat2(double, double)>& fn)
    : box_(box) {
  const int s = box.side();
  const TorusGrid& g = fourier(s).grid();
  m00_.resize(s, s);
  m01_.resize(s, s);
  m10_.resize(s, s);
  m11_.resize(s, s);
  for (int j = 0; j < s; ++j) {
    for (int i = 0; i < s; ++i) {
      const Mat2 m = fn(g.xi(i), g.xi(j));
      m00_(i, j) = m(0, 0);
      m01_(i, j) = m(0, 1);
      m10_(i, j) = m(1, 0);
      m11_(i, j) = m(1, 1);
    }
  }
}

StateVector MatrixMultiplier::apply(const StateVector& u) const {
  const Fourier& f = fourier(box_.side());
  CField f1 = f.dft(u.u1);
  CField f2 = f.dft(u.u2);
  CField g1 = m00_.cwiseProduct(f1) + m01_.cwiseProduct(f2);
  CField g2 = m10_.cwiseProduct(f1) + m11_.cwiseProduct(f2);
  StateVector v(u.box);
  f.idft(g1, v.u1);
  f.idft(g2, v.u2);
  return v;
}

ScalarMultiplier::ScalarMultiplier(int side, const std::function<Complex(double, double)>& fn)
    : side_(side) {
  const TorusGrid& g = fourier(side).grid();
  m_.resize(side, side);
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i) m_(i, j) = fn(g.xi(i), g.xi(j));
}

CField ScalarMultiplier::apply(const CField& u) const {
  const Fourier& f = fourier(side_);
  return f.idft(m_.cwiseProduct(f.dft(u)).eval());
}

MatrixMultiplier make_to_band(const LatticeBox& box, const KappaCutoff& kappa) {
  return {box, [kappa](double x1, double x2) {
            return Mat2(eval_symbol(x1, x2, kappa).uprime.adjoint());
          }};
}

MatrixMultiplier make_from_band(const LatticeBox& box, const KappaCutoff& kappa) {
  return {box, [kappa](double x1, double x2) { return eval_symbol(x1, x2, kappa).uprime; }};
}

Hamiltonian::Hamiltonian(HamKind kind, const LatticeBox& box, const KappaCutoff& kappa,
                         std::shared_ptr<const RealizedPotential> pot)
    : kind_(kind), box_(box), kappa_(kappa), pot_(std::move(pot)) {
  double vsup = 0.0;
  if (kind_ == HamKind::Full) {
    if (!pot_) throw std::invalid_argument("Hamiltonian: Full needs a potential");
    vsup = pot_->sup_abs();
  }
  if (kind_ == HamKind::GappedLong) {
    if (!pot_) throw std::invalid_argument("Hamiltonian: GappedLong needs a potential");
    vsup = pot_->v_long.cwiseAbs().maxCoeff();
  }
  radius_ = 3.0 + vsup + 0.25;
  const bool needs_fft = kind_ == HamKind::GappedFree || kind_ == HamKind::GappedLong;
  if (needs_fft && box_.boundary != Boundary::Periodic && kind_ == HamKind::GappedFree)
    throw std::invalid_argument("GappedFree requires a periodic box");
  if (needs_fft) {
    gapped_ = std::make_shared<MatrixMultiplier>(
        box_, [this](double x1, double x2) { return eval_symbol(x1, x2, kappa_).hprime; });
  }
  if (kind_ == HamKind::GappedLong) {
    to_band_ = std::make_shared<MatrixMultiplier>(make_to_band(box_, kappa_));
    from_band_ = std::make_shared<MatrixMultiplier>(make_from_band(box_, kappa_));
  }
}

StateVector Hamiltonian::apply(const StateVector& u) const {
  switch (kind_) {
    case HamKind::Free:
      return apply_h0(u);
    case HamKind::Full:
      return apply_h(u, *pot_);
    case HamKind::GappedFree:
      return gapped_->apply(u);
    case HamKind::GappedLong: {
      // H'_l = H'_0 + U' V_l U'^*
      StateVector v = gapped_->apply(u);
      StateVector w = to_band_->apply(u);
      w.u1 = pot_->v_long.cast<Complex>().cwiseProduct(w.u1);
      w.u2 = pot_->v_long.cast<Complex>().cwiseProduct(w.u2);
      StateVector z = from_band_->apply(w);
      axpy(1.0, z, v);
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

LinOp Hamiltonian::as_linop() const {
  return [this](const CVec& v) { return pack(apply(unpack(v, box_))); };
}

StateVector free_evolve(const StateVector& u, double t, HamKind which, const KappaCutoff& kappa) {
  if (u.box.boundary != Boundary::Periodic)
    throw std::invalid_argument("free_evolve: periodic box required");
  if (which == HamKind::Free) {
    MatrixMultiplier prop(u.box, [t](double x1, double x2) {
      // H0(xi)^2 = p^2: exp(-itH0) = cos(pt) I - i sinc(pt) t H0
      const Complex a = alpha(x1, x2);
      const double p = std::abs(a);
      const double c = std::cos(p * t);
      const double s = p > 1e-14 ? std::sin(p * t) / p : t;
      Mat2 m = c * Mat2::Identity();
      m += Complex(0, -s) * h0_symbol(x1, x2);
      return m;
    });
    return prop.apply(u);
  }
  if (which == HamKind::GappedFree) {
    MatrixMultiplier prop(u.box, [t, kappa](double x1, double x2) {
      const SymbolPoint sp = eval_symbol(x1, x2, kappa);
      Eigen::Vector2cd ph(std::polar(1.0, -t * sp.lam), std::polar(1.0, t * sp.lam));
      return Mat2(sp.uprime * ph.asDiagonal() * sp.uprime.adjoint());
    });
    return prop.apply(u);
  }
  throw std::invalid_argument("free_evolve: only the two multiplier operators");
}

PolynomialPropagator::PolynomialPropagator(const Hamiltonian& ham, double t, double eps)
    : ham_(ham), t_(t), series_(ChebyshevSeries::of_exp(t, ham.radius(), eps)) {}

StateVector PolynomialPropagator::apply(const StateVector& u) const {
  // enclosure sanity: a Rayleigh quotient outside the radius means the
  // expansion interval is wrong and the recurrence will blow up
  const double nrm2 = norm2_sq(u);
  if (nrm2 > 0) {
    const double rq = std::abs(std::real(dot(u, ham_.apply(u)))) / nrm2;
    if (rq > ham_.radius())
      throw std::runtime_error("PolynomialPropagator: spectral enclosure violated");
  }
  CVec out = series_.apply(ham_.as_linop(), pack(u));
  return unpack(out, ham_.box());
}

StateVector full_evolve(const StateVector& u, double t, const Hamiltonian& ham, double eps_prop) {
  // exact route when the operator is a pure multiplier
  if (ham.kind() == HamKind::Free || ham.kind() == HamKind::GappedFree) {
    if (u.box.boundary == Boundary::Periodic) return free_evolve(u, t, ham.kind(), ham.kappa());
  }
  if (ham.kind() == HamKind::Full && ham.potential()->sup_abs() == 0.0 &&
      u.box.boundary == Boundary::Periodic) {
    return free_evolve(u, t, HamKind::Free, ham.kappa());
  }
  PolynomialPropagator prop(ham, t, eps_prop);
  return prop.apply(u);
}

FunctionOfOperator::FunctionOfOperator(const Hamiltonian& ham,
                                       const std::function<double(double)>& chi, double eps_fc)
    : ham_(ham), series_(ChebyshevSeries::of_function(chi, ham.radius(), eps_fc)) {}

StateVector FunctionOfOperator::apply(const StateVector& u) const {
  CVec out = series_.apply(ham_.as_linop(), pack(u));
  return unpack(out, ham_.box());
}

StateVector apply_chi(const StateVector& u, const std::function<double(double)>& chi,
                      const Hamiltonian& ham, double eps_fc) {
  FunctionOfOperator f(ham, chi, eps_fc);
  return f.apply(u);
}

StateVector apply_chi_multiplier(const StateVector& u, const std::function<double(double)>& chi,
                                 HamKind which, const KappaCutoff& kappa) {
  if (which == HamKind::Free) {
    MatrixMultiplier m(u.box, [&](double x1, double x2) { return chi_of_h0(x1, x2, chi); });
    return m.apply(u);
  }
  if (which == HamKind::GappedFree) {
    MatrixMultiplier m(u.box, [&](double x1, double x2) {
      return chi_of_hprime(eval_symbol(x1, x2, kappa), chi);
    });
    return m.apply(u);
  }
  throw std::invalid_argument("apply_chi_multiplier: only multiplier operators");
}

}  // namespace hexscat
