#include "hexscat/symbols.hpp"

#include <algorithm>
#include <set>

namespace hexscat {

namespace {

// flatness rate of the profile tail; shrinks when the gap sits close to
// its delta/2 ceiling so that E + kappa^2 >= g^2 keeps holding
inline double tail_rate(double beta) { return std::min(0.25, 0.25 * (1.0 - beta)); }

// h(0) = 1, h smooth, flat zero at t = 1
inline double tail(double t, double c) {
  if (t >= 1.0) return 0.0;
  return std::exp(c * (1.0 - 1.0 / (1.0 - t * t)));
}

inline double tail_deriv(double t, double c) {
  if (t >= 1.0) return 0.0;
  const double d = 1.0 - t * t;
  return tail(t, c) * (-2.0 * c * t / (d * d));
}

}  // namespace

// kappa(E)^2 = g^2 (1-t) h(t), t = E/(delta^2/4). This keeps
//   0 < E + kappa^2 < delta^2/4  and  E + kappa^2 >= g^2
// on the support: the first since g^2 h < delta^2/4, the second is scanned
// in validate().
double KappaCutoff::operator()(double e) const {
  const double q = support_end();
  if (e >= q || e < 0.0) return 0.0;
  const double t = e / q;
  const double c = tail_rate(g * g / q);
  return g * std::sqrt((1.0 - t) * tail(t, c));
}

double KappaCutoff::derivative(double e) const {
  const double q = support_end();
  if (e >= q || e < 0.0) return 0.0;
  const double t = e / q;
  const double c = tail_rate(g * g / q);
  const double f = (1.0 - t) * tail(t, c);
  const double fp = -tail(t, c) + (1.0 - t) * tail_deriv(t, c);
  return g * fp / (2.0 * std::sqrt(f)) / q;
}

void KappaCutoff::validate(int scan_points) const {
  if (delta <= 0.0) throw ConfigError("kappa.delta: must be positive");
  if (!(g > 0.0 && g < 0.5 * delta))
    throw ConfigError("kappa.g: gap must lie in (0, delta/2)");
  const double q = support_end();
  for (int i = 0; i <= scan_points; ++i) {
    const double e = q * double(i) / scan_points;
    const double k = (*this)(e);
    const double v = e + k * k;
    if (e < q && !(v > 0.0 && v < q))
      throw ConfigError("kappa: profile violates 0 < E + kappa(E)^2 < delta^2/4 at E=" +
                        std::to_string(e));
    if (e < q && v < g * g * (1.0 - 1e-12))
      throw ConfigError("kappa: positive band dips below the gap value at E=" + std::to_string(e));
    if (e >= q && k != 0.0) throw ConfigError("kappa: support leaks past delta^2/4");
  }
  if (std::abs((*this)(0.0) - g) > 1e-14) throw ConfigError("kappa: kappa(0) != g");
}

KappaCutoff build_kappa(double delta, double g) {
  KappaCutoff k{delta, g};
  k.validate();
  return k;
}

void EnergyWindow::validate(double margin) const {
  if (!(a < b)) throw ConfigError("window: need a < b");
  if (a < -3.0 || b > 3.0) throw ConfigError("window: must lie inside the band [-3,3]");
  for (double thr : {0.0, 1.0, -1.0, 3.0, -3.0}) {
    if (a - margin <= thr && thr <= b + margin) {
      throw ConfigError("window [" + std::to_string(a) + "," + std::to_string(b) +
                        "]: must avoid threshold " + std::to_string(thr) + " by margin " +
                        std::to_string(margin) + " (thresholds are 0, +-1, +-3)");
    }
  }
  if (a < 0.0 && b > 0.0) throw ConfigError("window: must not straddle 0");
}

SymbolPoint eval_symbol(double xi1, double xi2, const KappaCutoff& kappa) {
  SymbolPoint sp;
  sp.alpha = alpha(xi1, xi2);
  sp.p2 = p_squared(xi1, xi2);
  if (sp.p2 < 0.0) sp.p2 = 0.0;
  sp.p = std::sqrt(sp.p2);
  sp.kap = kappa(sp.p2);
  sp.lam = std::sqrt(sp.kap * sp.kap + sp.p2);
  const double m = sp.kap + sp.lam;  // > 0 everywhere: the gap removes the degeneracy
  sp.cnorm = std::sqrt(sp.p2 + m * m);
  sp.uprime << Complex(m, 0), -std::conj(sp.alpha), sp.alpha, Complex(m, 0);
  sp.uprime /= sp.cnorm;
  sp.hprime << Complex(sp.kap, 0), std::conj(sp.alpha), sp.alpha, Complex(-sp.kap, 0);
  return sp;
}

Vec2 grad_lambda_plus(double xi1, double xi2, const KappaCutoff& kappa) {
  const double e = p_squared(xi1, xi2);
  const double k = kappa(e);
  const double kp = kappa.derivative(e);
  const double lam = std::sqrt(k * k + std::max(e, 0.0));
  // d(lambda)/dE = (1 + 2 kappa kappa') / (2 lambda); lambda >= g > 0
  return (1.0 + 2.0 * k * kp) / (2.0 * lam) * grad_p_squared(xi1, xi2);
}

Mat2 chi_of_h0(double xi1, double xi2, const std::function<double(double)>& chi) {
  const Complex a = alpha(xi1, xi2);
  const double p = std::abs(a);
  const double cp = chi(p), cm = chi(-p);
  Mat2 out = 0.5 * (cp + cm) * Mat2::Identity();
  if (p > 1e-14) {
    out += (cp - cm) / (2.0 * p) * h0_symbol(xi1, xi2);
  }
  return out;
}

Mat2 chi_of_hprime(const SymbolPoint& sp, const std::function<double(double)>& chi) {
  Eigen::Vector2cd d(chi(sp.lam), chi(-sp.lam));
  return sp.uprime * d.asDiagonal() * sp.uprime.adjoint();
}

SymbolGrid build_symbol_grid(const TorusGrid& grid, const EnergyWindow& window,
                             const KappaCutoff& kappa) {
  window.validate();
  kappa.validate(1000);
  SymbolGrid sg;
  sg.grid = grid;
  sg.kappa = kappa;
  const int n = grid.n;
  sg.alpha.resize(n, n);
  sg.p.resize(n, n);
  sg.kappa_of_p2.resize(n, n);
  sg.lambda_plus.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const double xi2 = grid.xi(j);
    for (int i = 0; i < n; ++i) {
      const double xi1 = grid.xi(i);
      const Complex a = alpha(xi1, xi2);
      const double p2 = p_squared(xi1, xi2);
      const double k = kappa(p2);
      sg.alpha(i, j) = a;
      sg.p(i, j) = std::abs(a);
      sg.kappa_of_p2(i, j) = k;
      sg.lambda_plus(i, j) = std::sqrt(k * k + std::max(p2, 0.0));
    }
  }
  return sg;
}

std::vector<double> CriticalPointReport::threshold_set() const {
  std::set<double> s{0.0};
  for (double v : values) {
    // cluster to 1e-9 to merge the symmetric copies
    bool found = false;
    for (double w : s)
      if (std::abs(std::abs(v) - std::abs(w)) < 1e-9) found = true;
    if (!found) {
      s.insert(v);
      s.insert(-v);
    }
  }
  return {s.begin(), s.end()};
}

CriticalPointReport eval_critical_points(const TorusGrid& grid) {
  CriticalPointReport rep;
  const int n = grid.n;
  double pmin = 1e300, pmax = -1e300;
  std::vector<Vec2> seeds;
  for (int j = 0; j < n; ++j) {
    const double x2 = grid.xi(j);
    for (int i = 0; i < n; ++i) {
      const double x1 = grid.xi(i);
      const double p2 = p_squared(x1, x2);
      const double p = std::sqrt(std::max(p2, 0.0));
      pmin = std::min(pmin, p);
      pmax = std::max(pmax, p);
      if (p < 0.25) continue;  // Dirac neighborhoods are not critical points of p
      const Vec2 gr = grad_p_squared(x1, x2);
      if (gr.squaredNorm() < 1e-2) seeds.emplace_back(x1, x2);
    }
  }
  rep.band_min = pmin;
  rep.band_max = pmax;
  if (grid.dirac_on_grid()) {
    for (double s : {1.0, -1.0}) {
      const double v = std::abs(alpha(s * kTwoPi / 3.0, -s * kTwoPi / 3.0));
      rep.dirac_points_p.push_back(v);
    }
  }
  // Newton refinement of grad p^2 = 0 from each seed, dedup afterwards
  std::vector<Vec2> found;
  for (const Vec2& s0 : seeds) {
    Vec2 x = s0;
    bool ok = true;
    for (int it = 0; it < 60; ++it) {
      const Vec2 gr = grad_p_squared(x[0], x[1]);
      if (gr.norm() < 1e-13) break;
      const Eigen::Matrix2d h = hess_p_squared(x[0], x[1]);
      if (std::abs(h.determinant()) < 1e-10) {
        ok = false;
        break;
      }
      x -= h.inverse() * gr;
      if (it == 59) ok = false;
    }
    if (!ok) continue;
    // wrap into [-pi, pi)
    for (int k = 0; k < 2; ++k) {
      while (x[k] < -M_PI) x[k] += kTwoPi;
      while (x[k] >= M_PI) x[k] -= kTwoPi;
    }
    bool dup = false;
    for (const Vec2& y : found) {
      Vec2 d = x - y;
      for (int k = 0; k < 2; ++k) d[k] = std::remainder(d[k], kTwoPi);
      if (d.norm() < 1e-6) dup = true;
    }
    if (!dup) found.push_back(x);
  }
  std::sort(found.begin(), found.end(), [](const Vec2& a, const Vec2& b) {
    return std::make_pair(a[0], a[1]) < std::make_pair(b[0], b[1]);
  });
  rep.points = found;
  for (const Vec2& x : found) rep.values.push_back(std::sqrt(std::max(p_squared(x), 0.0)));
  return rep;
}

}  // namespace hexscat
