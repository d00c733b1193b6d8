#include "hexscat/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace hexscat {

CVec random_unit_vector(int dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  CVec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(d(rng), d(rng));
  v /= v.norm();
  return v;
}

double operator_norm(const LinOp& a, const LinOp& aT, int dim, const PowerOpts& opts) {
  CVec v = random_unit_vector(dim, opts.seed);
  double sigma = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    CVec w = a(v);
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    CVec z = aT(w);
    const double norm_z = z.norm();
    if (norm_z == 0.0) return 0.0;
    const double next = std::sqrt(norm_z);  // ||A*A v||^{1/2} -> sigma_max
    v = z / norm_z;
    if (it > 2 && std::abs(next - sigma) <= opts.rel_tol * std::max(next, 1e-300)) {
      return next;
    }
    sigma = next;
  }
  return sigma;
}

double hermitian_extreme_eig(const LinOp& a, int dim, bool largest, const LanczosOpts& opts) {
  const int m = std::min(opts.max_iter, dim);
  Eigen::MatrixXcd v(dim, m + 1);
  Eigen::VectorXd alpha(m), beta(m);
  v.col(0) = random_unit_vector(dim, opts.seed);
  double prev = largest ? -1e300 : 1e300;
  for (int k = 0; k < m; ++k) {
    CVec w = a(v.col(k));
    alpha[k] = std::real(v.col(k).dot(w));
    w -= alpha[k] * v.col(k);
    if (k > 0) w -= beta[k - 1] * v.col(k - 1);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= k; ++i) w -= v.col(i).dot(w) * v.col(i);
    beta[k] = w.norm();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      t(i, i) = alpha[i];
      if (i < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double cur = largest ? es.eigenvalues().maxCoeff() : es.eigenvalues().minCoeff();
    if (k > 4 && std::abs(cur - prev) < opts.tol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
    if (beta[k] < 1e-14) return cur;
    v.col(k + 1) = w / beta[k];
  }
  return prev;
}

GmresResult gmres(const LinOp& a, const CVec& b, const GmresOpts& opts, const CVec* x0) {
  const int n = b.size();
  GmresResult res;
  res.x = x0 ? *x0 : CVec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    CVec r = b - a(res.x);
    const double beta = r.norm();
    res.rel_residual = beta / bnorm;
    if (res.rel_residual < opts.rel_tol) {
      res.converged = true;
      return res;
    }
    const int m = opts.restart;
    Eigen::MatrixXcd v(n, m + 1);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    v.col(0) = r / beta;
    int j = 0;
    for (; j < m; ++j) {
      CVec w = a(v.col(j));
      for (int i = 0; i <= j; ++i) {
        h(i, j) = v.col(i).dot(w);
        w -= h(i, j) * v.col(i);
      }
      h(j + 1, j) = w.norm();
      ++res.iterations;
      if (std::abs(h(j + 1, j)) < 1e-300) {
        ++j;
        break;
      }
      v.col(j + 1) = w / h(j + 1, j);
    }
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(j + 1);
    e1[0] = beta;
    Eigen::VectorXcd y = h.topLeftCorner(j + 1, j).colPivHouseholderQr().solve(e1);
    res.x += v.leftCols(j) * y;
  }
  res.rel_residual = (b - a(res.x)).norm() / bnorm;
  res.converged = res.rel_residual < opts.rel_tol;
  return res;
}

std::vector<double> bessel_j_ladder(int kmax, double z) {
  std::vector<double> out(kmax + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  // downward (Miller) recurrence started well above max(kmax, z)
  const int start = int(std::max<double>(kmax, z) + 24 + 12 * std::cbrt(std::max(1.0, z)));
  std::vector<double> j(start + 2, 0.0);
  j[start + 1] = 0.0;
  j[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > 1e280) {
      for (int i = k - 1; i <= start + 1; ++i) j[i] *= 1e-280;
    }
  }
  // J_0 + 2 sum_{k even} J_k = 1
  double s = j[0];
  for (int k = 2; k <= start; k += 2) s += 2.0 * j[k];
  for (int k = 0; k <= kmax; ++k) out[k] = j[k] / s;
  return out;
}

ChebyshevSeries ChebyshevSeries::of_function(const std::function<double(double)>& f, double radius,
                                             double target_uniform_error, int max_degree) {
  ChebyshevSeries cs;
  cs.radius_ = radius;
  int degree = 64;
  while (true) {
    const int m = 4 * degree;
    std::vector<double> fv(m);
    for (int j = 0; j < m; ++j) {
      const double theta = M_PI * (j + 0.5) / m;
      fv[j] = f(radius * std::cos(theta));
    }
    cs.coeff_.assign(degree + 1, Complex(0, 0));
    for (int k = 0; k <= degree; ++k) {
      double s = 0;
      for (int j = 0; j < m; ++j) s += fv[j] * std::cos(k * M_PI * (j + 0.5) / m);
      cs.coeff_[k] = Complex((k == 0 ? 1.0 : 2.0) * s / m, 0.0);
    }
    double err = 0;
    for (int j = 0; j <= 2000; ++j) {
      const double x = radius * (-1.0 + 2.0 * j / 2000.0);
      err = std::max(err, std::abs(cs.eval(x) - f(x)));
    }
    cs.tail_ = err;
    if (err <= target_uniform_error || degree >= max_degree) break;
    degree *= 2;
  }
  int last = int(cs.coeff_.size()) - 1;
  while (last > 0 && std::abs(cs.coeff_[last]) < 1e-3 * target_uniform_error) --last;
  cs.coeff_.resize(last + 1);
  return cs;
}

ChebyshevSeries ChebyshevSeries::of_exp(double t, double radius, double target_tail) {
  ChebyshevSeries cs;
  cs.radius_ = radius;
  const double z = std::abs(t) * radius;
  const int kmax = int(z + 16 + 9 * std::cbrt(std::max(1.0, z)) +
                       2.0 * std::log10(1.0 / std::max(target_tail, 1e-300)));
  std::vector<double> j = bessel_j_ladder(kmax, z);
  // exp(-i s y) = J_0(s) + 2 sum_k (-i)^k J_k(s) T_k(y); conjugate for s < 0
  cs.coeff_.resize(kmax + 1);
  const Complex mi = (t >= 0) ? Complex(0, -1) : Complex(0, 1);
  Complex ph(1, 0);
  for (int k = 0; k <= kmax; ++k) {
    cs.coeff_[k] = (k == 0 ? 1.0 : 2.0) * ph * j[k];
    ph *= mi;
  }
  double tail = 0.0;
  int last = kmax;
  while (last > 1 && tail + std::abs(cs.coeff_[last]) < 0.1 * target_tail) {
    tail += std::abs(cs.coeff_[last]);
    --last;
  }
  cs.coeff_.resize(last + 1);
  cs.tail_ = tail;
  return cs;
}

Complex ChebyshevSeries::eval(double x) const {
  const double y = x / radius_;
  double tkm1 = 1.0, tk = y;
  Complex acc = coeff_[0];
  if (coeff_.size() > 1) acc += coeff_[1] * tk;
  for (size_t k = 2; k < coeff_.size(); ++k) {
    const double tkp1 = 2.0 * y * tk - tkm1;
    acc += coeff_[k] * tkp1;
    tkm1 = tk;
    tk = tkp1;
  }
  return acc;
}

CVec ChebyshevSeries::apply(const LinOp& apply_a, const CVec& v) const {
  const double inv_r = 1.0 / radius_;
  CVec wkm1 = v;
  CVec acc = coeff_[0] * wkm1;
  if (coeff_.size() == 1) return acc;
  CVec wk = inv_r * apply_a(v);
  acc += coeff_[1] * wk;
  for (size_t k = 2; k < coeff_.size(); ++k) {
    CVec wkp1 = 2.0 * inv_r * apply_a(wk) - wkm1;
    acc += coeff_[k] * wkp1;
    wkm1.swap(wk);
    wk.swap(wkp1);
  }
  return acc;
}

std::vector<RitzPair> filtered_interval_eigs(const LinOp& a, int dim, double lo, double hi,
                                             double radius, const FilteredEigOpts& opts) {
  const double pad = 0.05 * (hi - lo);
  SmoothWindow win{lo - pad, hi + pad, pad};
  ChebyshevSeries filter = ChebyshevSeries::of_function([&](double x) { return win(x); }, radius,
                                                        1e-3, opts.filter_degree);
  const int q = std::min(opts.block, dim);
  Eigen::MatrixXcd y(dim, q);
  for (int c = 0; c < q; ++c) y.col(c) = random_unit_vector(dim, opts.seed + c);
  std::vector<RitzPair> pairs;
  for (int it = 0; it < opts.iters; ++it) {
    for (int c = 0; c < q; ++c) y.col(c) = filter.apply(a, y.col(c));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
    y = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, q);
    Eigen::MatrixXcd ay(dim, q);
    for (int c = 0; c < q; ++c) ay.col(c) = a(y.col(c));
    Eigen::MatrixXcd small = y.adjoint() * ay;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (small + small.adjoint()));
    Eigen::MatrixXcd ritz = y * es.eigenvectors();
    if (it + 1 == opts.iters) {
      for (int c = 0; c < q; ++c) {
        const double theta = es.eigenvalues()[c];
        if (theta < lo || theta > hi) continue;
        CVec vec = ritz.col(c);
        const double resid = (a(vec) - theta * vec).norm();
        if (resid <= opts.residual_tol * radius) pairs.push_back({theta, vec, resid});
      }
    } else {
      y = ritz;
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const RitzPair& x, const RitzPair& z) { return x.value < z.value; });
  return pairs;
}

}  // namespace hexscat
