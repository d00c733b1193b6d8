#include "hexscat/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <map>
#include <memory>

namespace hexscat {

struct Fourier::Impl {
  mutable Eigen::FFT<double> fft;
  mutable Eigen::VectorXcd buf_in, buf_out;
};

Fourier::Fourier(int n) : n_(n), grid_{n}, impl_(std::make_shared<Impl>()) {
  if (n < 2) throw std::invalid_argument("Fourier: grid size must be >= 2");
  const int c = grid_.center();
  pre_.resize(n);
  post_.resize(n);
  for (int i = 0; i < n; ++i) {
    // sum_x w^{-x(k-c)} u[x] = post[k] * DFT_k(pre[i] u_i),
    // w = exp(2pi i/n), x = i-c.
    pre_[i] = std::polar(1.0, kTwoPi * double(i) * c / n);
    post_[i] = std::polar(1.0, kTwoPi * (double(c) * i - double(c) * c) / n);
  }
  impl_->buf_in.resize(n);
  impl_->buf_out.resize(n);
}

void Fourier::transform_axis(CField& f, bool inverse, bool rows) const {
  auto& fft = impl_->fft;
  auto& in = impl_->buf_in;
  auto& out = impl_->buf_out;
  const int m = rows ? f.rows() : f.cols();
  for (int k = 0; k < m; ++k) {
    if (rows)
      in = f.row(k).transpose();
    else
      in = f.col(k);
    if (inverse)
      fft.inv(out, in);
    else
      fft.fwd(out, in);
    if (rows)
      f.row(k) = out.transpose();
    else
      f.col(k) = out;
  }
}

void Fourier::dft(const CField& in, CField& out) const {
  if (in.rows() != n_ || in.cols() != n_) throw std::invalid_argument("Fourier::dft: size mismatch");
  out = in;
  // centering pre-phase along both axes; separable
  out.array().colwise() *= pre_.array();
  out.array().rowwise() *= pre_.transpose().array();
  transform_axis(out, false, false);  // axis 1 (columns hold axis-1 index)
  transform_axis(out, false, true);   // axis 2
  out.array().colwise() *= post_.array();
  out.array().rowwise() *= post_.transpose().array();
}

void Fourier::idft(const CField& in, CField& out) const {
  if (in.rows() != n_ || in.cols() != n_) throw std::invalid_argument("Fourier::idft: size mismatch");
  out = in;
  out.array().colwise() *= post_.conjugate().array();
  out.array().rowwise() *= post_.conjugate().transpose().array();
  transform_axis(out, true, false);
  transform_axis(out, true, true);
  out.array().colwise() *= pre_.conjugate().array();
  out.array().rowwise() *= pre_.conjugate().transpose().array();
}

CField Fourier::dft(const CField& in) const {
  CField out;
  dft(in, out);
  return out;
}

CField Fourier::idft(const CField& in) const {
  CField out;
  idft(in, out);
  return out;
}

const Fourier& fourier(int n) {
  static std::map<int, std::unique_ptr<Fourier>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<Fourier>(n)).first;
  return *it->second;
}

}  // namespace hexscat
