#ifndef HEXSCAT_COMMON_HPP
#define HEXSCAT_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexscat {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2d;
using CField = Eigen::MatrixXcd;  // complex scalar field on a square grid
using RField = Eigen::MatrixXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double sq(double x) { return x * x; }

/// <x> = (1 + |x|^2)^{1/2}
inline double jbracket(double x1, double x2) { return std::sqrt(1.0 + x1 * x1 + x2 * x2); }
inline double jbracket(const Vec2& x) { return jbracket(x[0], x[1]); }

// C^inf transition: 0 for t<=0, 1 for t>=1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

/// Smooth compactly supported window: 1 on [a+eta, b-eta], 0 outside (a, b).
struct SmoothWindow {
  double a = 0, b = 0, eta = 0.02;
  double operator()(double x) const {
    return smooth_step((x - a) / eta) * smooth_step((b - x) / eta);
  }
};

struct LinearFit {
  double slope = 0, intercept = 0;
};

/// Least-squares line through (x_i, y_i).
inline LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw std::invalid_argument("fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double d = n * sxx - sx * sx;
  return {(n * sxy - sx * sy) / d, (sy * sxx - sx * sxy) / d};
}

inline double max_ratio(const std::vector<double>& ladder) {
  double r = 0.0;
  for (size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i - 1] > 0) r = std::max(r, ladder[i] / ladder[i - 1]);
  }
  return r;
}

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hexscat

#endif
