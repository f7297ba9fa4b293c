#include "axicd/interp.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <stdexcept>

namespace axicd {

namespace {

// Endpoint slope of the shape-preserving three-point formula.
double end_slope(double h0, double h1, double d0, double d1) {
  double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (s * d0 <= 0.0) return 0.0;
  if (d0 * d1 < 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
  return s;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 3 matching knots");
  for (std::size_t k = 1; k < n; ++k)
    if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("MonotoneCubic: knots must increase");
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    d[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  slope_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slope_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
  }
  slope_[0] = end_slope(h[0], h[1], d[0], d[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(k, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * h * slope_[k] +
         (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  x = std::clamp(x, x_.front(), x_.back());
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) / h * y_[k] + (3 * t2 - 4 * t + 1) * slope_[k] +
         (-6 * t2 + 6 * t) / h * y_[k + 1] + (3 * t2 - 2 * t) * slope_[k + 1];
}

bool MonotoneCubic::strictly_increasing() const {
  for (std::size_t k = 1; k < y_.size(); ++k)
    if (!(y_[k] > y_[k - 1])) return false;
  return true;
}

double MonotoneCubic::inverse(double y) const {
  if (y <= y_.front()) return x_.front();
  if (y >= y_.back()) return x_.back();
  auto it = std::upper_bound(y_.begin(), y_.end(), y);
  const std::size_t k = static_cast<std::size_t>(it - y_.begin()) - 1;
  if (y == y_[k]) return x_[k];
  double a = x_[k], b = x_[k + 1];
  auto g = [&](double x) { return (*this)(x) - y; };
  std::uintmax_t iters = 100;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto r = boost::math::tools::toms748_solve(g, a, b, y_[k] - y, y_[k + 1] - y, tol, iters);
  return 0.5 * (r.first + r.second);
}

double lagrange4_uniform(const double* v, int n, double h, double t) {
  const double s = t / h;
  int k = static_cast<int>(std::floor(s)) - 1;
  k = std::clamp(k, 0, n - 4);
  const double u = s - k;  // position relative to v[k], nominally in [1,2]
  const double l0 = -(u - 1) * (u - 2) * (u - 3) / 6.0;
  const double l1 = u * (u - 2) * (u - 3) / 2.0;
  const double l2 = -u * (u - 1) * (u - 3) / 2.0;
  const double l3 = u * (u - 1) * (u - 2) / 6.0;
  return l0 * v[k] + l1 * v[k + 1] + l2 * v[k + 2] + l3 * v[k + 3];
}

}  // namespace axicd
