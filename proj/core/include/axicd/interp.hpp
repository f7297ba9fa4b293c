#pragma once

#include <memory>
#include <vector>

namespace axicd {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// slopes, three-point endpoint slopes). Evaluation outside the knot range
/// clamps to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  /// Inverse of a strictly increasing interpolant: returns x with value(x)=y.
  /// y outside [y_front, y_back] is clamped.
  double inverse(double y) const;

  bool strictly_increasing() const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }
  double y_front() const { return y_.front(); }
  double y_back() const { return y_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, slope_;
  std::size_t segment(double x) const;
};

/// Four-point Lagrange interpolation on a uniform table v[0..n-1] with
/// spacing h starting at 0; t is the abscissa. The stencil is shifted
/// inward near the table ends.
double lagrange4_uniform(const double* v, int n, double h, double t);

}  // namespace axicd
