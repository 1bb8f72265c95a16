#pragma once

#include <functional>
#include <span>
#include <vector>

namespace endosim {

/// Strictly monotone piecewise-linear curve through anchor points.
///
/// Anchors are kept sorted by abscissa; ordinates must be strictly
/// increasing or strictly decreasing (flat curves are allowed only when every
/// ordinate is zero, which is how an unused parasitic channel is represented).
class PiecewiseLinear {
 public:
  struct Point {
    double x;
    double y;
  };

  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<Point> points);

  /// Evaluates inside [x_min, x_max]; throws OutOfRange outside.
  double operator()(double x) const;

  /// Like operator() but continues the first/last segment beyond the ends.
  double extrapolate(double x) const;

  /// Inserts an anchor, replacing one with the same abscissa.
  void insert(Point p);

  /// Returns a copy with every ordinate multiplied by `gain`.
  PiecewiseLinear scaled(double gain) const;

  double x_min() const;
  double x_max() const;
  bool empty() const { return points_.empty(); }
  std::span<const Point> points() const { return points_; }

  bool strictly_increasing() const;
  bool strictly_decreasing() const;

 private:
  void check() const;
  double segment(std::size_t i, double x) const;

  std::vector<Point> points_;
};

/// Bisection for `f(x) == target` on [lo, hi] where f is monotone (either
/// direction). Stops when the bracket is narrower than `x_tol` or the
/// residual is within `f_tol`.
double bisect_monotone(const std::function<double(double)>& f, double target, double lo, double hi,
                       double x_tol, double f_tol = 0.0, int max_iter = 200);

}  // namespace endosim
