#include "endosim/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "endosim/errors.hpp"

namespace endosim {

PiecewiseLinear::PiecewiseLinear(std::vector<Point> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  check();
}

void PiecewiseLinear::check() const {
  if (points_.size() < 2) throw InvalidParams("piecewise-linear curve needs at least two anchors");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].x > points_[i - 1].x))
      throw InvalidParams("piecewise-linear anchors must have distinct abscissae");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidParams("non-finite curve anchor");
  }
  const bool all_zero =
      std::all_of(points_.begin(), points_.end(), [](const Point& p) { return p.y == 0.0; });
  if (!all_zero && !strictly_increasing() && !strictly_decreasing())
    throw InvalidParams("piecewise-linear curve must be strictly monotone");
}

bool PiecewiseLinear::strictly_increasing() const {
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].y > points_[i - 1].y)) return false;
  return points_.size() >= 2;
}

bool PiecewiseLinear::strictly_decreasing() const {
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].y < points_[i - 1].y)) return false;
  return points_.size() >= 2;
}

double PiecewiseLinear::x_min() const { return points_.front().x; }
double PiecewiseLinear::x_max() const { return points_.back().x; }

double PiecewiseLinear::segment(std::size_t i, double x) const {
  const Point& a = points_[i];
  const Point& b = points_[i + 1];
  // Exact at the anchors.
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  const double u = (x - a.x) / (b.x - a.x);
  return a.y + u * (b.y - a.y);
}

double PiecewiseLinear::operator()(double x) const {
  if (points_.empty()) throw InvalidParams("evaluating an empty curve");
  if (!(x >= x_min() && x <= x_max()))
    throw OutOfRange("curve argument " + std::to_string(x) + " outside [" + std::to_string(x_min()) +
                     ", " + std::to_string(x_max()) + "]");
  return extrapolate(x);
}

double PiecewiseLinear::extrapolate(double x) const {
  if (points_.empty()) throw InvalidParams("evaluating an empty curve");
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const Point& p) { return v < p.x; });
  std::size_t i = 0;
  if (it == points_.begin()) {
    i = 0;
  } else if (it == points_.end()) {
    i = points_.size() - 2;
  } else {
    i = static_cast<std::size_t>(it - points_.begin()) - 1;
  }
  return segment(i, x);
}

void PiecewiseLinear::insert(Point p) {
  auto it = std::lower_bound(points_.begin(), points_.end(), p.x,
                             [](const Point& q, double v) { return q.x < v; });
  if (it != points_.end() && it->x == p.x) {
    it->y = p.y;
  } else {
    points_.insert(it, p);
  }
  check();
}

PiecewiseLinear PiecewiseLinear::scaled(double gain) const {
  std::vector<Point> pts(points_.begin(), points_.end());
  for (auto& p : pts) p.y *= gain;
  return PiecewiseLinear(std::move(pts));
}

double bisect_monotone(const std::function<double(double)>& f, double target, double lo, double hi,
                       double x_tol, double f_tol, int max_iter) {
  double f_lo = f(lo) - target;
  const double f_hi = f(hi) - target;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) throw OutOfRange("bisection target is not bracketed");
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid) - target;
    if (f_mid == 0.0 || std::abs(f_mid) <= f_tol || (hi - lo) <= x_tol) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace endosim
