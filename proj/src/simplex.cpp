#include "endosim/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "endosim/errors.hpp"

namespace endosim {
namespace {

struct Vertex {
  std::vector<double> z;
  double f;
};

class Search {
 public:
  Search(const std::function<double(std::span<const double>)>& objective, std::span<const double> lower,
         std::span<const double> upper)
      : objective_(objective), lower_(lower.begin(), lower.end()), upper_(upper.begin(), upper.end()) {}

  std::vector<double> to_x(const std::vector<double>& z) const {
    std::vector<double> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = lower_[i] + z[i] * (upper_[i] - lower_[i]);
    return x;
  }

  Vertex eval(std::vector<double> z) {
    for (double& v : z) v = std::clamp(v, 0.0, 1.0);
    ++evaluations;
    double f = objective_(to_x(z));
    if (!std::isfinite(f)) f = std::numeric_limits<double>::max();
    return {std::move(z), f};
  }

  int evaluations = 0;

 private:
  const std::function<double(std::span<const double>)>& objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

std::vector<double> affine(const std::vector<double>& c, const std::vector<double>& w, double t) {
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] + t * (w[i] - c[i]);
  return out;
}

}  // namespace

SimplexResult minimize_bounded(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> x0, std::span<const double> lower,
                               std::span<const double> upper, const SimplexOptions& options) {
  const std::size_t n = x0.size();
  if (lower.size() != n || upper.size() != n) throw InvalidParams("bound vectors must match the parameter count");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(upper[i] > lower[i]))
      throw InvalidParams("bounds must be finite with lower < upper");
    if (!(x0[i] >= lower[i] && x0[i] <= upper[i])) throw InvalidParams("initial guess outside its bounds");
  }

  Search search(objective, lower, upper);
  std::vector<double> z0(n);
  for (std::size_t i = 0; i < n; ++i) z0[i] = (x0[i] - lower[i]) / (upper[i] - lower[i]);
  Vertex best = search.eval(z0);

  SimplexResult result;
  if (n == 0) {
    result.f = best.f;
    result.evaluations = search.evaluations;
    result.converged = true;
    return result;
  }

  int iterations = 0;
  bool converged = false;
  for (int round = 0; round <= options.restarts && iterations < options.max_iterations; ++round) {
    std::vector<Vertex> simplex{best};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> z = best.z;
      z[i] += z[i] + options.initial_step <= 1.0 ? options.initial_step : -options.initial_step;
      simplex.push_back(search.eval(std::move(z)));
    }

    const double start_f = best.f;
    converged = false;
    while (iterations < options.max_iterations) {
      std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      double spread_x = 0.0;
      for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t i = 0; i < n; ++i)
          spread_x = std::max(spread_x, std::abs(simplex[v].z[i] - simplex[0].z[i]));
      const double spread_f = simplex[n].f - simplex[0].f;
      if (spread_f <= options.f_tol * (1.0 + std::abs(simplex[0].f)) && spread_x <= options.x_tol) {
        converged = true;
        break;
      }
      if (spread_f == 0.0 && spread_x <= std::sqrt(options.x_tol)) {
        converged = true;
        break;
      }
      ++iterations;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].z[i] / static_cast<double>(n);

      const Vertex& worst = simplex[n];
      Vertex reflected = search.eval(affine(centroid, worst.z, -1.0));
      if (reflected.f < simplex[0].f) {
        Vertex expanded = search.eval(affine(centroid, worst.z, -2.0));
        simplex[n] = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      } else if (reflected.f < simplex[n - 1].f) {
        simplex[n] = std::move(reflected);
      } else {
        const bool outside = reflected.f < worst.f;
        Vertex contracted = search.eval(affine(centroid, worst.z, outside ? -0.5 : 0.5));
        if (contracted.f < (outside ? reflected.f : worst.f)) {
          simplex[n] = std::move(contracted);
        } else {
          for (std::size_t v = 1; v <= n; ++v) simplex[v] = search.eval(affine(simplex[0].z, simplex[v].z, 0.5));
        }
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    best = simplex[0];
    if (round > 0 && converged && !(best.f < start_f - options.f_tol * (1.0 + std::abs(start_f)))) break;
  }

  result.x = search.to_x(best.z);
  result.f = best.f;
  result.iterations = iterations;
  result.evaluations = search.evaluations;
  result.converged = converged;
  return result;
}

}  // namespace endosim
