#pragma once

#include <functional>
#include <span>
#include <vector>

namespace endosim {

struct SimplexOptions {
  int max_iterations = 5000;
  /// Stop when the simplex spread in f falls below f_tol * (1 + |f_best|).
  double f_tol = 1e-15;
  /// ... and every vertex lies within x_tol of the best (bound-normalised).
  double x_tol = 1e-12;
  /// Initial edge length as a fraction of each bound width.
  double initial_step = 0.05;
  /// Fresh simplices built around the best point after convergence.
  int restarts = 3;
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Box-constrained Nelder-Mead. Vertices are projected onto the box; the
/// search is fully deterministic.
SimplexResult minimize_bounded(const std::function<double(std::span<const double>)>& objective,
                               std::span<const double> x0, std::span<const double> lower,
                               std::span<const double> upper, const SimplexOptions& options = {});

}  // namespace endosim
