#pragma once

#include <functional>
#include <span>
#include <vector>

namespace oup {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  /// Converged when max_i |x_i - x_best|_inf <= tolerance * max(1, |x_best|_inf).
  double tolerance = 1e-8;
  /// Initial edge along coordinate i: step * max(|x0_i|, min_step).
  double step = 0.1;
  double min_step = 0.05;
  /// Fresh simplices built around the best point after convergence.
  int restarts = 2;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f by the Nelder-Mead simplex method. f may return +infinity
/// (or NaN, treated as +infinity) to reject a point.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace oup
