#pragma once

#include <span>
#include <vector>

#include "oup/series.hpp"

namespace oup {

/// (1 - a_1 B - ... - a_p B^p) x_t = e_t with Var e_t = noise_var.
struct ARModel {
  std::vector<double> coeffs;
  double noise_var = 0.0;

  /// Spectral radius of the companion matrix.
  [[nodiscard]] double spectral_radius() const;
  [[nodiscard]] bool is_stationary() const { return spectral_radius() < 1.0; }
  /// Autocorrelations at lags 1..count implied by the recursion.
  [[nodiscard]] std::vector<double> autocorrelations(int count) const;
};

/// AR(p) whose first p autocorrelations are rho(1..p), with unit variance:
/// solves the Yule-Walker system. Throws SingularSystem unless the
/// correlation matrix is positive definite.
ARModel yule_walker_from_correlations(std::span<const double> rho);

/// Yule-Walker fit from the 1/N empirical autocorrelations. Throws
/// SingularSystem if the Toeplitz system cannot be solved.
ARModel yule_walker_fit(const TimeSeriesSample& x, int p);

/// Third autocorrelation of the AR(2) with first two autocorrelations r1, r2:
/// r1 / (1 - r1^2) (2 r2 - r1^2 - r2^2). Throws AdmissibilityViolation
/// unless |r1| < 1 and 2 r1^2 - 1 <= r2 <= 1.
double ar2_r3(double r1, double r2);

/// Lag-h autocorrelation of the real OU(2) with rates lambda1, lambda2,
/// sampled every tau. Uses the analytic limit near lambda1 == lambda2.
double ou2_rho(double lambda1, double lambda2, int h, double tau = 1.0);

/// r3(rho1, rho2) - rho3 for OU(2) at tau = 1: how far the third
/// correlation of the AR(2) matching the first two lies from OU(2)'s.
double lemma_gap(double lambda1, double lambda2);

struct GapCell {
  double lambda1;
  double lambda2;
  double gap;
};

/// lemma_gap over (lo, hi]^2 with the given step.
std::vector<GapCell> lemma_gap_grid(double lo, double hi, double step);

}  // namespace oup
