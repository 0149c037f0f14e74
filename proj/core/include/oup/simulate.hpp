#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "oup/covariance.hpp"
#include "oup/random.hpp"
#include "oup/series.hpp"

namespace oup {

/// Exact sampler of (x(0), x(tau), ..., x(n tau)) by Cholesky factorization
/// of the covariance matrix. The factor is computed once; draws are cheap.
class GridSampler {
 public:
  GridSampler(const OuModel& model, int n, double tau);

  [[nodiscard]] TimeSeriesSample draw(std::mt19937_64& rng) const;
  [[nodiscard]] TimeSeriesSample draw(std::uint64_t seed, std::uint64_t replicate = 0) const;
  [[nodiscard]] const CovarianceModel& covariance() const noexcept { return covariance_; }

 private:
  OuModel model_;
  int n_;
  double tau_;
  CovarianceModel covariance_;
  CholeskyFactor factor_;
};

/// n + 1 equally spaced observations of the model; deterministic given seed.
TimeSeriesSample simulate_grid(const OuModel& model, int n, double tau, std::uint64_t seed);

/// Exact sampler for long paths. The process is the last component of a
/// p-dimensional linear state driven by sigma dw, with drift given by the
/// companion matrix of prod_j (s + kappa_j) = s^p - phi_1 s^{p-1} - ... - phi_p.
/// The state is advanced with its exact one-step transition and innovation
/// covariance, so a draw costs O(n p^2) instead of a dense factorization.
class StateSpaceSampler {
 public:
  StateSpaceSampler(const OuModel& model, double tau);

  [[nodiscard]] TimeSeriesSample draw(int n, std::mt19937_64& rng) const;
  [[nodiscard]] TimeSeriesSample draw(int n, std::uint64_t seed, std::uint64_t replicate = 0) const;
  /// Stationary variance of the observed component; equals gamma(0).
  [[nodiscard]] double variance() const noexcept { return variance_; }

 private:
  OuModel model_;
  double tau_;
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd innovation_root_;
  Eigen::MatrixXd stationary_root_;
  double variance_ = 0.0;
};

TimeSeriesSample simulate_state_space(const OuModel& model, int n, double tau, std::uint64_t seed);

/// Variance of the AR(1) innovation of OU(1) sampled every tau:
/// sigma^2 / (2 lambda) (1 - exp(-2 lambda tau)).
double ou1_innovation_variance(double lambda, double sigma, double tau);

/// OU(1) through its exact AR(1) recursion X_{i+1} = exp(-lambda tau) X_i + Z_i,
/// X_0 ~ N(0, sigma^2 / (2 lambda)). Returns n + 1 values.
TimeSeriesSample simulate_ou1_recursive(double lambda, double sigma, int n, double tau,
                                        std::uint64_t seed);

struct RefineRange {
  double from;
  double to;
};

/// Conditional simulation of the process on a grid `factor` times finer than
/// the coarse observations, given all of them. Points shared with the coarse
/// grid reproduce the observations exactly. When `range` is given only fine
/// points inside it are returned.
TimeSeriesSample refine_path(const OuModel& model, const TimeSeriesSample& coarse, int factor,
                             std::uint64_t seed, std::optional<RefineRange> range = std::nullopt);

}  // namespace oup
