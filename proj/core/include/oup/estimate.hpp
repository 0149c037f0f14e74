#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oup/kappa.hpp"
#include "oup/series.hpp"

namespace oup {

enum class FitMethod { MleDiff, MleCentered, Mce };

std::string to_string(FitMethod method);
/// Accepts "mle-diff", "mle-centered" and "mce".
FitMethod parse_fit_method(const std::string& text);

struct FitResult {
  OuModel model;
  FitMethod method = FitMethod::Mce;
  /// Log-likelihood for MLE, euclidean matching distance for MCE.
  double objective = 0.0;
  int T = 0;  // MCE horizon; 0 for MLE
  int iterations = 0;
  bool converged = false;

  [[nodiscard]] std::vector<Complex> kappa() const;
};

/// gamma_e(h) = (1/N) sum_{i} x_i x_{i+h}, h = 0..maxlag, with N the number
/// of observations and x centered per the sample's mean policy.
std::vector<double> empirical_autocovariance(const TimeSeriesSample& x, int maxlag);

/// gamma_e(h) / gamma_e(0), h = 1..T.
std::vector<double> empirical_autocorrelation(const TimeSeriesSample& x, int T);

/// Gaussian log-likelihood of the increments of x. The mean does not enter.
/// Returns -infinity if the covariance is not positive definite or phi is
/// inadmissible.
double log_likelihood_diff(const TimeSeriesSample& x, const OuModel& model);

/// Gaussian log-likelihood of x minus the mean given by its mean policy.
double log_likelihood_centered(const TimeSeriesSample& x, const OuModel& model);

enum class LikelihoodVariant { Diff, Centered };

struct ProfiledLikelihood {
  double log_likelihood;
  double sigma2;
};

/// Log-likelihood maximized over sigma2 in closed form for fixed phi.
/// Returns log_likelihood = -infinity for inadmissible phi.
ProfiledLikelihood profiled_log_likelihood(const TimeSeriesSample& x, std::span<const double> phi,
                                           LikelihoodVariant variant);

/// Euclidean distance between empirical and model autocorrelations at lags
/// 1..T; +infinity for inadmissible phi.
double mce_objective(std::span<const double> empirical_rho, std::span<const double> phi, double tau);

struct MleOptions {
  int max_evaluations = 2000;
  double tolerance = 1e-8;
  /// Random admissible starts searched besides `init` (or the MCE fit).
  int starts = 10;
  std::uint64_t seed = 20130602;
  int threads = 0;  // 0: default_thread_count()
};

/// Maximum likelihood with sigma2 profiled out; simplex searches over phi
/// from `init` (or the MCE fit when absent) and from random admissible
/// starts. The best local maximum wins.
FitResult mle_fit(const TimeSeriesSample& x, int p, LikelihoodVariant variant,
                  const std::optional<OuModel>& init = std::nullopt, const MleOptions& options = {});

struct MceOptions {
  /// Correlation horizon; 0 selects floor(0.9 * (N - 1)).
  int T = 0;
  int starts = 20;
  std::uint64_t seed = 20130601;
  int max_evaluations = 2000;
  double tolerance = 1e-8;
  /// Extra starting points tried besides the random ones.
  std::vector<std::vector<double>> extra_starts;
  int threads = 0;  // 0: default_thread_count()
};

int default_mce_horizon(std::size_t observations);

/// Matching-correlations estimate: minimizes the distance between empirical
/// and model autocorrelations over admissible phi, multi-start; sigma2 then
/// matches the empirical variance.
FitResult mce_fit(const TimeSeriesSample& x, int p, const MceOptions& options = {});

/// The matching step alone, from autocorrelations rho(1..T) at spacing tau;
/// sigma2 matches gamma_e0 and mu is left at 0. options.T is ignored.
FitResult mce_fit_correlations(std::span<const double> rho, double gamma_e0, double tau, int p,
                               const MceOptions& options = {});

/// Random admissible phi vectors: real rates log-uniform in [1e-3, 5] and
/// conjugate pairs with log-uniform real and imaginary parts.
std::vector<std::vector<double>> random_admissible_starts(int p, int count, std::uint64_t seed);

}  // namespace oup
