#pragma once

#include <optional>
#include <vector>

#include "oup/covariance.hpp"
#include "oup/series.hpp"

namespace oup {

struct PredictionRequest {
  TimeSeriesSample observed;
  std::vector<double> targets;
  /// Condition on the last `window` observations only.
  std::optional<std::size_t> window;
};

/// Pointwise Gaussian conditional law at each target; band = mean +- 2 sd.
struct PredictionBand {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> sd;

  [[nodiscard]] double lower(std::size_t i) const { return mean[i] - 2.0 * sd[i]; }
  [[nodiscard]] double upper(std::size_t i) const { return mean[i] + 2.0 * sd[i]; }
};

/// Best linear predictor with plug-in parameters:
///   m(t) = mu + c(t)' G^{-1} (x - mu),  v(t) = gamma(0) - c(t)' G^{-1} c(t),
/// with c(t)_i = gamma(|t - t_i|). Targets at observed times return the
/// observation with sd = 0.
PredictionBand predict(const OuModel& model, const PredictionRequest& request);

/// Dense grid from `from` to `to` with `points_per_step` points per
/// observation spacing; delegates to predict().
PredictionBand predict_series(const OuModel& model, const TimeSeriesSample& observed, double from,
                              double to, int points_per_step = 100,
                              std::optional<std::size_t> window = std::nullopt);

/// Convenience form: grid from the last observation time minus `back` steps
/// to `horizon` steps past it.
PredictionBand predict_series(const OuModel& model, const TimeSeriesSample& observed, int horizon,
                              int back = 0, int points_per_step = 100);

}  // namespace oup
