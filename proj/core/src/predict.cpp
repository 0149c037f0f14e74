#include "oup/predict.hpp"

#include <algorithm>
#include <cmath>

#include "oup/errors.hpp"

namespace oup {

PredictionBand predict(const OuModel& model, const PredictionRequest& request) {
  if (request.targets.empty()) throw InvalidArgument("prediction needs at least one target");
  const std::size_t n_all = request.observed.size();
  const std::size_t w = request.window.value_or(n_all);
  if (w < 1 || w > n_all) throw InvalidArgument("window must lie between 1 and the series length");

  const CovarianceModel cov = CovarianceModel::from_model(model);
  const std::size_t first = n_all - w;
  const double tau = request.observed.tau();
  const double t_first = request.observed.time(first);
  const auto n = static_cast<Eigen::Index>(w);

  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    resid[i] = request.observed[first + static_cast<std::size_t>(i)] - model.mu;
  }
  const auto factor =
      w == 1 ? ToeplitzMatrix({cov.gamma0()}).factorize()
             : gamma_matrix(cov, static_cast<int>(w) - 1, tau).factorize();
  const Eigen::VectorXd weights = factor.solve(resid);

  PredictionBand band;
  band.times = request.targets;
  band.mean.resize(request.targets.size());
  band.sd.resize(request.targets.size());
  Eigen::VectorXd c(n);
  for (std::size_t k = 0; k < request.targets.size(); ++k) {
    const double t = request.targets[k];
    const double pos = (t - t_first) / tau;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 1e-12 * std::max(1.0, std::abs(pos)) && nearest >= 0 &&
        nearest < static_cast<double>(w)) {
      band.mean[k] = request.observed[first + static_cast<std::size_t>(nearest)];
      band.sd[k] = 0.0;
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) c[i] = cov.gamma(t - (t_first + static_cast<double>(i) * tau));
    band.mean[k] = model.mu + c.dot(weights);
    const double v = cov.gamma0() - factor.quadratic_form(c);
    band.sd[k] = std::sqrt(std::clamp(v, 0.0, cov.gamma0()));
  }
  return band;
}

PredictionBand predict_series(const OuModel& model, const TimeSeriesSample& observed, double from,
                              double to, int points_per_step, std::optional<std::size_t> window) {
  if (!(to >= from)) throw InvalidArgument("prediction range must have to >= from");
  if (points_per_step < 1) throw InvalidArgument("points per step must be positive");
  const double h = observed.tau() / points_per_step;
  const auto steps = static_cast<std::size_t>(std::llround((to - from) / h));
  std::vector<double> targets(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) targets[i] = from + static_cast<double>(i) * h;
  targets.back() = to;
  return predict(model, PredictionRequest{observed, std::move(targets), window});
}

PredictionBand predict_series(const OuModel& model, const TimeSeriesSample& observed, int horizon,
                              int back, int points_per_step) {
  const double last = observed.time(observed.size() - 1);
  return predict_series(model, observed, last - back * observed.tau(),
                        last + horizon * observed.tau(), points_per_step);
}

}  // namespace oup
