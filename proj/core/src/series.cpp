#include "oup/series.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "oup/errors.hpp"

namespace oup {

MeanPolicy MeanPolicy::parse(const std::string& text) {
  if (text == "zero" || text == "centered") return centered();
  if (text == "sample") return sample_mean();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw InvalidArgument("mean policy must be 'sample', 'zero' or a number, got '" + text + "'");
  }
  return explicit_mean(v);
}

double MeanPolicy::resolve(std::span<const double> values) const {
  switch (kind) {
    case Kind::Centered:
      return 0.0;
    case Kind::Explicit:
      return value;
    case Kind::SampleMean:
      break;
  }
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

TimeSeriesSample::TimeSeriesSample(std::vector<double> values, double tau, double t0,
                                   MeanPolicy mean_policy)
    : values_(std::move(values)), tau_(tau), t0_(t0), mean_policy_(mean_policy) {
  if (values_.size() < 2) throw InvalidArgument("a time series needs at least two observations");
  if (!(tau_ > 0.0) || !std::isfinite(tau_)) throw InvalidArgument("tau must be positive");
  if (!std::isfinite(t0_)) throw InvalidArgument("t0 must be finite");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("time series contains a non-finite value");
  }
}

std::vector<double> TimeSeriesSample::centered_values() const {
  const double m = mean();
  std::vector<double> out(values_);
  for (double& v : out) v -= m;
  return out;
}

std::vector<double> TimeSeriesSample::increments() const {
  std::vector<double> out(values_.size() - 1);
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) out[i] = values_[i + 1] - values_[i];
  return out;
}

TimeSeriesSample TimeSeriesSample::with_mean_policy(MeanPolicy policy) const {
  return TimeSeriesSample(values_, tau_, t0_, policy);
}

TimeSeriesSample TimeSeriesSample::tail(std::size_t count) const {
  if (count < 2 || count > values_.size()) {
    throw InvalidArgument("window must lie between 2 and the series length");
  }
  const std::size_t first = values_.size() - count;
  return TimeSeriesSample(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first), values_.end()),
                          tau_, time(first), mean_policy_);
}

}  // namespace oup
