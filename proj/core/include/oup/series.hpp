#pragma once

#include <span>
#include <string>
#include <vector>

namespace oup {

/// How the process mean is handled before covariance-based computations.
struct MeanPolicy {
  enum class Kind { Centered, SampleMean, Explicit };

  Kind kind = Kind::SampleMean;
  double value = 0.0;  // used by Kind::Explicit

  static MeanPolicy centered() { return {Kind::Centered, 0.0}; }
  static MeanPolicy sample_mean() { return {Kind::SampleMean, 0.0}; }
  static MeanPolicy explicit_mean(double mu) { return {Kind::Explicit, mu}; }

  /// Parses "zero", "sample" or a number.
  static MeanPolicy parse(const std::string& text);

  [[nodiscard]] double resolve(std::span<const double> values) const;
};

/// Observations x(t0 + i tau), i = 0..size()-1.
class TimeSeriesSample {
 public:
  /// Throws InvalidArgument unless values.size() >= 2, tau > 0 and all
  /// values are finite.
  explicit TimeSeriesSample(std::vector<double> values, double tau = 1.0, double t0 = 0.0,
                            MeanPolicy mean_policy = {});

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double tau() const noexcept { return tau_; }
  [[nodiscard]] double t0() const noexcept { return t0_; }
  [[nodiscard]] double time(std::size_t i) const noexcept { return t0_ + static_cast<double>(i) * tau_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const MeanPolicy& mean_policy() const noexcept { return mean_policy_; }

  /// Mean implied by the policy.
  [[nodiscard]] double mean() const { return mean_policy_.resolve(values_); }
  /// values minus mean().
  [[nodiscard]] std::vector<double> centered_values() const;
  /// x(i+1) - x(i).
  [[nodiscard]] std::vector<double> increments() const;

  [[nodiscard]] TimeSeriesSample with_mean_policy(MeanPolicy policy) const;
  /// The last `count` observations.
  [[nodiscard]] TimeSeriesSample tail(std::size_t count) const;

 private:
  std::vector<double> values_;
  double tau_;
  double t0_;
  MeanPolicy mean_policy_;
};

}  // namespace oup
