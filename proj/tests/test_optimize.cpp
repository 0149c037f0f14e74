#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>

#include "oup/errors.hpp"
#include "oup/model_json.hpp"
#include "oup/optimize.hpp"
#include "oup/parallel.hpp"
#include "oup/random.hpp"
#include "oup/series.hpp"

namespace oup {
namespace {

double rosenbrock(std::span<const double> x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

TEST(NelderMead, Rosenbrock) {
  NelderMeadOptions options;
  options.max_evaluations = 5000;
  const auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, options);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
  EXPECT_LT(r.value, 1e-10);
}

TEST(NelderMead, ShiftedQuadratic) {
  const auto f = [](std::span<const double> x) {
    return std::pow(x[0] - 3.0, 2) + 2.0 * std::pow(x[1] + 1.0, 2) + 0.5 * std::pow(x[2], 2);
  };
  const auto r = nelder_mead(f, {0.0, 0.0, 0.0});
  EXPECT_NEAR(r.x[0], 3.0, 1e-6);
  EXPECT_NEAR(r.x[1], -1.0, 1e-6);
  EXPECT_NEAR(r.x[2], 0.0, 1e-6);
}

TEST(NelderMead, RespectsRejectedRegion) {
  // Minimum of the unconstrained parabola at -2 is excluded; the constrained
  // minimum sits on the boundary x = 0.
  const auto f = [](std::span<const double> x) {
    if (x[0] < 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(x[0] + 2.0, 2);
  };
  const auto r = nelder_mead(f, {1.0});
  EXPECT_GE(r.x[0], 0.0);
  EXPECT_LT(r.x[0], 1e-6);
}

TEST(NelderMead, NanTreatedAsRejection) {
  const auto f = [](std::span<const double> x) {
    if (x[0] > 0.5) return std::numeric_limits<double>::quiet_NaN();
    return std::pow(x[0] - 0.2, 2);
  };
  const auto r = nelder_mead(f, {0.4});
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_NEAR(r.x[0], 0.2, 1e-6);
}

TEST(NelderMead, EvaluationBudget) {
  NelderMeadOptions options;
  options.max_evaluations = 40;
  const auto r = nelder_mead(rosenbrock, {-1.2, 1.0}, options);
  EXPECT_LE(r.evaluations, 40);
  EXPECT_FALSE(r.converged);
}

TEST(Parallel, EachIndexOnce) {
  for (int threads : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, threads);
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  auto a = make_rng(5, 0);
  auto b = make_rng(5, 0);
  auto c = make_rng(5, 1);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
}

TEST(ModelJson, RoundTrip) {
  const OuModel model{{-1.30, -0.56, -0.18}, 0.7, 2.5};
  const auto doc = model_to_json(model);
  EXPECT_EQ(doc.at("p").get<int>(), 3);
  const auto back = model_from_json(doc);
  EXPECT_EQ(back.phi, model.phi);
  EXPECT_EQ(back.sigma2, model.sigma2);
  EXPECT_EQ(back.mu, model.mu);

  const auto path = std::filesystem::temp_directory_path() / "oup_model_roundtrip.json";
  write_model(path, model);
  const auto read = read_model(path);
  std::filesystem::remove(path);
  EXPECT_EQ(read.phi, model.phi);
}

TEST(ModelJson, RejectsMalformed) {
  EXPECT_THROW((void)model_from_json(nlohmann::json{{"p", 2}, {"phi", {-1.0}}, {"sigma2", 1.0}, {"mu", 0.0}}),
               ParseError);
  EXPECT_THROW((void)model_from_json(nlohmann::json{{"p", 1}, {"sigma2", 1.0}}), ParseError);
  EXPECT_THROW((void)read_model("/nonexistent/model.json"), ParseError);
}

TEST(Series, MeanPoliciesAndViews) {
  const TimeSeriesSample x({1.0, 2.0, 6.0}, 0.5, 10.0);
  EXPECT_DOUBLE_EQ(x.mean(), 3.0);
  EXPECT_DOUBLE_EQ(x.time(2), 11.0);
  EXPECT_EQ(x.increments(), (std::vector<double>{1.0, 4.0}));
  EXPECT_DOUBLE_EQ(x.with_mean_policy(MeanPolicy::centered()).mean(), 0.0);
  EXPECT_DOUBLE_EQ(x.with_mean_policy(MeanPolicy::parse("1.5")).mean(), 1.5);
  EXPECT_DOUBLE_EQ(x.with_mean_policy(MeanPolicy::parse("zero")).mean(), 0.0);
  const auto t = x.tail(2);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t.time(0), 10.5);
  EXPECT_THROW((void)MeanPolicy::parse("abc"), InvalidArgument);
  EXPECT_THROW((void)TimeSeriesSample({1.0}), InvalidArgument);
  EXPECT_THROW((void)TimeSeriesSample({1.0, 2.0}, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace oup
