#include "oup/estimate.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "oup/covariance.hpp"
#include "oup/errors.hpp"
#include "oup/optimize.hpp"
#include "oup/parallel.hpp"
#include "oup/random.hpp"

namespace oup {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct GaussianTerms {
  double log_det;
  double quad;
  std::size_t dim;
};

// log det and quadratic form of the data vector under the covariance of the
// given model; nullopt when the model or the matrix is unusable.
std::optional<GaussianTerms> gaussian_terms(const TimeSeriesSample& x, const OuModel& model,
                                            LikelihoodVariant variant) {
  try {
    const auto cov = CovarianceModel::from_model(model);
    const int n = static_cast<int>(x.size()) - 1;
    const bool diff = variant == LikelihoodVariant::Diff;
    const auto matrix = diff ? diff_matrix(cov, n, x.tau()) : gamma_matrix(cov, n, x.tau());
    const auto data = to_eigen(diff ? x.increments() : x.centered_values());
    if (const auto form = matrix.levinson(data)) {
      return GaussianTerms{form->log_det, form->quadratic_form, static_cast<std::size_t>(data.size())};
    }
    const auto factor = matrix.factorize();
    return GaussianTerms{factor.log_det(), factor.quadratic_form(data), static_cast<std::size_t>(data.size())};
  } catch (const Error&) {
    return std::nullopt;
  }
}

double log_likelihood(const TimeSeriesSample& x, const OuModel& model, LikelihoodVariant variant) {
  model.validate();
  const auto terms = gaussian_terms(x, model, variant);
  if (!terms) return kNegInf;
  const double m = static_cast<double>(terms->dim);
  return -0.5 * m * std::log(2.0 * std::numbers::pi) - 0.5 * terms->log_det - 0.5 * terms->quad;
}

}  // namespace

std::string to_string(FitMethod method) {
  switch (method) {
    case FitMethod::MleDiff:
      return "mle-diff";
    case FitMethod::MleCentered:
      return "mle-centered";
    case FitMethod::Mce:
      return "mce";
  }
  return "unknown";
}

FitMethod parse_fit_method(const std::string& text) {
  if (text == "mle-diff") return FitMethod::MleDiff;
  if (text == "mle-centered") return FitMethod::MleCentered;
  if (text == "mce") return FitMethod::Mce;
  throw InvalidArgument("unknown fit method '" + text + "'");
}

std::vector<Complex> FitResult::kappa() const {
  const auto k = kappa_from_phi(model.phi);
  return {k.entries().begin(), k.entries().end()};
}

std::vector<double> empirical_autocovariance(const TimeSeriesSample& x, int maxlag) {
  if (maxlag < 0 || static_cast<std::size_t>(maxlag) >= x.size()) {
    throw InvalidArgument("maxlag must be in [0, length)");
  }
  const auto c = x.centered_values();
  const double n = static_cast<double>(c.size());
  std::vector<double> out(static_cast<std::size_t>(maxlag) + 1);
  for (std::size_t h = 0; h < out.size(); ++h) {
    double s = 0.0;
    for (std::size_t i = 0; i + h < c.size(); ++i) s += c[i] * c[i + h];
    out[h] = s / n;
  }
  return out;
}

std::vector<double> empirical_autocorrelation(const TimeSeriesSample& x, int T) {
  const auto g = empirical_autocovariance(x, T);
  if (!(g[0] > 0.0)) throw InvalidArgument("series has zero empirical variance");
  std::vector<double> rho(static_cast<std::size_t>(T));
  for (int h = 1; h <= T; ++h) rho[static_cast<std::size_t>(h - 1)] = g[static_cast<std::size_t>(h)] / g[0];
  return rho;
}

double log_likelihood_diff(const TimeSeriesSample& x, const OuModel& model) {
  return log_likelihood(x, model, LikelihoodVariant::Diff);
}

double log_likelihood_centered(const TimeSeriesSample& x, const OuModel& model) {
  return log_likelihood(x, model, LikelihoodVariant::Centered);
}

ProfiledLikelihood profiled_log_likelihood(const TimeSeriesSample& x, std::span<const double> phi,
                                           LikelihoodVariant variant) {
  const OuModel unit{{phi.begin(), phi.end()}, 1.0, 0.0};
  if (!is_admissible(phi)) return {kNegInf, 0.0};
  const auto terms = gaussian_terms(x, unit, variant);
  if (!terms || !(terms->quad > 0.0)) return {kNegInf, 0.0};
  const double m = static_cast<double>(terms->dim);
  const double sigma2 = terms->quad / m;
  const double ll = -0.5 * m * (std::log(2.0 * std::numbers::pi) + std::log(sigma2) + 1.0) -
                    0.5 * terms->log_det;
  return {ll, sigma2};
}

double mce_objective(std::span<const double> empirical_rho, std::span<const double> phi, double tau) {
  if (!is_admissible(phi)) return kInf;
  try {
    const auto cov = CovarianceModel::from_rates(kappa_from_phi(phi));
    const auto rho = autocorrelations(cov, static_cast<int>(empirical_rho.size()), tau);
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double d = empirical_rho[i] - rho[i];
      s += d * d;
    }
    return std::isfinite(s) ? std::sqrt(s) : kInf;
  } catch (const Error&) {
    return kInf;
  }
}

int default_mce_horizon(std::size_t observations) {
  return std::max(1, static_cast<int>(std::floor(0.9 * static_cast<double>(observations - 1))));
}

std::vector<std::vector<double>> random_admissible_starts(int p, int count, std::uint64_t seed) {
  auto rng = make_rng(seed, 0x5eed);
  std::uniform_real_distribution<double> log_rate(std::log(1e-3), std::log(5.0));
  std::vector<std::vector<double>> starts;
  for (int s = 0; s < count; ++s) {
    std::uniform_int_distribution<int> pairs_dist(0, p / 2);
    const int pairs = pairs_dist(rng);
    std::vector<Complex> kappa;
    for (int i = 0; i < pairs; ++i) {
      const double re = std::exp(log_rate(rng));
      const double im = std::exp(log_rate(rng));
      kappa.emplace_back(re, im);
      kappa.emplace_back(re, -im);
    }
    while (static_cast<int>(kappa.size()) < p) kappa.emplace_back(std::exp(log_rate(rng)), 0.0);
    starts.push_back(phi_from_kappa(KappaVector(std::move(kappa))));
  }
  return starts;
}

FitResult mce_fit_correlations(std::span<const double> rho, double gamma_e0, double tau, int p,
                               const MceOptions& options) {
  if (p < 1) throw InvalidArgument("model order must be at least 1");
  if (rho.empty()) throw InvalidArgument("MCE needs at least one autocorrelation");
  if (!(gamma_e0 > 0.0)) throw InvalidArgument("empirical variance must be positive");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");

  auto starts = random_admissible_starts(p, options.starts, options.seed);
  for (const auto& s : options.extra_starts) {
    if (static_cast<int>(s.size()) != p) throw InvalidArgument("extra start has the wrong order");
    starts.push_back(s);
  }
  if (starts.empty()) throw NoAdmissibleStart("MCE needs at least one start");

  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.tolerance = options.tolerance;
  const auto objective = [&](std::span<const double> phi) { return mce_objective(rho, phi, tau); };

  std::vector<NelderMeadResult> results(starts.size());
  parallel_for(
      starts.size(), [&](std::size_t i) { results[i] = nelder_mead(objective, starts[i], nm); },
      options.threads > 0 ? options.threads : default_thread_count());

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value) best = i;
  }
  const auto& r = results[best];
  if (!std::isfinite(r.value)) throw NoAdmissibleStart("no MCE start reached an admissible model");

  const auto unit = CovarianceModel::from_rates(kappa_from_phi(r.x));
  FitResult fit;
  fit.model = OuModel{r.x, gamma_e0 / unit.gamma0(), 0.0};
  fit.method = FitMethod::Mce;
  fit.objective = r.value;
  fit.T = static_cast<int>(rho.size());
  fit.iterations = r.evaluations;
  fit.converged = r.converged;
  return fit;
}

FitResult mce_fit(const TimeSeriesSample& x, int p, const MceOptions& options) {
  const int T = options.T > 0 ? options.T : default_mce_horizon(x.size());
  if (static_cast<std::size_t>(T) >= x.size()) {
    throw InvalidArgument("MCE horizon T must be smaller than the series length");
  }
  const auto rho = empirical_autocorrelation(x, T);
  const auto gamma_e = empirical_autocovariance(x, 0);
  auto fit = mce_fit_correlations(rho, gamma_e[0], x.tau(), p, options);
  fit.model.mu = x.mean();
  return fit;
}

FitResult mle_fit(const TimeSeriesSample& x, int p, LikelihoodVariant variant,
                  const std::optional<OuModel>& init, const MleOptions& options) {
  if (p < 1) throw InvalidArgument("model order must be at least 1");
  if (init && static_cast<int>(init->order()) != p) {
    throw InvalidArgument("initial model order does not match p");
  }
  const auto objective = [&](std::span<const double> phi) {
    return -profiled_log_likelihood(x, phi, variant).log_likelihood;
  };

  std::vector<std::vector<double>> starts;
  if (init && std::isfinite(objective(init->phi))) {
    starts.push_back(init->phi);
  } else {
    const auto fallback = mce_fit(x, p);
    if (!std::isfinite(objective(fallback.model.phi))) {
      throw NoAdmissibleStart("neither the initial model nor the MCE fallback is admissible");
    }
    starts.push_back(fallback.model.phi);
  }
  for (auto& s : random_admissible_starts(p, options.starts, options.seed)) {
    if (std::isfinite(objective(s))) starts.push_back(std::move(s));
  }

  NelderMeadOptions nm;
  nm.max_evaluations = options.max_evaluations;
  nm.tolerance = options.tolerance;
  std::vector<NelderMeadResult> results(starts.size());
  parallel_for(
      starts.size(), [&](std::size_t i) { results[i] = nelder_mead(objective, starts[i], nm); },
      options.threads > 0 ? options.threads : default_thread_count());
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value) best = i;
  }
  const auto& r = results[best];
  const auto profile = profiled_log_likelihood(x, r.x, variant);

  FitResult fit;
  fit.model = OuModel{r.x, profile.sigma2, x.mean()};
  fit.method = variant == LikelihoodVariant::Diff ? FitMethod::MleDiff : FitMethod::MleCentered;
  fit.objective = profile.log_likelihood;
  fit.T = 0;
  fit.iterations = r.evaluations;
  fit.converged = r.converged;
  return fit;
}

}  // namespace oup
