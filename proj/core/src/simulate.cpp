#include "oup/simulate.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "oup/errors.hpp"

namespace oup {

namespace {

Eigen::VectorXd standard_normals(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

// Symmetric square root with tiny negative eigenvalues from rounding clipped.
Eigen::MatrixXd psd_root(const Eigen::MatrixXd& cov, const char* what) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  const double scale = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw NotPositiveDefinite(std::string(what) + " is not positive semidefinite");
  }
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

GridSampler::GridSampler(const OuModel& model, int n, double tau)
    : model_(model),
      n_(n),
      tau_(tau),
      covariance_(CovarianceModel::from_model(model)),
      factor_([&] {
        if (n < 1) throw InvalidArgument("simulation needs n >= 1");
        if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
        return gamma_matrix(covariance_, n, tau).factorize();
      }()) {}

TimeSeriesSample GridSampler::draw(std::mt19937_64& rng) const {
  const Eigen::VectorXd x = factor_.lower_times(standard_normals(rng, n_ + 1));
  std::vector<double> values(static_cast<std::size_t>(n_) + 1);
  for (int i = 0; i <= n_; ++i) values[static_cast<std::size_t>(i)] = x[i] + model_.mu;
  return TimeSeriesSample(std::move(values), tau_, 0.0, MeanPolicy::explicit_mean(model_.mu));
}

TimeSeriesSample GridSampler::draw(std::uint64_t seed, std::uint64_t replicate) const {
  auto rng = make_rng(seed, replicate);
  return draw(rng);
}

TimeSeriesSample simulate_grid(const OuModel& model, int n, double tau, std::uint64_t seed) {
  return GridSampler(model, n, tau).draw(seed);
}

StateSpaceSampler::StateSpaceSampler(const OuModel& model, double tau) : model_(model), tau_(tau) {
  model.validate();
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (!is_admissible(model.phi)) throw StationarityViolation("model is not stationary");
  const auto p = static_cast<Eigen::Index>(model.order());

  Eigen::MatrixXd drift = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i + 1 < p; ++i) drift(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < p; ++j) drift(p - 1, j) = model.phi[static_cast<std::size_t>(p - 1 - j)];
  Eigen::MatrixXd noise = Eigen::MatrixXd::Zero(p, p);
  noise(p - 1, p - 1) = model.sigma2;

  // Van Loan: exp([[-A, Q], [0, A^T]] tau) = [[., F12], [0, F22]],
  // transition = F22^T, innovation covariance = transition * F12.
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  block.topLeftCorner(p, p) = -drift * tau;
  block.topRightCorner(p, p) = noise * tau;
  block.bottomRightCorner(p, p) = drift.transpose() * tau;
  const Eigen::MatrixXd e = block.exp();
  transition_ = e.bottomRightCorner(p, p).transpose();
  const Eigen::MatrixXd innovation = transition_ * e.topRightCorner(p, p);

  // Stationary covariance: A S + S A^T + Q = 0.
  const Eigen::Index q = p * p;
  Eigen::MatrixXd lyap = Eigen::MatrixXd::Zero(q, q);
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index k = 0; k < p; ++k) {
        lyap(c * p + r, c * p + k) += drift(r, k);
        lyap(c * p + r, k * p + r) += drift(c, k);
      }
    }
  }
  const Eigen::VectorXd vec_s = lyap.partialPivLu().solve(-Eigen::Map<const Eigen::VectorXd>(noise.data(), q));
  const Eigen::MatrixXd stationary = Eigen::Map<const Eigen::MatrixXd>(vec_s.data(), p, p);
  variance_ = stationary(p - 1, p - 1);
  if (!(variance_ > 0.0)) throw NotPositiveDefinite("model variance is not positive");

  innovation_root_ = psd_root(innovation, "state innovation covariance");
  stationary_root_ = psd_root(stationary, "stationary state covariance");
}

TimeSeriesSample StateSpaceSampler::draw(int n, std::mt19937_64& rng) const {
  if (n < 1) throw InvalidArgument("simulation needs n >= 1");
  const Eigen::Index p = transition_.rows();
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  Eigen::VectorXd state = stationary_root_ * standard_normals(rng, p);
  values[0] = state[p - 1] + model_.mu;
  for (int i = 1; i <= n; ++i) {
    state = transition_ * state + innovation_root_ * standard_normals(rng, p);
    values[static_cast<std::size_t>(i)] = state[p - 1] + model_.mu;
  }
  return TimeSeriesSample(std::move(values), tau_, 0.0, MeanPolicy::explicit_mean(model_.mu));
}

TimeSeriesSample StateSpaceSampler::draw(int n, std::uint64_t seed, std::uint64_t replicate) const {
  auto rng = make_rng(seed, replicate);
  return draw(n, rng);
}

TimeSeriesSample simulate_state_space(const OuModel& model, int n, double tau, std::uint64_t seed) {
  return StateSpaceSampler(model, tau).draw(n, seed);
}

double ou1_innovation_variance(double lambda, double sigma, double tau) {
  return sigma * sigma / (2.0 * lambda) * (1.0 - std::exp(-2.0 * lambda * tau));
}

TimeSeriesSample simulate_ou1_recursive(double lambda, double sigma, int n, double tau,
                                        std::uint64_t seed) {
  if (!(lambda > 0.0)) throw StationarityViolation("OU(1) rate must be positive");
  if (n < 1) throw InvalidArgument("simulation needs n >= 1");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a = std::exp(-lambda * tau);
  const double innovation_sd = std::sqrt(ou1_innovation_variance(lambda, sigma, tau));
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  x[0] = sigma / std::sqrt(2.0 * lambda) * normal(rng);
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = a * x[i - 1] + innovation_sd * normal(rng);
  return TimeSeriesSample(std::move(x), tau, 0.0, MeanPolicy::centered());
}

TimeSeriesSample refine_path(const OuModel& model, const TimeSeriesSample& coarse, int factor,
                             std::uint64_t seed, std::optional<RefineRange> range) {
  if (factor < 2) throw InvalidArgument("refinement factor must be at least 2");
  const CovarianceModel cov = CovarianceModel::from_model(model);
  const auto n = static_cast<int>(coarse.size());
  const double h = coarse.tau() / factor;

  int first = 0;
  int last = (n - 1) * factor;
  if (range) {
    if (!(range->to > range->from)) throw InvalidArgument("refine range must be non-empty");
    first = std::max(first, static_cast<int>(std::ceil((range->from - coarse.t0()) / h - 1e-9)));
    last = std::min(last, static_cast<int>(std::floor((range->to - coarse.t0()) / h + 1e-9)));
    if (last < first + 1) throw InvalidArgument("refine range holds fewer than two fine points");
  }

  std::vector<int> free_points;
  for (int k = first; k <= last; ++k) {
    if (k % factor != 0) free_points.push_back(k);
  }

  std::vector<double> out(static_cast<std::size_t>(last - first + 1));
  for (int k = first; k <= last; ++k) {
    if (k % factor == 0) out[static_cast<std::size_t>(k - first)] = coarse[static_cast<std::size_t>(k / factor)];
  }

  if (!free_points.empty()) {
    const auto factor_cc = gamma_matrix(cov, n - 1, coarse.tau()).factorize();
    const auto m = static_cast<Eigen::Index>(free_points.size());
    Eigen::MatrixXd cross(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double t = free_points[static_cast<std::size_t>(j)] * h;
      for (int i = 0; i < n; ++i) cross(i, j) = cov.gamma(t - i * coarse.tau());
    }
    Eigen::VectorXd resid(n);
    for (int i = 0; i < n; ++i) resid[i] = coarse[static_cast<std::size_t>(i)] - model.mu;
    const Eigen::VectorXd weights = factor_cc.solve(resid);
    const Eigen::MatrixXd solved = factor_cc.solve(cross);

    Eigen::MatrixXd cond(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) {
        const double dt = (free_points[static_cast<std::size_t>(a)] - free_points[static_cast<std::size_t>(b)]) * h;
        cond(a, b) = cov.gamma(dt);
      }
    }
    cond -= cross.transpose() * solved;
    cond = 0.5 * (cond + cond.transpose());

    // Eigen-decomposition tolerates the near-singular conditional covariance
    // of smooth (p >= 2) processes on fine grids.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cond);
    if (eig.info() != Eigen::Success) {
      throw NotPositiveDefinite("conditional covariance decomposition failed");
    }
    const double floor = -1e-8 * cov.gamma0();
    if (eig.eigenvalues().minCoeff() < floor) {
      throw NotPositiveDefinite("conditional covariance has a negative eigenvalue");
    }
    const Eigen::VectorXd scale = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    auto rng = make_rng(seed);
    const Eigen::VectorXd z = standard_normals(rng, m);
    const Eigen::VectorXd draw = eig.eigenvectors() * scale.cwiseProduct(z);
    const Eigen::VectorXd mean = cross.transpose() * weights;
    for (Eigen::Index j = 0; j < m; ++j) {
      out[static_cast<std::size_t>(free_points[static_cast<std::size_t>(j)] - first)] = model.mu + mean[j] + draw[j];
    }
  }
  return TimeSeriesSample(std::move(out), h, coarse.t0() + first * h,
                          MeanPolicy::explicit_mean(model.mu));
}

}  // namespace oup
