#include "oup/ar_baseline.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "oup/errors.hpp"
#include "oup/estimate.hpp"

namespace oup {

double ARModel::spectral_radius() const {
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = coeffs[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  return Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<double> ARModel::autocorrelations(int count) const {
  // Solve the first p Yule-Walker equations for rho_1..rho_p, then recurse.
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(p, p);
  Eigen::VectorXd b(p);
  for (Eigen::Index k = 1; k <= p; ++k) {
    b[k - 1] = coeffs[static_cast<std::size_t>(k - 1)];  // rho_0 = 1 term
    for (Eigen::Index j = 1; j <= p; ++j) {
      const Eigen::Index lag = std::abs(k - j);
      if (lag == 0) continue;
      a(k - 1, lag - 1) -= coeffs[static_cast<std::size_t>(j - 1)];
    }
  }
  const Eigen::VectorXd head = a.partialPivLu().solve(b);
  std::vector<double> rho(static_cast<std::size_t>(std::max<Eigen::Index>(count, p)));
  for (Eigen::Index k = 0; k < p; ++k) rho[static_cast<std::size_t>(k)] = head[k];
  for (std::size_t k = static_cast<std::size_t>(p); k < rho.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= coeffs.size(); ++j) {
      s += coeffs[j - 1] * (k + 1 == j ? 1.0 : rho[k - j]);
    }
    rho[k] = s;
  }
  rho.resize(static_cast<std::size_t>(count));
  return rho;
}

ARModel yule_walker_from_correlations(std::span<const double> rho) {
  const auto p = static_cast<Eigen::Index>(rho.size());
  if (p < 1) throw InvalidArgument("Yule-Walker needs at least one autocorrelation");
  Eigen::MatrixXd r(p, p);
  Eigen::VectorXd rhs(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    rhs[i] = rho[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto lag = static_cast<std::size_t>(std::abs(i - j));
      r(i, j) = lag == 0 ? 1.0 : rho[lag - 1];
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) throw SingularSystem("Yule-Walker matrix is not positive definite");
  const Eigen::VectorXd a = llt.solve(rhs);
  ARModel model;
  model.coeffs.assign(a.data(), a.data() + p);
  model.noise_var = 1.0 - a.dot(rhs);
  if (!(model.noise_var > 0.0)) throw SingularSystem("Yule-Walker residual variance is not positive");
  return model;
}

ARModel yule_walker_fit(const TimeSeriesSample& x, int p) {
  if (p < 1 || static_cast<std::size_t>(p) >= x.size()) {
    throw InvalidArgument("AR order must satisfy 1 <= p < length");
  }
  const auto g = empirical_autocovariance(x, p);
  if (!(g[0] > 0.0)) throw SingularSystem("series has zero empirical variance");
  std::vector<double> rho(g.begin() + 1, g.end());
  for (double& r : rho) r /= g[0];
  auto model = yule_walker_from_correlations(rho);
  model.noise_var *= g[0];
  return model;
}

double ar2_r3(double r1, double r2) {
  if (!(std::abs(r1) < 1.0) || !(r2 <= 1.0) || !(r2 >= 2.0 * r1 * r1 - 1.0)) {
    throw AdmissibilityViolation("(r1, r2) outside the AR(2) correlation region");
  }
  return r1 / (1.0 - r1 * r1) * (2.0 * r2 - r1 * r1 - r2 * r2);
}

double ou2_rho(double lambda1, double lambda2, int h, double tau) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw StationarityViolation("OU(2) rates must be positive");
  if (h == 0) return 1.0;
  const double s = std::abs(h) * tau;
  const double d = lambda2 - lambda1;
  if (std::abs(d) >= 1e-6) {
    return (lambda2 * std::exp(-lambda2 * s) - lambda1 * std::exp(-lambda1 * s)) / d;
  }
  // Divided difference of f(l) = l exp(-l s) about the midpoint:
  // f'(m) + f'''(m) d^2 / 24 + O(d^4).
  const double m = 0.5 * (lambda1 + lambda2);
  const double e = std::exp(-m * s);
  const double f1 = e * (1.0 - m * s);
  const double f3 = e * (3.0 * s * s - m * s * s * s);
  return f1 + f3 * d * d / 24.0;
}

double lemma_gap(double lambda1, double lambda2) {
  const double r1 = ou2_rho(lambda1, lambda2, 1);
  const double r2 = ou2_rho(lambda1, lambda2, 2);
  return ar2_r3(r1, r2) - ou2_rho(lambda1, lambda2, 3);
}

std::vector<GapCell> lemma_gap_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo) || lo < 0.0) throw InvalidArgument("invalid gap grid");
  std::vector<GapCell> cells;
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 1; i <= count; ++i) {
    for (int j = 1; j <= count; ++j) {
      const double l1 = lo + i * step;
      const double l2 = lo + j * step;
      cells.push_back({l1, l2, lemma_gap(l1, l2)});
    }
  }
  return cells;
}

}  // namespace oup
