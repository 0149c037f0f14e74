#include "oup/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "oup/errors.hpp"

namespace oup {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

Complex gamma_cross(Complex k1, int i1, Complex k2, int i2, double sigma, double t) {
  if (i1 < 0 || i2 < 0) throw InvalidArgument("degrees must be non-negative");
  if (t < 0.0) throw InvalidArgument("gamma_cross is defined for t >= 0");
  const Complex s = k1 + std::conj(k2);
  Complex sum{};
  for (int j = 0; j <= i1; ++j) {
    sum += std::pow(t, j) * factorial(i1 + i2 - j) /
           (factorial(j) * factorial(i1 - j) * std::pow(s, i1 + i2 - j + 1));
  }
  return sigma * sigma * std::pow(-k1, i1) * std::pow(-std::conj(k2), i2) * std::exp(-k1 * t) /
         factorial(i2) * sum;
}

CovarianceModel::CovarianceModel(ExponentialPolynomialKernel kernel) : kernel_(std::move(kernel)) {
  if (kernel_.impulse() != Complex{}) {
    throw InvalidArgument("white noise has no covariance function");
  }
  if (kernel_.terms().empty()) throw InvalidArgument("kernel has no terms");
  const double s2 = kernel_.sigma() * kernel_.sigma();
  for (const auto& a : kernel_.terms()) {
    auto it = std::ranges::find_if(modes_, [&](const Mode& m) { return m.kappa == a.kappa; });
    if (it == modes_.end()) {
      modes_.push_back({a.kappa, {}});
      it = modes_.end() - 1;
    }
    if (it->poly.size() < static_cast<std::size_t>(a.degree) + 1) {
      it->poly.resize(static_cast<std::size_t>(a.degree) + 1);
    }
    for (const auto& b : kernel_.terms()) {
      const int i1 = a.degree;
      const int i2 = b.degree;
      const Complex s = a.kappa + std::conj(b.kappa);
      const Complex front = a.coeff * std::conj(b.coeff) * s2 * std::pow(-a.kappa, i1) *
                            std::pow(-std::conj(b.kappa), i2) / factorial(i2);
      for (int j = 0; j <= i1; ++j) {
        it->poly[static_cast<std::size_t>(j)] +=
            front * factorial(i1 + i2 - j) /
            (factorial(j) * factorial(i1 - j) * std::pow(s, i1 + i2 - j + 1));
      }
    }
  }
  check_variance();
}

CovarianceModel::CovarianceModel(ExponentialPolynomialKernel kernel, Bidiagonal bidiagonal)
    : kernel_(std::move(kernel)), bidiagonal_(std::move(bidiagonal)) {
  check_variance();
}

void CovarianceModel::check_variance() {
  gamma0_ = gamma(0.0);
  if (!(gamma0_ > 0.0)) throw NotPositiveDefinite("model variance is not positive");
}

CovarianceModel CovarianceModel::from_model(const OuModel& model, double tol, Evaluation evaluation) {
  model.validate();
  return from_rates(kappa_from_phi(model.phi), std::sqrt(model.sigma2), tol, evaluation);
}

namespace {

bool cancels_badly(const ExponentialPolynomialKernel& kernel) {
  double total = 0.0;
  for (const auto& t : kernel.terms()) total += std::abs(t.coeff);
  return total > CovarianceModel::kCancellationLimit;
}

}  // namespace

CovarianceModel CovarianceModel::from_rates(const KappaVector& kappa, double sigma, double tol,
                                            Evaluation evaluation) {
  auto kernel = kernel_from_kappa(kappa, sigma, tol);
  const bool divided = evaluation == Evaluation::DividedDifferences ||
                       (evaluation == Evaluation::Auto && cancels_badly(kernel));
  if (!divided) return CovarianceModel(std::move(kernel));

  const auto p = static_cast<Eigen::Index>(kappa.order());
  Bidiagonal b;
  b.generator = Eigen::MatrixXcd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) b.generator(i, i) = kappa[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) b.generator(i, i - 1) = 1.0;

  // a^T = e_p^T J^{p-1}
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(p);
  row(p - 1) = 1.0;
  for (Eigen::Index k = 1; k < p; ++k) row = row * b.generator;
  b.readout = row.transpose();

  // vec(J P + P J^H) = (I (x) J + conj(J) (x) I) vec(P), column-major
  const Eigen::Index q = p * p;
  Eigen::MatrixXcd lyap = Eigen::MatrixXcd::Zero(q, q);
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index k = 0; k < p; ++k) {
        lyap(c * p + r, c * p + k) += b.generator(r, k);
        lyap(c * p + r, k * p + r) += std::conj(b.generator(c, k));
      }
    }
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(q);
  rhs(0) = 1.0;
  const Eigen::VectorXcd vec_p = lyap.partialPivLu().solve(rhs);
  const Eigen::MatrixXcd gram = Eigen::Map<const Eigen::MatrixXcd>(vec_p.data(), p, p);
  b.state = sigma * sigma * (gram * b.readout.conjugate());
  return CovarianceModel(std::move(kernel), std::move(b));
}

Complex CovarianceModel::gamma_complex(double t) const {
  if (bidiagonal_) {
    const Eigen::MatrixXcd decay = (-t * bidiagonal_->generator).exp();
    return (bidiagonal_->readout.transpose() * (decay * bidiagonal_->state)).value();
  }
  Complex sum{};
  for (const auto& m : modes_) {
    Complex poly{};
    for (auto it = m.poly.rbegin(); it != m.poly.rend(); ++it) poly = poly * t + *it;
    sum += std::exp(-m.kappa * t) * poly;
  }
  return sum;
}

double CovarianceModel::gamma(double t) const { return gamma_complex(std::abs(t)).real(); }

std::vector<double> CovarianceModel::gamma_grid(int n, double tau) const {
  if (n < 0) throw InvalidArgument("grid size must be non-negative");
  std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
  if (bidiagonal_) {
    const Eigen::MatrixXcd step = (-tau * bidiagonal_->generator).exp();
    Eigen::VectorXcd v = bidiagonal_->state;
    for (int k = 0; k <= n; ++k) {
      if (k > 0 && k % 64 == 0) {
        v = (-(k * tau) * bidiagonal_->generator).exp() * bidiagonal_->state;
      }
      out[static_cast<std::size_t>(k)] = (bidiagonal_->readout.transpose() * v).value().real();
      v = step * v;
    }
    return out;
  }
  for (const auto& m : modes_) {
    const Complex step = std::exp(-m.kappa * tau);
    Complex decay{1.0, 0.0};
    for (int k = 0; k <= n; ++k) {
      // Refresh periodically so rounding in the running product stays bounded.
      if (k % 64 == 0) decay = std::exp(-m.kappa * (k * tau));
      const double t = k * tau;
      Complex poly{};
      for (auto it = m.poly.rbegin(); it != m.poly.rend(); ++it) poly = poly * t + *it;
      out[static_cast<std::size_t>(k)] += (decay * poly).real();
      decay *= step;
    }
  }
  return out;
}

std::vector<double> autocorrelations(const CovarianceModel& model, int T, double tau) {
  if (T < 1) throw InvalidArgument("T must be at least 1");
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  auto grid = model.gamma_grid(T, tau);
  std::vector<double> rho(static_cast<std::size_t>(T));
  for (int i = 1; i <= T; ++i) rho[static_cast<std::size_t>(i - 1)] = grid[static_cast<std::size_t>(i)] / grid[0];
  return rho;
}

ToeplitzMatrix::ToeplitzMatrix(std::vector<double> first_row) : first_row_(std::move(first_row)) {
  if (first_row_.empty()) throw InvalidArgument("Toeplitz matrix must have dimension >= 1");
}

Eigen::MatrixXd ToeplitzMatrix::dense() const {
  const auto n = static_cast<Eigen::Index>(first_row_.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = first_row_[static_cast<std::size_t>(std::abs(i - j))];
  }
  return m;
}

CholeskyFactor ToeplitzMatrix::factorize() const {
  const Eigen::MatrixXd a = dense();
  const double scale = std::abs(first_row_[0]);
  for (double rel : {0.0, 1e-12, 1e-10, 1e-8}) {
    const double jitter = rel * scale;
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) continue;
    const auto diag = llt.matrixLLT().diagonal();
    if (!diag.allFinite() || (diag.array() <= 0.0).any()) continue;
    return CholeskyFactor(std::move(llt), jitter);
  }
  throw NotPositiveDefinite("covariance matrix of dimension " + std::to_string(first_row_.size()) +
                            " is not positive definite");
}

std::optional<GaussianForm> ToeplitzMatrix::levinson(const Eigen::VectorXd& b) const {
  const std::size_t n = first_row_.size();
  if (static_cast<std::size_t>(b.size()) != n) throw InvalidArgument("vector size does not match matrix");
  const auto& g = first_row_;
  std::vector<double> coef(n, 0.0);
  std::vector<double> prev(n, 0.0);
  double v = g[0];
  if (!(v > 0.0)) return std::nullopt;
  double log_det = std::log(v);
  double quad = b[0] * b[0] / v;
  for (std::size_t k = 1; k < n; ++k) {
    double num = g[k];
    for (std::size_t j = 1; j < k; ++j) num -= coef[j] * g[k - j];
    const double reflection = num / v;
    prev = coef;
    coef[k] = reflection;
    for (std::size_t j = 1; j < k; ++j) coef[j] = prev[j] - reflection * prev[k - j];
    v *= 1.0 - reflection * reflection;
    if (!(v > 1e-14 * g[0])) return std::nullopt;
    double pred = 0.0;
    for (std::size_t j = 1; j <= k; ++j) pred += coef[j] * b[static_cast<Eigen::Index>(k - j)];
    const double e = b[static_cast<Eigen::Index>(k)] - pred;
    log_det += std::log(v);
    quad += e * e / v;
  }
  return GaussianForm{log_det, quad};
}

CholeskyFactor::CholeskyFactor(Eigen::LLT<Eigen::MatrixXd> llt, double jitter)
    : llt_(std::move(llt)), jitter_(jitter) {}

double CholeskyFactor::log_det() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double CholeskyFactor::quadratic_form(const Eigen::VectorXd& b) const {
  const Eigen::VectorXd y = llt_.matrixL().solve(b);
  return y.squaredNorm();
}

Eigen::VectorXd CholeskyFactor::lower_times(const Eigen::VectorXd& z) const {
  return llt_.matrixL() * z;
}

ToeplitzMatrix gamma_matrix(const CovarianceModel& model, int n, double tau) {
  if (n < 1) throw InvalidArgument("gamma_matrix requires n >= 1");
  return ToeplitzMatrix(model.gamma_grid(n, tau));
}

ToeplitzMatrix diff_matrix(const CovarianceModel& model, int n, double tau) {
  if (n < 1) throw InvalidArgument("diff_matrix requires n >= 1");
  const auto g = model.gamma_grid(n, tau);
  std::vector<double> row(static_cast<std::size_t>(n));
  row[0] = 2.0 * (g[0] - g[1]);
  for (std::size_t k = 1; k < row.size(); ++k) row[k] = 2.0 * g[k] - g[k + 1] - g[k - 1];
  return ToeplitzMatrix(std::move(row));
}

}  // namespace oup
