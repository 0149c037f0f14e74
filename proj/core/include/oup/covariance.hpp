#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "oup/kernel.hpp"

namespace oup {

/// E xi^{(i1)}_{k1,sigma}(t) conj(xi^{(i2)}_{k2,sigma}(0)) for t >= 0, the
/// cross-covariance of two degree-i OU processes driven by the same noise.
Complex gamma_cross(Complex k1, int i1, Complex k2, int i2, double sigma, double t);

/// Closed-form stationary autocovariance of the process with a given kernel.
///
/// The covariance is a finite exponential-polynomial sum
///   gamma(t) = sum_h exp(-kappa_h t) sum_j b_{h,j} t^j,   t >= 0,
/// precomputed once from the pairwise cross-covariances of the kernel terms.
class CovarianceModel {
 public:
  explicit CovarianceModel(ExponentialPolynomialKernel kernel);

  enum class Evaluation { Auto, PartialFractions, DividedDifferences };

  /// Auto switches to the divided-difference evaluation when the kernel's
  /// absolute coefficient sum exceeds this multiple of |f(0)| = sigma.
  static constexpr double kCancellationLimit = 1e2;

  static CovarianceModel from_model(const OuModel& model, double tol = kDefaultGroupingTolerance,
                                    Evaluation evaluation = Evaluation::Auto);

  /// Covariance for a rate multiset. Nearly coincident rates make the
  /// partial-fraction coefficients cancel catastrophically, so such sets are
  /// evaluated through the kernel's divided-difference form instead: with J
  /// the lower bidiagonal matrix holding the rates on its diagonal,
  /// f(u) = [J^{p-1} exp(-u J)]_{p,1} and gamma(t) = sigma^2 a^T exp(-t J) P conj(a),
  /// where J P + P J^H = e_1 e_1^T.
  static CovarianceModel from_rates(const KappaVector& kappa, double sigma = 1.0,
                                    double tol = kDefaultGroupingTolerance,
                                    Evaluation evaluation = Evaluation::Auto);

  [[nodiscard]] bool uses_divided_differences() const noexcept { return bidiagonal_.has_value(); }

  [[nodiscard]] double gamma(double t) const;
  /// gamma before the imaginary residue is dropped; t >= 0.
  [[nodiscard]] Complex gamma_complex(double t) const;
  [[nodiscard]] double gamma0() const noexcept { return gamma0_; }

  /// gamma(k * tau) for k = 0..n.
  [[nodiscard]] std::vector<double> gamma_grid(int n, double tau = 1.0) const;

  [[nodiscard]] const ExponentialPolynomialKernel& kernel() const noexcept { return kernel_; }

 private:
  struct Mode {
    Complex kappa;
    std::vector<Complex> poly;  // coefficients of t^j
  };

  struct Bidiagonal {
    Eigen::MatrixXcd generator;  // J
    Eigen::VectorXcd readout;    // a = (J^{p-1})^T e_p
    Eigen::VectorXcd state;      // P conj(a)
  };

  CovarianceModel(ExponentialPolynomialKernel kernel, Bidiagonal bidiagonal);
  void check_variance();

  ExponentialPolynomialKernel kernel_;
  std::vector<Mode> modes_;
  std::optional<Bidiagonal> bidiagonal_;
  double gamma0_ = 0.0;
};

/// rho_i = gamma(i tau) / gamma(0) for i = 1..T.
std::vector<double> autocorrelations(const CovarianceModel& model, int T, double tau = 1.0);

class CholeskyFactor;

struct GaussianForm {
  double log_det;
  double quadratic_form;  // b^T A^{-1} b
};

/// Symmetric Toeplitz matrix given by its first row.
class ToeplitzMatrix {
 public:
  explicit ToeplitzMatrix(std::vector<double> first_row);

  [[nodiscard]] std::size_t dimension() const noexcept { return first_row_.size(); }
  [[nodiscard]] std::span<const double> first_row() const noexcept { return first_row_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return first_row_[i > j ? i - j : j - i];
  }
  [[nodiscard]] Eigen::MatrixXd dense() const;

  /// Cholesky factorization with diagonal jitter escalation
  /// (0, 1e-12, 1e-10, 1e-8) * first_row[0]. Throws NotPositiveDefinite.
  [[nodiscard]] CholeskyFactor factorize() const;

  /// log det and b^T A^{-1} b by the Durbin-Levinson recursion in O(n^2),
  /// without forming the matrix. nullopt when a one-step prediction
  /// variance is not positive (numerically not positive definite).
  [[nodiscard]] std::optional<GaussianForm> levinson(const Eigen::VectorXd& b) const;

 private:
  std::vector<double> first_row_;
};

class CholeskyFactor {
 public:
  CholeskyFactor(Eigen::LLT<Eigen::MatrixXd> llt, double jitter);

  [[nodiscard]] Eigen::Index dimension() const { return llt_.rows(); }
  [[nodiscard]] double log_det() const;
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return llt_.solve(b); }
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const { return llt_.solve(b); }
  /// b^T A^{-1} b
  [[nodiscard]] double quadratic_form(const Eigen::VectorXd& b) const;
  /// L z for the lower-triangular factor L.
  [[nodiscard]] Eigen::VectorXd lower_times(const Eigen::VectorXd& z) const;
  [[nodiscard]] double jitter() const noexcept { return jitter_; }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_;
};

/// (n+1) x (n+1) covariance of (x(0), x(tau), ..., x(n tau)).
ToeplitzMatrix gamma_matrix(const CovarianceModel& model, int n, double tau = 1.0);

/// n x n covariance of the increments x((i+1) tau) - x(i tau), i = 0..n-1:
/// V_{h,i} = 2 gamma(|h-i|) - gamma(|h-i|+1) - gamma(|h-i|-1).
ToeplitzMatrix diff_matrix(const CovarianceModel& model, int n, double tau = 1.0);

}  // namespace oup
