#pragma once

#include <complex>
#include <vector>

#include "oup/kappa.hpp"

namespace oup {

/// One summand c * exp(-kappa u) (-kappa u)^degree / degree! of a kernel.
struct KernelTerm {
  Complex kappa;
  int degree = 0;
  Complex coeff;
};

/// Moving-average kernel f(u) = sigma * sum_terms c exp(-kappa u)(-kappa u)^j / j!
/// of a process driven by sigma * dw. Coefficients are stored without the
/// sigma factor.
///
/// `impulse` is the weight of the identity operator (white noise itself).
/// It is non-zero only for the composition seed returned by
/// identity_kernel() and is not part of f(u).
class ExponentialPolynomialKernel {
 public:
  ExponentialPolynomialKernel() = default;
  ExponentialPolynomialKernel(std::vector<KernelTerm> terms, double sigma, Complex impulse = {});

  [[nodiscard]] const std::vector<KernelTerm>& terms() const noexcept { return terms_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] Complex impulse() const noexcept { return impulse_; }

  /// f(u) for u >= 0; zero for u < 0.
  [[nodiscard]] Complex operator()(double u) const;

  /// Upper bound of |f(u)| from the triangle inequality.
  [[nodiscard]] double envelope(double u) const;

  /// Smallest Re(kappa) among the terms.
  [[nodiscard]] double min_decay() const;

  [[nodiscard]] ExponentialPolynomialKernel with_sigma(double sigma) const;

 private:
  std::vector<KernelTerm> terms_;
  double sigma_ = 1.0;
  Complex impulse_{};
};

/// Leading partial-fraction weights K_h = 1 / prod_{l != h} (1 - kappa_l/kappa_h)^{p_l}.
/// Throws DegenerateRoots if two roots coincide.
std::vector<Complex> partial_fraction_coefficients(const RootMultiplicitySet& roots);

/// Full expansion prod_h (1 + kappa_h w)^{-p_h} = sum_h sum_{m=1}^{p_h} A[h][m-1] (1 + kappa_h w)^{-m}.
/// A[h][p_h - 1] equals partial_fraction_coefficients()[h].
std::vector<std::vector<Complex>> partial_fraction_expansion(const RootMultiplicitySet& roots);

/// Kernel of prod_h OU_{kappa_h}^{p_h} applied to sigma * w.
ExponentialPolynomialKernel kernel_from_roots(const RootMultiplicitySet& roots, double sigma);

/// Kernel of the process with rates kappa; coincident rates are grouped with
/// the given relative tolerance.
ExponentialPolynomialKernel kernel_from_kappa(const KappaVector& kappa, double sigma,
                                              double tol = kDefaultGroupingTolerance);

/// Kernel of the model (sigma = sqrt(sigma2)). Throws StationarityViolation
/// for inadmissible phi.
ExponentialPolynomialKernel kernel_from_model(const OuModel& model,
                                              double tol = kDefaultGroupingTolerance);

/// White noise sigma * w viewed as a kernel: a pure impulse.
ExponentialPolynomialKernel identity_kernel(double sigma = 1.0);

/// Kernel of a single OU operator: sigma * exp(-kappa u).
ExponentialPolynomialKernel ou_kernel(Complex kappa, double sigma = 1.0);

/// Applies OU_{kappa} to the process described by `kernel`, symbolically.
/// Terms whose rate lies within tol (relative) of kappa are raised in degree,
/// the others are split by partial fractions.
ExponentialPolynomialKernel compose_kernels(const ExponentialPolynomialKernel& kernel, Complex kappa,
                                            double tol = kDefaultGroupingTolerance);

}  // namespace oup
