#include "oup/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include "oup/errors.hpp"

namespace oup {

std::vector<Complex> expand_linear_factors(std::span<const Complex> roots) {
  std::vector<Complex> poly{Complex{1.0, 0.0}};
  poly.reserve(roots.size() + 1);
  for (const Complex& r : roots) {
    poly.push_back(Complex{0.0, 0.0});
    for (std::size_t k = poly.size() - 1; k > 0; --k) poly[k] += r * poly[k - 1];
  }
  return poly;
}

std::pair<Complex, Complex> evaluate_monic(std::span<const double> coeffs, Complex y) {
  Complex value{1.0, 0.0};
  Complex deriv{0.0, 0.0};
  for (double c : coeffs) {
    deriv = deriv * y + value;
    value = value * y + c;
  }
  return {value, deriv};
}

namespace {

using WideComplex = std::complex<long double>;

std::pair<WideComplex, WideComplex> evaluate_wide(std::span<const double> coeffs, WideComplex y) {
  WideComplex value{1.0L, 0.0L};
  WideComplex deriv{0.0L, 0.0L};
  for (double c : coeffs) {
    deriv = deriv * y + value;
    value = value * y + static_cast<long double>(c);
  }
  return {value, deriv};
}

// Newton polish in extended precision; steps are kept only while they
// shrink the residual, so (near-)multiple roots are left alone.
Complex polish_root(std::span<const double> coeffs, Complex start) {
  WideComplex y{start.real(), start.imag()};
  auto [value, deriv] = evaluate_wide(coeffs, y);
  for (int iter = 0; iter < 4; ++iter) {
    if (std::abs(deriv) <= 1e-8L * (1.0L + std::abs(value))) break;
    const WideComplex step = value / deriv;
    if (std::abs(step) >= 1e-3L * (1.0L + std::abs(y))) break;
    const WideComplex next = y - step;
    const auto [next_value, next_deriv] = evaluate_wide(coeffs, next);
    if (std::abs(next_value) >= std::abs(value)) break;
    y = next;
    value = next_value;
    deriv = next_deriv;
  }
  return {static_cast<double>(y.real()), static_cast<double>(y.imag())};
}

}  // namespace

std::vector<Complex> monic_polynomial_roots(std::span<const double> coeffs) {
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  if (p == 0) return {};
  if (p == 1) return {Complex{-coeffs[0], 0.0}};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = -coeffs[static_cast<std::size_t>(j)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw SingularSystem("companion-matrix eigenvalue iteration did not converge");
  }

  std::vector<Complex> roots;
  roots.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) {
    roots.push_back(polish_root(coeffs, solver.eigenvalues()[i]));
  }
  return roots;
}

}  // namespace oup
