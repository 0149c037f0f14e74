#pragma once

#include <complex>
#include <span>
#include <vector>

namespace oup {

using Complex = std::complex<double>;

/// Coefficients of prod_j (1 + roots[j] z), lowest degree first. The result
/// has roots.size() + 1 entries and a leading constant term of 1.
std::vector<Complex> expand_linear_factors(std::span<const Complex> roots);

/// Roots of the monic polynomial y^p + coeffs[0] y^(p-1) + ... + coeffs[p-1].
/// Eigenvalues of the companion matrix, each refined by one Newton step.
std::vector<Complex> monic_polynomial_roots(std::span<const double> coeffs);

/// Horner evaluation of the monic polynomial described above and its
/// derivative at y.
std::pair<Complex, Complex> evaluate_monic(std::span<const double> coeffs, Complex y);

}  // namespace oup
