#pragma once

#include <complex>
#include <functional>

#include "oup/kernel.hpp"

namespace oup {

/// Independent check of the closed-form covariance: adaptive Gauss-Kronrod
/// quadrature of int_0^inf f(t + u) conj(f(u)) du, truncated where the kernel
/// envelope drops below 1e-14 of its maximum. Test-only; never on a hot path.
/// Throws QuadratureNonConvergence if the error estimate misses rel_tol
/// relative to the result, or 1e-3 * rel_tol relative to int |f1| |f2| du.
Complex oracle_gamma_quadrature(const ExponentialPolynomialKernel& kernel, double t,
                                double rel_tol = 1e-10);

/// Quadrature of int_0^inf f1(t + u) conj(f2(u)) du for two kernels.
Complex oracle_cross_quadrature(const ExponentialPolynomialKernel& f1,
                                const ExponentialPolynomialKernel& f2, double t,
                                double rel_tol = 1e-10);

/// Quadrature of int_a^b g(u) du for a complex integrand, split into
/// `pieces` panels. The error estimate must stay below
/// rel_tol * |result| + abs_tol (plus a 1e-13 * int |g| rounding floor).
Complex integrate_complex(const std::function<Complex(double)>& g, double a, double b,
                          double rel_tol, int pieces = 32, double abs_tol = 0.0);

}  // namespace oup
