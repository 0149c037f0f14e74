#include "oup/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oup/errors.hpp"

namespace oup {

namespace {

double truncation_point(const ExponentialPolynomialKernel& f) {
  const double decay = f.min_decay();
  double peak = 0.0;
  const double probe = 1.0 / decay;
  for (int i = 0; i <= 200; ++i) peak = std::max(peak, std::abs(f(probe * i * 0.1)));
  peak = std::max(peak, f.envelope(0.0));
  double u = probe;
  while (f.envelope(u) >= 1e-14 * peak) u *= 1.25;
  return u;
}

}  // namespace

Complex integrate_complex(const std::function<Complex(double)>& g, double a, double b,
                          double rel_tol, int pieces, double abs_tol) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Real kernels evaluate with an imaginary part that is pure rounding noise;
  // adaptive refinement cannot reach a relative tolerance on noise.
  double peak = 0.0, peak_im = 0.0;
  for (int i = 0; i <= 64 * pieces; ++i) {
    const Complex v = g(a + (b - a) * i / (64.0 * pieces));
    peak = std::max(peak, std::abs(v));
    peak_im = std::max(peak_im, std::abs(v.imag()));
  }
  const bool real_only = peak_im <= 1e-13 * peak;
  Complex total{};
  double abs_total = 0.0;
  double err_total = 0.0;
  const double h = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == pieces) ? b : lo + h;
    double err_re = 0.0, err_im = 0.0, l1_re = 0.0, l1_im = 0.0;
    const double re = Quadrature::integrate([&](double u) { return g(u).real(); }, lo, hi, 10,
                                            rel_tol, &err_re, &l1_re);
    const double im =
        real_only ? 0.0
                  : Quadrature::integrate([&](double u) { return g(u).imag(); }, lo, hi, 10,
                                          rel_tol, &err_im, &l1_im);
    total += Complex{re, im};
    abs_total += l1_re + l1_im;
    err_total += err_re + err_im;
  }
  if (!(err_total <= rel_tol * std::max(std::abs(total), 1e-300) + 1e-13 * abs_total + abs_tol)) {
    std::ostringstream msg;
    msg << "quadrature error estimate " << err_total << " exceeds tolerance (integral "
        << std::abs(total) << ", integral of modulus " << abs_total << ")";
    throw QuadratureNonConvergence(msg.str());
  }
  return total;
}

Complex oracle_cross_quadrature(const ExponentialPolynomialKernel& f1,
                                const ExponentialPolynomialKernel& f2, double t, double rel_tol) {
  if (t < 0.0) throw InvalidArgument("quadrature oracle is defined for t >= 0");
  const double upper = std::max(truncation_point(f1), truncation_point(f2));
  // Lags where the covariance has decayed far below its scale are judged
  // against that scale rather than their own size.
  const Complex scale = integrate_complex(
      [&](double u) { return Complex{std::abs(f1(u)) * std::abs(f2(u)), 0.0}; }, 0.0, upper, 1e-6);
  return integrate_complex([&](double u) { return f1(t + u) * std::conj(f2(u)); }, 0.0, upper,
                           rel_tol, 32, 1e-3 * rel_tol * scale.real());
}

Complex oracle_gamma_quadrature(const ExponentialPolynomialKernel& kernel, double t, double rel_tol) {
  return oracle_cross_quadrature(kernel, kernel, std::abs(t), rel_tol);
}

}  // namespace oup
