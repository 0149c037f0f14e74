#pragma once

// Test-only reference computations. Each one takes a route independent of
// the library code it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "oup/kappa.hpp"
#include "oup/quadrature.hpp"

namespace oup::testing {

using Complex = std::complex<double>;

/// Elementary symmetric functions e_1..e_p by subset enumeration.
inline std::vector<Complex> elementary_symmetric(const std::vector<Complex>& z) {
  const std::size_t p = z.size();
  std::vector<Complex> e(p + 1);
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    Complex prod{1.0, 0.0};
    std::size_t bits = 0;
    for (std::size_t i = 0; i < p; ++i) {
      if (mask & (1u << i)) {
        prod *= z[i];
        ++bits;
      }
    }
    e[bits] += prod;
  }
  return e;
}

/// Partial-fraction weights A_h of prod_j 1/(1 + kappa_j w) = sum_h A_h / (1 + kappa_h w)
/// (distinct rates) by collocation at p sample points.
inline std::vector<Complex> collocated_partial_fractions(const std::vector<Complex>& kappa) {
  const auto p = static_cast<Eigen::Index>(kappa.size());
  Eigen::MatrixXcd a(p, p);
  Eigen::VectorXcd b(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Complex w{0.37 + 0.61 * static_cast<double>(i), 0.13 * static_cast<double>(i + 1)};
    Complex prod{1.0, 0.0};
    for (const auto& k : kappa) prod /= (1.0 + k * w);
    b[i] = prod;
    for (Eigen::Index h = 0; h < p; ++h) a(i, h) = 1.0 / (1.0 + kappa[static_cast<std::size_t>(h)] * w);
  }
  const Eigen::VectorXcd x = a.fullPivLu().solve(b);
  return {x.data(), x.data() + p};
}

/// Kernel of OU_a applied to an OU_b process driven by dw:
/// f(u) = e^{-b u} - a int_0^u e^{-b (u - v)} e^{-a v} dv  (from dz = dw - a z dt,
/// here with z the OU_a output and the outer operator OU_b).
inline Complex two_stage_kernel_by_convolution(Complex a, Complex b, double u) {
  if (u == 0.0) return {1.0, 0.0};
  const auto integrand = [&](double v) { return std::exp(-b * (u - v)) * std::exp(-a * v); };
  const Complex conv = oup::integrate_complex(integrand, 0.0, u, 1e-11, 8);
  return std::exp(-b * u) - a * conv;
}

/// Exact log-likelihood of the increments of a centered OU(1) sample via
/// the AR(1) joint density with x(0) integrated out analytically.
inline double ou1_increment_loglik(const std::vector<double>& x, double lambda, double sigma2,
                                   double tau) {
  const double a = std::exp(-lambda * tau);
  const double g0 = sigma2 / (2.0 * lambda);
  const double v = g0 * (1.0 - a * a);
  const std::size_t n = x.size() - 1;
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] - x[0];
  double A = 1.0 / g0 + static_cast<double>(n) * (1.0 - a) * (1.0 - a) / v;
  double B = 0.0, C = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s[i + 1] - a * s[i];
    B += (1.0 - a) * r / v;
    C += r * r / v;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  return -0.5 * std::log(two_pi * g0) - 0.5 * static_cast<double>(n) * std::log(two_pi * v) +
         0.5 * std::log(two_pi / A) - 0.5 * (C - B * B / A);
}

/// Exact centered OU(1) log-likelihood as a product of AR(1) transitions.
inline double ou1_centered_loglik(const std::vector<double>& x, double lambda, double sigma2,
                                  double tau) {
  const double a = std::exp(-lambda * tau);
  const double g0 = sigma2 / (2.0 * lambda);
  const double v = g0 * (1.0 - a * a);
  const double two_pi = 2.0 * std::numbers::pi;
  double ll = -0.5 * std::log(two_pi * g0) - x[0] * x[0] / (2.0 * g0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double r = x[i] - a * x[i - 1];
    ll += -0.5 * std::log(two_pi * v) - r * r / (2.0 * v);
  }
  return ll;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic distribution).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::ranges::sort(a);
  std::ranges::sort(b);
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  }
  return std::clamp(p, 0.0, 1.0);
}

/// Gaussian conditional variance of the first index given the rest, from an
/// explicit covariance matrix.
inline double conditional_variance(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  const Eigen::MatrixXd g = cov.bottomRightCorner(n - 1, n - 1);
  const Eigen::VectorXd c = cov.col(0).tail(n - 1);
  return cov(0, 0) - c.dot(g.ldlt().solve(c));
}

/// Random admissible rates of order p, mixing real, conjugate and repeated
/// entries. Always conjugation-closed; distinct entries are at least 5%
/// apart so partial-fraction kernels stay well conditioned.
inline std::vector<Complex> random_rates(std::mt19937_64& rng, int p, bool allow_repeats = true) {
  std::uniform_real_distribution<double> rate(0.1, 3.0);
  std::uniform_real_distribution<double> freq(0.1, 2.0);
  std::uniform_int_distribution<int> coin(0, 2);
  std::vector<Complex> k;
  while (static_cast<int>(k.size()) < p) {
    const int left = p - static_cast<int>(k.size());
    const int kind = coin(rng);
    const auto separated = [&](Complex z) {
      return std::ranges::all_of(k, [&](Complex y) {
        return std::abs(y - z) >= 0.05 * std::max(std::abs(y), std::abs(z));
      });
    };
    if (kind == 1 && left >= 2) {
      const Complex z{rate(rng), freq(rng)};
      if (!separated(z) || !separated(std::conj(z))) continue;
      k.push_back(z);
      k.push_back(std::conj(z));
    } else if (kind == 2 && allow_repeats && !k.empty()) {
      // repeat an existing real entry or a whole conjugate pair
      const Complex z = k[std::uniform_int_distribution<std::size_t>(0, k.size() - 1)(rng)];
      if (z.imag() == 0.0) {
        k.push_back(z);
      } else if (left >= 2) {
        k.push_back(z);
        k.push_back(std::conj(z));
      }
    } else {
      const Complex z{rate(rng), 0.0};
      if (separated(z)) k.push_back(z);
    }
  }
  return k;
}

}  // namespace oup::testing
