#include "oup/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oup/errors.hpp"

namespace oup {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficients A_m (index m-1) of sum_m A_m (1 + kappa w)^{-m} equal to
// sum_j c_j X_j with X_j = (-kappa w)^j / (1 + kappa w)^{j+1}.
std::vector<Complex> degree_to_power(const std::vector<Complex>& by_degree) {
  std::vector<Complex> power(by_degree.size());
  for (std::size_t j = 0; j < by_degree.size(); ++j) {
    // (-kappa w)^j = (1 - (1 + kappa w))^j
    for (std::size_t k = 0; k <= j; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      power[j - k] += by_degree[j] * (sign * binomial(static_cast<int>(j), static_cast<int>(k)));
    }
  }
  return power;
}

std::vector<Complex> power_to_degree(const std::vector<Complex>& by_power) {
  std::vector<Complex> degree(by_power.size());
  for (std::size_t m = 1; m <= by_power.size(); ++m) {
    for (std::size_t j = 0; j < m; ++j) {
      degree[j] += by_power[m - 1] * binomial(static_cast<int>(m - 1), static_cast<int>(j));
    }
  }
  return degree;
}

struct RateGroup {
  Complex kappa;
  std::vector<Complex> coeffs;  // by degree or by power, depending on stage
};

ExponentialPolynomialKernel assemble(const std::vector<RateGroup>& groups, double sigma,
                                     Complex impulse = {}) {
  std::vector<KernelTerm> terms;
  for (const auto& g : groups) {
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
      terms.push_back({g.kappa, static_cast<int>(j), g.coeffs[j]});
    }
  }
  return ExponentialPolynomialKernel(std::move(terms), sigma, impulse);
}

bool same_rate(Complex a, Complex b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

ExponentialPolynomialKernel::ExponentialPolynomialKernel(std::vector<KernelTerm> terms, double sigma,
                                                         Complex impulse)
    : terms_(std::move(terms)), sigma_(sigma), impulse_(impulse) {
  if (!(sigma > 0.0)) throw InvalidArgument("kernel sigma must be positive");
  for (const auto& t : terms_) {
    if (t.degree < 0) throw InvalidArgument("kernel term degree must be non-negative");
    ComplexParam{t.kappa};
  }
}

Complex ExponentialPolynomialKernel::operator()(double u) const {
  if (u < 0.0) return {};
  Complex sum{};
  for (const auto& t : terms_) {
    const Complex x = -t.kappa * u;
    Complex power{1.0, 0.0};
    double factorial = 1.0;
    for (int k = 1; k <= t.degree; ++k) {
      power *= x;
      factorial *= k;
    }
    sum += t.coeff * std::exp(x) * power / factorial;
  }
  return sigma_ * sum;
}

double ExponentialPolynomialKernel::envelope(double u) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double factorial = 1.0;
    for (int k = 1; k <= t.degree; ++k) factorial *= k;
    sum += std::abs(t.coeff) * std::exp(-t.kappa.real() * u) *
           std::pow(std::abs(t.kappa) * u, t.degree) / factorial;
  }
  return sigma_ * sum;
}

double ExponentialPolynomialKernel::min_decay() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : terms_) m = std::min(m, t.kappa.real());
  return m;
}

ExponentialPolynomialKernel ExponentialPolynomialKernel::with_sigma(double sigma) const {
  return ExponentialPolynomialKernel(terms_, sigma, impulse_);
}

std::vector<Complex> partial_fraction_coefficients(const RootMultiplicitySet& roots) {
  std::vector<Complex> k(roots.roots.size());
  for (std::size_t h = 0; h < roots.roots.size(); ++h) {
    const Complex kh = roots.roots[h].kappa;
    Complex denom{1.0, 0.0};
    for (std::size_t l = 0; l < roots.roots.size(); ++l) {
      if (l == h) continue;
      const Complex kl = roots.roots[l].kappa;
      if (kl == kh) throw DegenerateRoots("repeated root " + format_complex(kh) + " not grouped");
      denom *= std::pow(1.0 - kl / kh, roots.roots[l].multiplicity);
    }
    k[h] = 1.0 / denom;
  }
  return k;
}

std::vector<std::vector<Complex>> partial_fraction_expansion(const RootMultiplicitySet& roots) {
  const auto leading = partial_fraction_coefficients(roots);
  std::vector<std::vector<Complex>> expansion(roots.roots.size());
  for (std::size_t h = 0; h < roots.roots.size(); ++h) {
    const Complex kh = roots.roots[h].kappa;
    const int ph = roots.roots[h].multiplicity;
    // Taylor coefficients in v = 1 + kappa_h w of prod_{l != h} (1 + kappa_l w)^{-p_l},
    // each factor being (1 - kappa_l/kappa_h)^{-p_l} (1 + r_l v)^{-p_l}.
    std::vector<Complex> series(static_cast<std::size_t>(ph));
    series[0] = leading[h];
    for (std::size_t l = 0; l < roots.roots.size(); ++l) {
      if (l == h) continue;
      const Complex kl = roots.roots[l].kappa;
      const int pl = roots.roots[l].multiplicity;
      const Complex r = kl / (kh - kl);
      std::vector<Complex> factor(series.size());
      Complex rpow{1.0, 0.0};
      for (std::size_t i = 0; i < factor.size(); ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        factor[i] = sign * binomial(pl + static_cast<int>(i) - 1, static_cast<int>(i)) * rpow;
        rpow *= r;
      }
      std::vector<Complex> product(series.size());
      for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t k = 0; k + i < series.size(); ++k) product[i + k] += series[i] * factor[k];
      }
      series = std::move(product);
    }
    // A_m is the coefficient of v^{p_h - m}.
    expansion[h].resize(static_cast<std::size_t>(ph));
    for (int m = 1; m <= ph; ++m) {
      expansion[h][static_cast<std::size_t>(m - 1)] = series[static_cast<std::size_t>(ph - m)];
    }
  }
  return expansion;
}

ExponentialPolynomialKernel kernel_from_roots(const RootMultiplicitySet& roots, double sigma) {
  const auto expansion = partial_fraction_expansion(roots);
  std::vector<RateGroup> groups;
  for (std::size_t h = 0; h < roots.roots.size(); ++h) {
    groups.push_back({roots.roots[h].kappa, power_to_degree(expansion[h])});
  }
  return assemble(groups, sigma);
}

ExponentialPolynomialKernel kernel_from_kappa(const KappaVector& kappa, double sigma, double tol) {
  return kernel_from_roots(group_roots(kappa.entries(), tol, ToleranceMode::Relative), sigma);
}

ExponentialPolynomialKernel kernel_from_model(const OuModel& model, double tol) {
  model.validate();
  return kernel_from_kappa(kappa_from_phi(model.phi), std::sqrt(model.sigma2), tol);
}

ExponentialPolynomialKernel identity_kernel(double sigma) {
  return ExponentialPolynomialKernel({}, sigma, Complex{1.0, 0.0});
}

ExponentialPolynomialKernel ou_kernel(Complex kappa, double sigma) {
  return ExponentialPolynomialKernel({{kappa, 0, Complex{1.0, 0.0}}}, sigma);
}

ExponentialPolynomialKernel compose_kernels(const ExponentialPolynomialKernel& kernel, Complex kappa,
                                            double tol) {
  ComplexParam{kappa};

  std::vector<RateGroup> groups;
  for (const auto& t : kernel.terms()) {
    auto it = std::ranges::find_if(groups, [&](const RateGroup& g) { return g.kappa == t.kappa; });
    if (it == groups.end()) {
      groups.push_back({t.kappa, {}});
      it = groups.end() - 1;
    }
    if (it->coeffs.size() <= static_cast<std::size_t>(t.degree)) {
      it->coeffs.resize(static_cast<std::size_t>(t.degree) + 1);
    }
    it->coeffs[static_cast<std::size_t>(t.degree)] += t.coeff;
  }
  for (auto& g : groups) g.coeffs = degree_to_power(g.coeffs);

  std::vector<Complex> new_rate;  // powers of (1 + kappa w)^{-1}
  auto add_new = [&](std::size_t m, Complex c) {
    if (new_rate.size() < m) new_rate.resize(m);
    new_rate[m - 1] += c;
  };
  add_new(1, kernel.impulse());

  std::vector<RateGroup> out;
  for (const auto& g : groups) {
    const Complex a = g.kappa;
    if (same_rate(a, kappa, tol)) {
      // Degree raising: P_m * P_1 = P_{m+1}.
      for (std::size_t m = 1; m <= g.coeffs.size(); ++m) add_new(m + 1, g.coeffs[m - 1]);
      continue;
    }
    // P_m^a P_1^b = alpha sum_{k<m} beta^k P_{m-k}^a + beta^m P_1^b.
    const Complex alpha = a / (a - kappa);
    const Complex beta = kappa / (kappa - a);
    std::vector<Complex> coeffs(g.coeffs.size());
    for (std::size_t m = 1; m <= g.coeffs.size(); ++m) {
      Complex bk{1.0, 0.0};
      for (std::size_t k = 0; k < m; ++k) {
        coeffs[m - k - 1] += g.coeffs[m - 1] * alpha * bk;
        bk *= beta;
      }
      add_new(1, g.coeffs[m - 1] * bk);
    }
    out.push_back({a, power_to_degree(coeffs)});
  }
  // Keep the rate already present in the kernel when degree raising applied.
  Complex merged_rate = kappa;
  for (const auto& g : groups) {
    if (same_rate(g.kappa, kappa, tol)) merged_rate = g.kappa;
  }
  out.push_back({merged_rate, power_to_degree(new_rate)});
  return assemble(out, kernel.sigma());
}

}  // namespace oup
