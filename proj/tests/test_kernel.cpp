#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "oup/errors.hpp"
#include "oup/kernel.hpp"

namespace oup {
namespace {

// Multiset equality of kernel terms up to tolerance on coefficients.
void expect_same_terms(const ExponentialPolynomialKernel& a, const ExponentialPolynomialKernel& b,
                       double tol) {
  auto significant = [](const ExponentialPolynomialKernel& k) {
    std::vector<KernelTerm> out;
    for (const auto& t : k.terms()) {
      if (std::abs(t.coeff) > 1e-14) out.push_back(t);
    }
    return out;
  };
  const auto ta = significant(a);
  auto tb = significant(b);
  ASSERT_EQ(ta.size(), tb.size());
  for (const auto& t : ta) {
    auto it = std::ranges::find_if(tb, [&](const KernelTerm& u) {
      return u.degree == t.degree && std::abs(u.kappa - t.kappa) <= 1e-9 * std::abs(t.kappa);
    });
    ASSERT_NE(it, tb.end()) << "missing term kappa=" << t.kappa << " degree=" << t.degree;
    EXPECT_NEAR(std::abs(it->coeff - t.coeff), 0.0, tol * std::max(1.0, std::abs(t.coeff)));
    tb.erase(it);
  }
}

TEST(PartialFractionCoefficients, SingleRootIsOne) {
  const RootMultiplicitySet r{{{Complex{0.7, 0.0}, 3}}};
  const auto k = partial_fraction_coefficients(r);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], Complex(1.0, 0.0));
}

TEST(PartialFractionCoefficients, TwoDistinctRealRates) {
  const double l1 = 0.5, l2 = 1.7;
  const RootMultiplicitySet r{{{Complex{l1, 0.0}, 1}, {Complex{l2, 0.0}, 1}}};
  const auto k = partial_fraction_coefficients(r);
  EXPECT_NEAR(std::abs(k[0] - 1.0 / (1.0 - l2 / l1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k[1] - 1.0 / (1.0 - l1 / l2)), 0.0, 1e-15);
  // the same numbers as kappa1/(kappa1 - kappa2), kappa2/(kappa2 - kappa1)
  EXPECT_NEAR(k[0].real(), l1 / (l1 - l2), 1e-15);
  EXPECT_NEAR(k[1].real(), l2 / (l2 - l1), 1e-15);
}

TEST(PartialFractionCoefficients, AgreeWithCollocatedExpansion) {
  const std::vector<Complex> kappa{{0.9, 0.0}, {0.2, 0.4}, {0.2, -0.4}};
  RootMultiplicitySet r;
  for (const auto& z : kappa) r.roots.push_back({z, 1});
  const auto direct = partial_fraction_coefficients(r);
  const auto oracle = testing::collocated_partial_fractions(kappa);
  for (std::size_t h = 0; h < kappa.size(); ++h) {
    EXPECT_NEAR(std::abs(direct[h] - oracle[h]), 0.0, 1e-12) << h;
  }
}

TEST(PartialFractionCoefficients, DegenerateRootsRejected) {
  const RootMultiplicitySet r{{{Complex{1.0, 0.0}, 1}, {Complex{1.0, 0.0}, 1}}};
  EXPECT_THROW(partial_fraction_coefficients(r), DegenerateRoots);
}

TEST(PartialFractionExpansion, LeadingCoefficientIsK) {
  const RootMultiplicitySet r{{{Complex{1.0, 0.0}, 2}, {Complex{2.0, 0.0}, 1}}};
  const auto k = partial_fraction_coefficients(r);
  const auto a = partial_fraction_expansion(r);
  EXPECT_NEAR(std::abs(a[0][1] - k[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[1][0] - k[1]), 0.0, 1e-15);
  // 1/((1+w)^2 (1+2w)) = -2/(1+w) + -1/(1+w)^2 + 4/(1+2w)
  EXPECT_NEAR(std::abs(a[0][0] - Complex(-2.0, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a[0][1] - Complex(-1.0, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(a[1][0] - Complex(4.0, 0.0)), 0.0, 1e-14);
}

TEST(KernelFromModel, OrderOne) {
  const OuModel m{{-0.8}, 2.25, 0.0};
  const auto k = kernel_from_model(m);
  ASSERT_EQ(k.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(k.sigma(), 1.5);
  EXPECT_NEAR(std::abs(k(1.3) - 1.5 * std::exp(-0.8 * 1.3)), 0.0, 1e-15);
}

TEST(KernelFromModel, RepeatedRootOfOrderTwo) {
  const double kappa = 0.84;
  const OuModel m{phi_from_kappa(KappaVector{{kappa, 0.0}, {kappa, 0.0}}), 1.0, 0.0};
  const auto k = kernel_from_model(m);
  ASSERT_EQ(k.terms().size(), 2u);
  for (const auto& t : k.terms()) EXPECT_NEAR(std::abs(t.coeff - 1.0), 0.0, 1e-6);
  for (double u : {0.0, 0.4, 1.0, 3.0}) {
    EXPECT_NEAR(k(u).real(), std::exp(-kappa * u) * (1.0 - kappa * u), 1e-6) << u;
  }
}

TEST(KernelFromModel, RepeatedRootIsLimitOfDistinctRoots) {
  const double kappa = 1.3;
  const auto repeated = kernel_from_kappa(KappaVector{{kappa, 0.0}, {kappa, 0.0}}, 1.0);
  for (double delta : {1e-3, 1e-4}) {
    const auto near = kernel_from_kappa(KappaVector{{kappa, 0.0}, {kappa + delta, 0.0}}, 1.0);
    for (double u : {0.0, 0.5, 2.0}) {
      EXPECT_NEAR(std::abs(near(u) - repeated(u)), 0.0, 2.0 * delta) << delta << " " << u;
    }
  }
}

TEST(KernelFromModel, ConjugatePairIsReal) {
  const double l = 0.3, mu = 1.1;
  const auto k = kernel_from_kappa(KappaVector{{l, mu}, {l, -mu}}, 1.0);
  for (double u = 0.0; u <= 20.0; u += 0.25) {
    const Complex f = k(u);
    EXPECT_NEAR(f.imag(), 0.0, 1e-14);
    EXPECT_NEAR(f.real(), std::exp(-l * u) * (std::cos(mu * u) - l / mu * std::sin(mu * u)), 1e-13);
  }
}

TEST(KernelFromModel, InadmissiblePhiPropagates) {
  EXPECT_THROW(kernel_from_model(OuModel{{2.0}, 1.0, 0.0}), StationarityViolation);
}

TEST(KernelFromModel, RealForConjugationClosedRates) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rates = testing::random_rates(rng, 1 + trial % 6);
    const auto k = kernel_from_kappa(KappaVector(rates), 1.0);
    double max_f = 0.0, max_im = 0.0;
    for (double u = 0.0; u <= 20.0; u += 0.05) {
      const Complex f = k(u);
      max_f = std::max(max_f, std::abs(f));
      max_im = std::max(max_im, std::abs(f.imag()));
    }
    EXPECT_LT(max_im, 1e-10 * max_f) << "trial " << trial;
  }
}

TEST(ComposeKernels, TwoDistinctRatesMatchConvolution) {
  const Complex a{0.6, 0.0}, b{1.9, 0.0};
  const auto composed = compose_kernels(compose_kernels(identity_kernel(), a), b);
  for (double u : {0.0, 0.2, 1.0, 2.5, 6.0}) {
    const Complex oracle = testing::two_stage_kernel_by_convolution(a, b, u);
    EXPECT_NEAR(std::abs(composed(u) - oracle), 0.0, 1e-10) << u;
  }
  expect_same_terms(composed, kernel_from_kappa(KappaVector{a, b}, 1.0), 1e-12);
}

TEST(ComposeKernels, ComplexRatesMatchConvolution) {
  const Complex a{0.2, 0.4}, b{0.2, -0.4};
  const auto composed = compose_kernels(compose_kernels(identity_kernel(), a), b);
  for (double u : {0.3, 1.7, 4.0}) {
    EXPECT_NEAR(std::abs(composed(u) - testing::two_stage_kernel_by_convolution(a, b, u)), 0.0, 1e-10);
  }
}

TEST(ComposeKernels, PowerOfOneRateIsBinomialExpansion) {
  const Complex k{0.7, 0.0};
  auto composed = identity_kernel();
  for (int p = 1; p <= 5; ++p) {
    composed = compose_kernels(composed, k);
    // OU^p = sum_j C(p-1, j) OU^{(j)}
    double binom = 1.0;
    for (int j = 0; j < p; ++j) {
      auto it = std::ranges::find_if(composed.terms(), [&](const KernelTerm& t) { return t.degree == j; });
      ASSERT_NE(it, composed.terms().end());
      EXPECT_NEAR(std::abs(it->coeff - binom), 0.0, 1e-12) << "p=" << p << " j=" << j;
      binom = binom * (p - 1 - j) / (j + 1);
    }
    expect_same_terms(composed, kernel_from_roots(RootMultiplicitySet{{{k, p}}}, 1.0), 1e-12);
  }
}

TEST(ComposeKernels, Commutative) {
  const Complex a{0.4, 0.0}, b{1.2, 0.0}, c{0.3, 0.9};
  const auto ab = compose_kernels(compose_kernels(ou_kernel(a), b), c);
  const auto ba = compose_kernels(compose_kernels(ou_kernel(c), b), a);
  expect_same_terms(ab, ba, 1e-12);
}

TEST(ComposeKernels, AssociativeGrouping) {
  // ((a b) c) d vs a ((b c) d) realized by different composition orders
  const std::vector<Complex> rates{{0.4, 0.0}, {1.2, 0.0}, {0.4, 0.0}, {2.0, 0.0}};
  auto left = identity_kernel();
  for (const auto& r : rates) left = compose_kernels(left, r);
  auto right = identity_kernel();
  for (auto it = rates.rbegin(); it != rates.rend(); ++it) right = compose_kernels(right, *it);
  expect_same_terms(left, right, 1e-12);
}

TEST(ComposeKernels, MatchesKernelFromModelWithMixedMultiplicities) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rates = testing::random_rates(rng, 1 + trial % 6);
    auto composed = identity_kernel();
    for (const auto& r : rates) composed = compose_kernels(composed, r, 1e-12);
    const auto direct = kernel_from_kappa(KappaVector(rates), 1.0);
    // unit total weight at u = 0 for every product of OU operators
    EXPECT_NEAR(std::abs(direct(0.0) - 1.0), 0.0, 1e-10) << "trial " << trial;
    EXPECT_NEAR(std::abs(direct(0.0) - composed(0.0)), 0.0, 1e-10) << "trial " << trial;
    for (double u : {0.3, 1.0, 4.0}) {
      EXPECT_NEAR(std::abs(direct(u) - composed(u)), 0.0, 1e-9) << "trial " << trial << " u=" << u;
    }
  }
}

TEST(KernelFromModel, SigmaAppliedAtEvaluation) {
  const auto unit = kernel_from_kappa(KappaVector{{0.5, 0.0}, {1.5, 0.0}}, 1.0);
  const auto scaled = unit.with_sigma(3.0);
  for (std::size_t i = 0; i < unit.terms().size(); ++i) {
    EXPECT_EQ(unit.terms()[i].coeff, scaled.terms()[i].coeff);
  }
  EXPECT_NEAR(std::abs(scaled(0.7) - 3.0 * unit(0.7)), 0.0, 1e-15);
}

}  // namespace
}  // namespace oup
