#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "oup/errors.hpp"
#include "oup/kappa.hpp"

namespace oup {
namespace {

using testing::elementary_symmetric;

TEST(ComplexParam, RejectsClosedLeftHalfPlane) {
  EXPECT_NO_THROW(ComplexParam(0.1, -3.0));
  EXPECT_THROW(ComplexParam(0.0, 1.0), StationarityViolation);
  EXPECT_THROW(ComplexParam(-1.0, 0.0), StationarityViolation);
  EXPECT_THROW(KappaVector({Complex{1.0, 0.0}, Complex{-0.5, 0.0}}), StationarityViolation);
}

TEST(PhiFromKappa, ExampleOneParameters) {
  const KappaVector kappa{{0.9, 0.0}, {0.2, 0.4}, {0.2, -0.4}};
  const auto phi = phi_from_kappa(kappa);
  ASSERT_EQ(phi.size(), 3u);
  EXPECT_NEAR(phi[0], -1.30, 1e-12);
  EXPECT_NEAR(phi[1], -0.56, 1e-12);
  EXPECT_NEAR(phi[2], -0.18, 1e-12);
}

TEST(PhiFromKappa, OrderOne) {
  const auto phi = phi_from_kappa(KappaVector{{0.7, 0.0}});
  ASSERT_EQ(phi.size(), 1u);
  EXPECT_DOUBLE_EQ(phi[0], -0.7);
}

TEST(PhiFromKappa, MatchesSubsetEnumeration) {
  const std::vector<Complex> z{{0.04, 0.0}, {0.21, 0.0}, {1.87, 0.0}};
  const auto e = elementary_symmetric(z);
  const auto phi = phi_from_kappa(KappaVector(z));
  for (std::size_t j = 1; j <= 3; ++j) EXPECT_NEAR(phi[j - 1], -e[j].real(), 1e-15);
  EXPECT_NEAR(phi[0], -2.12, 1e-14);
  EXPECT_NEAR(phi[1], -(0.04 * 0.21 + 0.04 * 1.87 + 0.21 * 1.87), 1e-14);
  EXPECT_NEAR(phi[2], -0.04 * 0.21 * 1.87, 1e-15);
}

TEST(PhiFromKappa, RejectsNonConjugateSet) {
  EXPECT_THROW(phi_from_kappa(KappaVector{{1.0, 0.5}}), InvalidArgument);
}

TEST(KappaFromPhi, ExampleOneInverted) {
  const std::vector<double> phi{-1.30, -0.56, -0.18};
  const auto kappa = kappa_from_phi(phi);
  std::vector<Complex> k(kappa.entries().begin(), kappa.entries().end());
  std::ranges::sort(k, [](Complex a, Complex b) {
    return std::make_pair(a.real(), a.imag()) < std::make_pair(b.real(), b.imag());
  });
  EXPECT_NEAR(std::abs(k[0] - Complex(0.2, -0.4)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(k[1] - Complex(0.2, 0.4)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(k[2] - Complex(0.9, 0.0)), 0.0, 1e-12);
  // exact conjugate symmetry after pairing
  EXPECT_EQ(k[0], std::conj(k[1]));
}

TEST(KappaFromPhi, OrderOneAndSignCase) {
  const std::vector<double> one{-2.5};
  EXPECT_NEAR(kappa_from_phi(one)[0].real(), 2.5, 1e-15);
  const std::vector<double> bad{2.0};
  EXPECT_THROW(kappa_from_phi(bad), StationarityViolation);
  EXPECT_FALSE(is_admissible(bad));
}

TEST(KappaFromPhi, RoundTripRandomAdmissible) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> order(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int p = order(rng);
    const auto rates = testing::random_rates(rng, p, /*allow_repeats=*/false);
    const auto phi = phi_from_kappa(KappaVector(rates));
    const auto back = phi_from_kappa(kappa_from_phi(phi));
    double err = 0.0;
    for (int j = 0; j < p; ++j) err = std::max(err, std::abs(back[j] - phi[j]));
    ASSERT_LT(err, 1e-8) << "trial " << trial << " p=" << p;
  }
}

TEST(KappaFromPhi, RecoveredVectorIsConjugationClosed) {
  const std::vector<double> phi{-1.0, -0.9, -0.4, -0.08};
  EXPECT_TRUE(kappa_from_phi(phi).is_conjugation_closed(0.0));
}

TEST(GroupRoots, RepeatedRealRoot) {
  const std::vector<Complex> k{{0.84, 0.0}, {0.84, 0.0}};
  const auto g = group_roots(k, 1e-8);
  ASSERT_EQ(g.roots.size(), 1u);
  EXPECT_EQ(g.roots[0].multiplicity, 2);
  EXPECT_DOUBLE_EQ(g.roots[0].kappa.real(), 0.84);
}

TEST(GroupRoots, DistinctRootsStaySeparate) {
  const std::vector<Complex> k{{0.9, 0.0}, {0.2, 0.4}, {0.2, -0.4}};
  const auto g = group_roots(k, 1e-8);
  ASSERT_EQ(g.roots.size(), 3u);
  for (const auto& r : g.roots) EXPECT_EQ(r.multiplicity, 1);
  EXPECT_EQ(g.order(), 3);
}

TEST(GroupRoots, NearlyCoincidentMergeToCentroid) {
  const std::vector<Complex> k{{1.0, 0.0}, {1.0 + 1e-12, 0.0}};
  const auto g = group_roots(k, 1e-8);
  ASSERT_EQ(g.roots.size(), 1u);
  EXPECT_EQ(g.roots[0].multiplicity, 2);
  EXPECT_NEAR(g.roots[0].kappa.real(), 1.0 + 0.5e-12, 1e-15);
}

TEST(GroupRoots, OutputSeparatedByMoreThanTolerance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Complex> k;
    for (int i = 0; i < 8; ++i) k.emplace_back(1.0 + 0.01 * u(rng), 0.01 * u(rng));
    const auto g = group_roots(k, 2e-3);
    EXPECT_EQ(g.order(), 8);
    for (std::size_t i = 0; i < g.roots.size(); ++i) {
      for (std::size_t j = i + 1; j < g.roots.size(); ++j) {
        EXPECT_GT(std::abs(g.roots[i].kappa - g.roots[j].kappa), 2e-3);
      }
    }
  }
}

TEST(GroupRoots, RelativeModeScalesWithModulus) {
  const std::vector<Complex> k{{1000.0, 0.0}, {1000.00005, 0.0}};
  EXPECT_EQ(group_roots(k, 1e-7).roots.size(), 2u);
  EXPECT_EQ(group_roots(k, 1e-7, ToleranceMode::Relative).roots.size(), 1u);
}

TEST(OuModel, Validate) {
  EXPECT_NO_THROW((OuModel{{-1.0}, 1.0, 0.0}.validate()));
  EXPECT_THROW((OuModel{{}, 1.0, 0.0}.validate()), InvalidArgument);
  EXPECT_THROW((OuModel{{-1.0}, 0.0, 0.0}.validate()), InvalidArgument);
}

}  // namespace
}  // namespace oup
