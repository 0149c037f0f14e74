#include "oup/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "oup/errors.hpp"

namespace oup {

namespace {

// Greedy matching of each entry with its nearest conjugate partner. Returns
// partner indices, or -1 where no partner within tol exists.
std::vector<int> match_conjugates(std::span<const Complex> z, double rel_tol) {
  std::vector<int> partner(z.size(), -1);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (partner[i] >= 0) continue;
    const double scale = std::max(1.0, std::abs(z[i]));
    if (std::abs(z[i].imag()) <= rel_tol * scale) {
      partner[i] = static_cast<int>(i);
      continue;
    }
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == i || partner[j] >= 0) continue;
      const double d = std::abs(z[j] - std::conj(z[i]));
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(j);
      }
    }
    if (best >= 0 && best_dist <= rel_tol * scale) {
      partner[i] = best;
      partner[static_cast<std::size_t>(best)] = static_cast<int>(i);
    }
  }
  return partner;
}

}  // namespace

ComplexParam::ComplexParam(Complex value) : value_(value) {
  if (!(value.real() > 0.0) || !std::isfinite(value.imag())) {
    throw StationarityViolation("rate " + format_complex(value) +
                                " is outside the open right half-plane");
  }
}

KappaVector::KappaVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InvalidArgument("kappa vector must have at least one entry");
  for (const Complex& k : entries_) ComplexParam{k};
}

bool KappaVector::is_conjugation_closed(double rel_tol) const {
  const auto partner = match_conjugates(entries_, rel_tol);
  return std::ranges::all_of(partner, [](int j) { return j >= 0; });
}

double KappaVector::min_decay() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Complex& k : entries_) m = std::min(m, k.real());
  return m;
}

void OuModel::validate() const {
  if (phi.empty()) throw InvalidArgument("model order must be at least 1");
  for (double v : phi) {
    if (!std::isfinite(v)) throw InvalidArgument("phi contains a non-finite value");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("sigma2 must be positive and finite");
  }
  if (!std::isfinite(mu)) throw InvalidArgument("mu must be finite");
}

int RootMultiplicitySet::order() const noexcept {
  int p = 0;
  for (const auto& r : roots) p += r.multiplicity;
  return p;
}

std::vector<double> phi_from_kappa(const KappaVector& kappa) {
  if (!kappa.is_conjugation_closed()) {
    throw InvalidArgument("kappa is not closed under conjugation; phi would be complex");
  }
  const auto poly = expand_linear_factors(kappa.entries());
  std::vector<double> phi(kappa.order());
  for (std::size_t j = 1; j < poly.size(); ++j) phi[j - 1] = -poly[j].real();
  return phi;
}

std::vector<Complex> rates_from_phi(std::span<const double> phi) {
  if (phi.empty()) throw InvalidArgument("phi must have at least one entry");
  // prod (y + kappa_j) = y^p - phi_1 y^(p-1) - ... - phi_p, so kappa = -root.
  std::vector<double> monic(phi.size());
  std::ranges::transform(phi, monic.begin(), [](double v) { return -v; });
  auto roots = monic_polynomial_roots(monic);

  std::vector<Complex> kappa(roots.size());
  std::ranges::transform(roots, kappa.begin(), [](Complex y) { return -y; });

  std::vector<bool> is_complex(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (std::abs(kappa[i].imag()) < kRealSnapTolerance * std::abs(kappa[i])) {
      kappa[i] = Complex{kappa[i].real(), 0.0};
    } else {
      is_complex[i] = true;
    }
  }
  std::vector<bool> paired(kappa.size());
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (!is_complex[i] || paired[i]) continue;
    std::size_t best = i;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1; j < kappa.size(); ++j) {
      if (!is_complex[j] || paired[j]) continue;
      const double d = std::abs(kappa[j] - std::conj(kappa[i]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    paired[i] = true;
    if (best == i) {
      kappa[i] = Complex{kappa[i].real(), 0.0};
      continue;
    }
    paired[best] = true;
    const Complex mid = 0.5 * (kappa[i] + std::conj(kappa[best]));
    const Complex upper{mid.real(), std::abs(mid.imag())};
    kappa[i] = upper;
    kappa[best] = std::conj(upper);
  }
  return kappa;
}

KappaVector kappa_from_phi(std::span<const double> phi) {
  auto kappa = rates_from_phi(phi);
  for (const Complex& k : kappa) {
    if (!(k.real() > 0.0)) {
      throw StationarityViolation("phi is not admissible: recovered rate " + format_complex(k) +
                                  " has non-positive real part");
    }
  }
  return KappaVector(std::move(kappa));
}

bool is_admissible(std::span<const double> phi) noexcept {
  try {
    for (double v : phi) {
      if (!std::isfinite(v)) return false;
    }
    const auto kappa = rates_from_phi(phi);
    return std::ranges::all_of(kappa, [](Complex k) { return k.real() > 0.0; });
  } catch (...) {
    return false;
  }
}

RootMultiplicitySet group_roots(std::span<const Complex> kappa, double tol, ToleranceMode mode) {
  if (!(tol > 0.0)) throw InvalidArgument("grouping tolerance must be positive");

  RootMultiplicitySet set;
  for (const Complex& k : kappa) set.roots.push_back({k, 1});

  auto close = [&](Complex a, Complex b) {
    const double threshold =
        mode == ToleranceMode::Absolute ? tol : tol * std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= threshold;
  };

  // Merge the closest eligible pair until none remains; centroids may move
  // into range of a third root, hence the outer loop.
  for (;;) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.roots.size(); ++i) {
      for (std::size_t j = i + 1; j < set.roots.size(); ++j) {
        const auto& a = set.roots[i];
        const auto& b = set.roots[j];
        if (!close(a.kappa, b.kappa)) continue;
        const double d = std::abs(a.kappa - b.kappa);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (!std::isfinite(best)) break;
    auto& a = set.roots[bi];
    const auto& b = set.roots[bj];
    const int m = a.multiplicity + b.multiplicity;
    a.kappa = (static_cast<double>(a.multiplicity) * a.kappa +
               static_cast<double>(b.multiplicity) * b.kappa) /
              static_cast<double>(m);
    a.multiplicity = m;
    set.roots.erase(set.roots.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return set;
}

std::string format_complex(Complex z, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace oup
