#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "oup/polynomial.hpp"

namespace oup {

/// Default tolerance for merging numerically coincident roots, relative to
/// the root modulus.
inline constexpr double kDefaultGroupingTolerance = 1e-7;

/// Roots whose imaginary part is below this fraction of their modulus are
/// treated as real.
inline constexpr double kRealSnapTolerance = 1e-9;

/// A single rate kappa = lambda + i*mu of an OU operator; lambda > 0.
class ComplexParam {
 public:
  /// Throws StationarityViolation unless re > 0.
  explicit ComplexParam(Complex value);
  ComplexParam(double re, double im) : ComplexParam(Complex{re, im}) {}

  [[nodiscard]] Complex value() const noexcept { return value_; }
  [[nodiscard]] double re() const noexcept { return value_.real(); }
  [[nodiscard]] double im() const noexcept { return value_.imag(); }

 private:
  Complex value_;
};

/// The multiset of rates defining an OU(p) process. Entry order carries no
/// meaning.
class KappaVector {
 public:
  /// Throws StationarityViolation if any entry has a non-positive real part.
  explicit KappaVector(std::vector<Complex> entries);
  KappaVector(std::initializer_list<Complex> entries)
      : KappaVector(std::vector<Complex>(entries)) {}

  [[nodiscard]] std::size_t order() const noexcept { return entries_.size(); }
  [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
  [[nodiscard]] Complex operator[](std::size_t i) const { return entries_[i]; }

  /// True when the multiset equals its complex conjugate, i.e. the process
  /// is real.
  [[nodiscard]] bool is_conjugation_closed(double rel_tol = 1e-9) const;

  [[nodiscard]] double min_decay() const;

 private:
  std::vector<Complex> entries_;
};

/// User-facing real parameters: 1 - sum_j phi_j z^j = prod_j (1 + kappa_j z),
/// noise variance sigma2 and process mean mu.
struct OuModel {
  std::vector<double> phi;
  double sigma2 = 1.0;
  double mu = 0.0;

  [[nodiscard]] std::size_t order() const noexcept { return phi.size(); }
  /// Throws InvalidArgument on empty phi, non-positive or non-finite sigma2,
  /// or non-finite entries. Does not check stationarity.
  void validate() const;
};

struct RootGroup {
  Complex kappa;
  int multiplicity = 1;
};

/// Distinct roots with multiplicities; sum of multiplicities is p.
struct RootMultiplicitySet {
  std::vector<RootGroup> roots;

  [[nodiscard]] int order() const noexcept;
};

enum class ToleranceMode { Absolute, Relative };

/// Expands prod (1 + kappa_j z) and returns phi. Throws InvalidArgument if
/// kappa is not conjugation-closed (phi would not be real).
std::vector<double> phi_from_kappa(const KappaVector& kappa);

/// Recovers the rates from phi via the roots of 1 - sum phi_j z^j. Near-real
/// roots are snapped to the real axis and the rest paired with their nearest
/// conjugate. Throws StationarityViolation if any rate has Re <= 0.
KappaVector kappa_from_phi(std::span<const double> phi);

/// Same as kappa_from_phi without the admissibility check; rates may lie in
/// the closed left half-plane.
std::vector<Complex> rates_from_phi(std::span<const double> phi);

/// True when every rate recovered from phi lies strictly in the right
/// half-plane.
bool is_admissible(std::span<const double> phi) noexcept;

/// Merges rates closer than tol (complex modulus) into their
/// multiplicity-weighted centroid. With ToleranceMode::Relative the
/// threshold for a pair is tol * max(|a|, |b|).
RootMultiplicitySet group_roots(std::span<const Complex> kappa, double tol,
                                ToleranceMode mode = ToleranceMode::Absolute);

std::string format_complex(Complex z, int precision = 6);

}  // namespace oup
