// Analytic bounds on the Fourier modes and the three-region classifier.
//
// For the uniform state (c_j = 1/sqrt(d)):
//
//   B_n     = 8 (d - n)(d - 1) / d^4            prime value, 0 for n >= d
//   P_n     = B_n + 4 (d - sqrt(n))^2 / d^4      value at n = k^2, k prime
//   B_n^(k) = B_n + 8 (d - k)(d - n/k) / d^4     four-divisor family n = k*q
//
// Composite modes stay above P_n except for the families 2q and 3q beyond
// the real thresholds n_th(2) and n_th(3), where B_n^(k) crosses P_n.

#ifndef PIED_BOUNDS_HPP
#define PIED_BOUNDS_HPP

#include "pied/numtheory.hpp"
#include "pied/statesim.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace pied::bounds {

/// Prime bound for the uniform state; n may be off-lattice.
double b_uniform(double n, std::size_t d);

/// 8 * sum_{k=1}^{d-n} sum_{m=1}^{d-1} w_k w_m w_{k+n} w_{m+1} for any profile.
double b_general(const statesim::AmplitudeProfile& profile, int n);

/// Composite bound for the uniform state.
double p_uniform(double n, std::size_t d);

/// Analytic curve of the four-divisor family with nontrivial divisor k.
double bk_uniform(double n, double k, std::size_t d);

/// (d^4/4) (B_n^(k) - P_n) = d^2 + n - 2d(k + n/k) + 2d sqrt(n).
double delta(double n, double k, std::size_t d);

/// Location of the single interior maximum of delta in n.
double delta_maximum(double k, std::size_t d);

/// Rightmost root of delta in n from the explicit radical formula. Requires
/// 2 <= k < d/2; throws std::logic_error if the root check fails.
double n_threshold(double k, std::size_t d);

/// Roots in k of delta(2(d-1), k) = 0. Evaluated in rationalized form to
/// avoid cancellation at large d; k_minus tends to 4 from below.
double k_minus(double d);
double k_plus(double d);

/// Primes k <= k_minus(d) with k < d/2 whose threshold lies inside
/// [2, 2(d-1)). Always a subset of {2, 3}.
std::vector<int> k_admissible_set(std::size_t d);

struct BoundsTable {
  std::size_t d = 0;
  statesim::StateFamily family = statesim::StateFamily::Uniform;
  /// Indexed by n - 2 for n in [2, 2(d-1)].
  std::vector<double> b;
  /// Composite bound; empty unless the profile is uniform.
  std::vector<double> p;
  std::vector<double> b2;
  std::vector<double> b3;
  double n_th2 = 0.0;
  double n_th3 = 0.0;
  std::vector<int> k_set;

  bool has_composite_bound() const noexcept { return !p.empty(); }
  double b_at(int n) const { return b.at(index(n)); }
  double p_at(int n) const { return p.at(index(n)); }
  numtheory::Thresholds thresholds() const { return {n_th2, n_th3}; }

 private:
  std::size_t index(int n) const;
};

/// Full table for the uniform state.
BoundsTable uniform_table(std::size_t d);

/// B_n for an arbitrary profile. The composite bound and thresholds are
/// only derived for the uniform state and are left empty/infinite here,
/// unless the profile is uniform.
BoundsTable profile_table(const statesim::AmplitudeProfile& profile);

enum class Label { Prime, Composite, ProbablePrime };
enum class Evidence { BelowB, AboveP, WitnessFound, NoWitness };
enum class Region { Green, LightBlue, Purple };

std::string_view to_string(Label l) noexcept;
std::string_view to_string(Evidence e) noexcept;
std::string_view to_string(Region r) noexcept;
Label parse_label(std::string_view s);
Evidence parse_evidence(std::string_view s);
Region parse_region(std::string_view s);

struct Verdict {
  int n = 0;
  Label label = Label::ProbablePrime;
  Evidence evidence = Evidence::NoWitness;
  std::optional<std::uint64_t> witness;
  Region region = Region::LightBlue;
  numtheory::Subinterval subinterval = numtheory::Subinterval::I1;

  /// Prime and ProbablePrime both count as a prime call.
  bool says_prime() const noexcept { return label != Label::Composite; }
};

constexpr double kDefaultTolerance = 0.05;

/// Below B_n(1 - tol): Green/Prime. Above P_n(1 + tol): Purple/Composite.
/// Otherwise LightBlue, resolved by the divisibility tests of n's
/// subinterval. Requires a table with a composite bound.
Verdict classify(int n, double alpha, const BoundsTable& table,
                 double tolerance = kDefaultTolerance);

}  // namespace pied::bounds

#endif  // PIED_BOUNDS_HPP
