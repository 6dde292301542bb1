// Integer utilities and the divisibility strategy used to resolve
// ambiguous Fourier-mode readings.

#ifndef PIED_NUMTHEORY_HPP
#define PIED_NUMTHEORY_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pied::numtheory {

/// All positive divisors of n in increasing order.
struct DivisorList {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> divisors;

  /// Number of distinct divisors (2 for primes, 3 for squares of primes).
  std::size_t count() const noexcept { return divisors.size(); }
};

DivisorList divisors(std::uint64_t n);

bool is_prime(std::uint64_t n) noexcept;

/// Returns r when n == r*r, otherwise nothing.
std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) noexcept;

enum class Subinterval { I1, I2, I3, Endpoint };

enum class DivisibilityTest { DivBy2, DivBy3, SqrtTest };

std::string_view to_string(Subinterval s) noexcept;
std::string_view to_string(DivisibilityTest t) noexcept;

/// Real-valued semiprime thresholds for k = 2 and k = 3. Either may be
/// +infinity when the corresponding family cannot undercut the composite
/// bound for the dimension at hand.
struct Thresholds {
  double k2;
  double k3;
};

struct IntervalVerdict {
  std::int64_t n = 0;
  Subinterval subinterval = Subinterval::I1;
  std::vector<DivisibilityTest> required_tests;
};

/// Places n in [2, 2(d-1)] into one of the three threshold-delimited
/// subintervals (or the endpoint 2(d-1)) and lists the divisibility tests
/// that must be run there. Integers are compared against the real
/// thresholds without rounding.
IntervalVerdict classify_interval(std::int64_t n, std::int64_t d,
                                  const Thresholds& thresholds);

/// Runs the enabled tests in the fixed order (2, 3, sqrt) and returns the
/// first composite witness, or nothing. A witness is always a proper
/// divisor, so 2 and 3 never witness against themselves. SqrtTest fires
/// only for perfect squares; its witness is the integer root.
std::optional<std::uint64_t> run_divisibility_tests(
    std::uint64_t n, std::span<const DivisibilityTest> tests);

}  // namespace pied::numtheory

#endif  // PIED_NUMTHEORY_HPP
