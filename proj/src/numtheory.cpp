#include "pied/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pied::numtheory {

DivisorList divisors(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("divisors: n must be positive");
  }
  std::vector<std::uint64_t> low;
  std::vector<std::uint64_t> high;
  for (std::uint64_t i = 1; i <= n / i; ++i) {
    if (n % i == 0) {
      low.push_back(i);
      if (i != n / i) {
        high.push_back(n / i);
      }
    }
  }
  low.insert(low.end(), high.rbegin(), high.rend());
  return DivisorList{n, std::move(low)};
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) {
    return false;
  }
  if (n < 4) {
    return true;
  }
  if (n % 2 == 0 || n % 3 == 0) {
    return false;
  }
  for (std::uint64_t i = 5; i <= n / i; i += 6) {
    if (n % i == 0 || n % (i + 2) == 0) {
      return false;
    }
  }
  return true;
}

std::optional<std::uint64_t> exact_sqrt(std::uint64_t n) noexcept {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  // std::sqrt can be off by one for large n
  while (r > 0 && r > n / r) {
    --r;
  }
  while ((r + 1) <= n / (r + 1)) {
    ++r;
  }
  if (r * r == n) {
    return r;
  }
  return std::nullopt;
}

std::string_view to_string(Subinterval s) noexcept {
  switch (s) {
    case Subinterval::I1: return "I1";
    case Subinterval::I2: return "I2";
    case Subinterval::I3: return "I3";
    case Subinterval::Endpoint: return "Endpoint";
  }
  return "?";
}

std::string_view to_string(DivisibilityTest t) noexcept {
  switch (t) {
    case DivisibilityTest::DivBy2: return "DivBy2";
    case DivisibilityTest::DivBy3: return "DivBy3";
    case DivisibilityTest::SqrtTest: return "SqrtTest";
  }
  return "?";
}

IntervalVerdict classify_interval(std::int64_t n, std::int64_t d,
                                  const Thresholds& thresholds) {
  if (d < 2) {
    throw std::invalid_argument("classify_interval: dimension must be >= 2");
  }
  const std::int64_t top = 2 * (d - 1);
  if (n < 2 || n > top) {
    throw std::out_of_range("classify_interval: n = " + std::to_string(n) +
                            " outside [2, " + std::to_string(top) + "]");
  }
  if (thresholds.k2 > thresholds.k3) {
    throw std::invalid_argument(
        "classify_interval: thresholds must satisfy n_th(2) <= n_th(3)");
  }

  using enum DivisibilityTest;
  const auto x = static_cast<double>(n);
  IntervalVerdict v;
  v.n = n;
  if (n == top) {
    v.subinterval = Subinterval::Endpoint;
    v.required_tests = {SqrtTest, DivBy2, DivBy3};
  } else if (x < thresholds.k2) {
    v.subinterval = Subinterval::I1;
    v.required_tests = {SqrtTest};
  } else if (x < thresholds.k3) {
    v.subinterval = Subinterval::I2;
    v.required_tests = {SqrtTest, DivBy2};
  } else {
    v.subinterval = Subinterval::I3;
    v.required_tests = {SqrtTest, DivBy2, DivBy3};
  }
  return v;
}

std::optional<std::uint64_t> run_divisibility_tests(
    std::uint64_t n, std::span<const DivisibilityTest> tests) {
  if (tests.empty()) {
    throw std::invalid_argument("run_divisibility_tests: no tests given");
  }
  auto enabled = [&](DivisibilityTest t) {
    return std::find(tests.begin(), tests.end(), t) != tests.end();
  };
  if (enabled(DivisibilityTest::DivBy2) && n > 2 && n % 2 == 0) {
    return 2;
  }
  if (enabled(DivisibilityTest::DivBy3) && n > 3 && n % 3 == 0) {
    return 3;
  }
  if (enabled(DivisibilityTest::SqrtTest) && n > 1) {
    return exact_sqrt(n);
  }
  return std::nullopt;
}

}  // namespace pied::numtheory
