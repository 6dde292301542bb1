#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pied/numtheory.hpp"

#include <array>
#include <limits>
#include <stdexcept>

using namespace pied::numtheory;

TEST_CASE("divisors match trial division up to 2000") {
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    REQUIRE(divisors(n).divisors == oracle::divisors(n));
  }
  CHECK(divisors(12).divisors == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(7).count() == 2);
  CHECK(divisors(49).count() == 3);
  CHECK_THROWS_AS(divisors(0), std::invalid_argument);
}

TEST_CASE("is_prime agrees with a sieve") {
  const auto prime = oracle::sieve(100000);
  for (std::uint64_t n = 0; n <= 100000; ++n) {
    REQUIRE(is_prime(n) == prime[n]);
  }
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
  CHECK_FALSE(is_prime(4294967297ULL));     // 641 * 6700417
}

TEST_CASE("exact_sqrt") {
  CHECK(exact_sqrt(0) == 0u);
  CHECK(exact_sqrt(1) == 1u);
  CHECK(exact_sqrt(49) == 7u);
  CHECK_FALSE(exact_sqrt(50).has_value());
  CHECK(exact_sqrt(4294967296ULL) == 65536u);
  CHECK_FALSE(exact_sqrt(std::numeric_limits<std::uint64_t>::max()).has_value());
}

TEST_CASE("subintervals for d = 64") {
  const Thresholds th{79.0123456790, 123.18};
  auto v = classify_interval(74, 64, th);
  CHECK(v.subinterval == Subinterval::I1);
  CHECK(v.required_tests == std::vector<DivisibilityTest>{DivisibilityTest::SqrtTest});

  v = classify_interval(80, 64, th);
  CHECK(v.subinterval == Subinterval::I2);
  CHECK(v.required_tests ==
        std::vector<DivisibilityTest>{DivisibilityTest::SqrtTest, DivisibilityTest::DivBy2});

  v = classify_interval(124, 64, th);
  CHECK(v.subinterval == Subinterval::I3);
  CHECK(v.required_tests.size() == 3);

  v = classify_interval(126, 64, th);
  CHECK(v.subinterval == Subinterval::Endpoint);
  CHECK(v.required_tests.size() == 3);

  // integers are compared against the unrounded threshold
  CHECK(classify_interval(79, 64, th).subinterval == Subinterval::I1);
}

TEST_CASE("subinterval argument checks") {
  const Thresholds th{10.0, 12.0};
  CHECK_THROWS_AS(classify_interval(1, 8, th), std::out_of_range);
  CHECK_THROWS_AS(classify_interval(15, 8, th), std::out_of_range);
  CHECK_THROWS(classify_interval(5, 8, Thresholds{12.0, 10.0}));
  const Thresholds none{std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
  CHECK(classify_interval(13, 8, none).subinterval == Subinterval::I1);
  CHECK(classify_interval(14, 8, none).subinterval == Subinterval::Endpoint);
}

TEST_CASE("divisibility tests return proper divisors") {
  const std::array all{DivisibilityTest::DivBy2, DivisibilityTest::DivBy3,
                       DivisibilityTest::SqrtTest};
  CHECK(run_divisibility_tests(74, all) == 2u);
  CHECK(run_divisibility_tests(45, all) == 3u);
  CHECK(run_divisibility_tests(49, all) == 7u);
  CHECK_FALSE(run_divisibility_tests(2, all).has_value());
  CHECK_FALSE(run_divisibility_tests(3, all).has_value());
  CHECK_FALSE(run_divisibility_tests(1, all).has_value());
  CHECK_FALSE(run_divisibility_tests(35, all).has_value());

  const std::array sqrt_only{DivisibilityTest::SqrtTest};
  CHECK_FALSE(run_divisibility_tests(74, sqrt_only).has_value());
  CHECK(run_divisibility_tests(4, sqrt_only) == 2u);
  CHECK_THROWS(run_divisibility_tests(4, std::span<const DivisibilityTest>{}));
}

TEST_CASE("names") {
  CHECK(to_string(Subinterval::Endpoint) == "Endpoint");
  CHECK(to_string(DivisibilityTest::SqrtTest) == "SqrtTest");
}
