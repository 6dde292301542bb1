#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pied/bounds.hpp"
#include "pied/spectral.hpp"

#include <cmath>
#include <stdexcept>

using namespace pied;
using namespace pied::bounds;

TEST_CASE("uniform prime bound") {
  CHECK(b_uniform(2, 4) == doctest::Approx(8.0 * 2 * 3 / 256.0));
  CHECK(b_uniform(4, 4) == 0.0);
  CHECK(b_uniform(10, 4) == 0.0);
  CHECK_THROWS(b_uniform(1, 4));
  const auto u = statesim::prepare_uniform(16);
  for (int n = 2; n <= 30; ++n) {
    CHECK(std::abs(b_general(u, n) - b_uniform(n, 16)) < 1e-15);
  }
}

TEST_CASE("prime modes sit on B, composite modes above it") {
  for (std::size_t d : {4u, 8u, 16u, 32u}) {
    const auto u = statesim::prepare_uniform(d);
    const std::vector<double> c(u.amplitudes().begin(), u.amplitudes().end());
    const auto prime = oracle::sieve(2 * d);
    for (int n = 2; n <= static_cast<int>(2 * (d - 1)); ++n) {
      const double alpha = oracle::alpha_enumerated(c, n);
      if (prime[static_cast<std::size_t>(n)]) {
        CHECK(std::abs(alpha - b_uniform(n, d)) < 1e-15);
      } else {
        CHECK(alpha > b_uniform(n, d));
      }
    }
  }
}

TEST_CASE("composite bound equals the mode at squares of primes") {
  for (std::size_t d : {16u, 64u}) {
    const auto u = statesim::prepare_uniform(d);
    for (int k : {2, 3, 5, 7, 11}) {
      const int n = k * k;
      if (n > static_cast<int>(2 * (d - 1))) {
        continue;
      }
      CHECK(std::abs(spectral::fourier_mode_closed(u, n) - p_uniform(n, d)) < 1e-15);
    }
  }
}

TEST_CASE("two-divisor family curve equals the mode at k*q") {
  const std::size_t d = 64;
  const auto u = statesim::prepare_uniform(d);
  for (auto [k, q] : {std::pair{2, 37}, std::pair{3, 41}, std::pair{5, 7}, std::pair{2, 61}}) {
    const int n = k * q;
    CHECK(std::abs(spectral::fourier_mode_closed(u, n) - bk_uniform(n, k, d)) < 1e-15);
  }
}

TEST_CASE("delta matches the family gap") {
  for (double d : {16.0, 64.0, 1024.0}) {
    for (double k : {2.0, 3.0, 5.0}) {
      for (double n : {6.0, 50.0, 77.7, 120.0}) {
        const double ref = oracle::family_gap(n, k, d);
        CHECK(std::abs(delta(n, k, static_cast<std::size_t>(d)) - ref) <
              1e-9 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  CHECK_THROWS(delta(0.0, 2.0, 8));
}

TEST_CASE("thresholds agree with bisection") {
  for (std::size_t d : {16u, 64u, 128u, 1024u}) {
    for (double k : {2.0, 3.0}) {
      const auto x = static_cast<double>(d);
      const double root = n_threshold(k, d);
      // the rightmost root lies beyond the interior maximum of delta
      const double lo = delta_maximum(k, d);
      const double ref = oracle::bisect(
          [&](double n) { return oracle::family_gap(n, k, x); }, lo, 4.0 * x * x);
      CHECK(std::abs(root - ref) < 1e-6 * ref);
      CHECK(std::abs(delta(root, k, d)) < 1e-9 * x * x);
    }
  }
  CHECK(n_threshold(2, 64) == doctest::Approx(79.0123).epsilon(1e-5));
  CHECK(n_threshold(3, 64) == doctest::Approx(123.1835).epsilon(1e-5));
  CHECK_THROWS_AS(n_threshold(2, 4), std::out_of_range);
  CHECK_THROWS_AS(n_threshold(1, 64), std::out_of_range);
}

TEST_CASE("k roots") {
  for (double d : {8.0, 64.0, 4096.0}) {
    const double km = k_minus(d);
    const double kp = k_plus(d);
    CHECK(km < kp);
    CHECK(std::abs(delta(2.0 * (d - 1.0), km, static_cast<std::size_t>(d))) < 1e-8 * d * d);
    CHECK(std::abs(delta(2.0 * (d - 1.0), kp, static_cast<std::size_t>(d))) < 1e-8 * d * d);
  }
  CHECK(k_minus(64) < k_minus(128));
  CHECK(k_minus(1 << 20) > 3.9);
  CHECK(k_minus(1 << 20) < 4.0);
}

TEST_CASE("admissible k") {
  CHECK(k_admissible_set(4).empty());
  CHECK(k_admissible_set(64) == std::vector<int>{2, 3});
  for (int m = 2; m <= 12; ++m) {
    for (int k : k_admissible_set(std::size_t{1} << m)) {
      CHECK((k == 2 || k == 3));
    }
  }
}

TEST_CASE("tables") {
  const auto t = uniform_table(64);
  CHECK(t.has_composite_bound());
  CHECK(t.b.size() == 125);
  CHECK(t.n_th2 == doctest::Approx(79.0123).epsilon(1e-5));
  const auto t4 = uniform_table(4);
  CHECK(std::isinf(t4.n_th2));
  CHECK(std::isinf(t4.n_th3));
  const auto s = profile_table(statesim::prepare_spin_coherent(8));
  CHECK_FALSE(s.has_composite_bound());
  CHECK(s.b.size() == 13);
  CHECK_THROWS(s.p_at(2));
  CHECK_THROWS(t.b_at(127));
}

TEST_CASE("classifier regions") {
  const auto t = uniform_table(64);
  auto v = classify(5, 0.5 * t.b_at(5), t);
  CHECK(v.region == Region::Green);
  CHECK(v.label == Label::Prime);
  CHECK(v.evidence == Evidence::BelowB);

  v = classify(6, 2.0 * t.p_at(6), t);
  CHECK(v.region == Region::Purple);
  CHECK(v.label == Label::Composite);

  v = classify(49, t.p_at(49), t, 0.0);
  CHECK(v.region == Region::LightBlue);
  CHECK(v.label == Label::Composite);
  CHECK(v.witness == 7u);

  // beyond n_th(2), the 2q family undercuts P and needs the parity test
  v = classify(82, bk_uniform(82, 2, 64), t, 0.0);
  CHECK(v.region == Region::LightBlue);
  CHECK(v.subinterval == numtheory::Subinterval::I2);
  CHECK(v.witness == 2u);

  v = classify(79, t.b_at(79), t, 0.0);
  CHECK(v.label == Label::ProbablePrime);
  CHECK(v.says_prime());

  CHECK_THROWS(classify(5, 0.1, profile_table(statesim::prepare_spin_coherent(8))));
}

TEST_CASE("n = 74 at d = 64 is in the purple region") {
  const auto t = uniform_table(64);
  const double alpha = spectral::fourier_mode_closed(statesim::prepare_uniform(64), 74);
  CHECK(alpha > t.p_at(74));
  const auto v = classify(74, alpha, t, 0.0);
  CHECK(v.region == Region::Purple);
  CHECK(v.subinterval == numtheory::Subinterval::I1);
}

TEST_CASE("label names round trip") {
  for (auto l : {Label::Prime, Label::Composite, Label::ProbablePrime}) {
    CHECK(parse_label(to_string(l)) == l);
  }
  for (auto r : {Region::Green, Region::LightBlue, Region::Purple}) {
    CHECK(parse_region(to_string(r)) == r);
  }
  for (auto e : {Evidence::BelowB, Evidence::AboveP, Evidence::WitnessFound, Evidence::NoWitness}) {
    CHECK(parse_evidence(to_string(e)) == e);
  }
}
