#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pied/statesim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace pied::statesim;

TEST_CASE("dimension checks") {
  CHECK(pied::is_power_of_two(2));
  CHECK(pied::is_power_of_two(64));
  CHECK_FALSE(pied::is_power_of_two(6));
  CHECK_FALSE(pied::is_power_of_two(0));
  CHECK_THROWS_AS(pied::require_dimension(1), std::invalid_argument);
  CHECK_THROWS_AS(pied::require_dimension(12), std::invalid_argument);
  CHECK_NOTHROW(pied::require_dimension(2));
}

TEST_CASE("uniform and spin coherent preparation") {
  for (std::size_t d : {2u, 4u, 8u, 16u, 32u}) {
    const auto u = prepare_uniform(d);
    const auto s = prepare_spin_coherent(d);
    const auto ref = oracle::binomial_amplitudes(d);
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(u.amplitudes()[i] == doctest::Approx(1.0 / std::sqrt(double(d))).epsilon(1e-15));
      CHECK(std::abs(s.amplitudes()[i] - ref[i]) < 1e-13);
      norm += s.weights()[i];
    }
    CHECK(std::abs(norm - 1.0) < 1e-12);
    CHECK(s.family() == StateFamily::SpinCoherent);
  }
  const auto s4 = prepare_spin_coherent(4);
  CHECK(std::abs(s4.amplitude(1) - std::sqrt(1.0 / 8.0)) < 1e-15);
  CHECK(std::abs(s4.amplitude(2) - std::sqrt(3.0 / 8.0)) < 1e-15);
  CHECK_THROWS(prepare_uniform(6));
}

TEST_CASE("custom profiles are validated") {
  CHECK_THROWS(AmplitudeProfile::from_amplitudes({0.6, 0.6}));
  CHECK_THROWS(AmplitudeProfile::from_amplitudes({1.0, 0.0}));
  CHECK_THROWS(AmplitudeProfile::from_amplitudes({0.6, 0.8, 0.0}));
  CHECK_NOTHROW(AmplitudeProfile::from_amplitudes({0.6, 0.8}));
}

TEST_CASE("state family names round trip") {
  for (auto f : {StateFamily::Uniform, StateFamily::SpinCoherent, StateFamily::Custom}) {
    CHECK(parse_state_family(to_string(f)) == f);
  }
  CHECK_THROWS(parse_state_family("ghz"));
}

TEST_CASE("purity agrees with the quadruple sum and the statevector path") {
  const double omega = 0.1;
  for (std::size_t d : {2u, 4u, 8u}) {
    for (auto profile : {prepare_uniform(d), prepare_spin_coherent(d)}) {
      const std::vector<double> c(profile.amplitudes().begin(), profile.amplitudes().end());
      for (double t : {0.0, 0.7, 3.3, 12.0, 25.1, 31.4}) {
        const auto brute = oracle::purity_quadruple(c, omega, t);
        const double closed = purity_closed_form(profile, omega, t);
        CHECK(std::abs(closed - brute.real()) < 1e-12);
        CHECK(std::abs(brute.imag()) < 1e-12);
        CHECK(std::abs(purity_statevector(profile, omega, t) - closed) < 1e-10);
        CHECK(std::abs(purity_imaginary_residue(profile, omega, t)) < 1e-12);
      }
    }
  }
}

TEST_CASE("uniform purity at t = 0 and at the half period") {
  for (std::size_t d : {4u, 8u, 16u}) {
    const auto u = prepare_uniform(d);
    CHECK(purity_closed_form(u, 0.1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // at t = pi/omega the phases are (-1)^{ab}
    CHECK(purity_closed_form(u, 0.1, std::numbers::pi / 0.1) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("shift overlap") {
  const auto u = prepare_uniform(8);
  CHECK(shift_overlap(u, 0) == doctest::Approx(1.0 / 8.0));
  CHECK(shift_overlap(u, 3) == doctest::Approx(5.0 / 64.0));
  CHECK(shift_overlap(u, 8) == 0.0);
  CHECK(shift_overlap(u, 100) == 0.0);
}

TEST_CASE("half period grid") {
  const auto g = half_period_grid(0.1, 30);
  REQUIRE(g.size() == 31);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(std::numbers::pi / 0.1).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(half_period_grid(0.1, 121), doctest::Contains("even"),
                       std::invalid_argument);
}

TEST_CASE("exact trace") {
  const auto tr = sample_trace(prepare_uniform(4), 0.1, 30);
  CHECK(tr.partitions() == 30);
  CHECK(tr.gamma.front() == doctest::Approx(1.0));
  CHECK(tr.provenance.source == TraceSource::Exact);
  CHECK(tr.gamma_stderr.empty());
}

TEST_CASE("contraction noise") {
  CHECK(apply_noise(0.5, 0.2) == doctest::Approx(0.4));
  CHECK_THROWS_AS(apply_noise(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(apply_noise(0.5, -0.1), std::domain_error);

  NoiseSpec spec;
  spec.epsilon = EpsilonModel::constant(0.2);
  const auto u = prepare_uniform(8);
  const auto exact = sample_trace(u, 0.1, 30);
  const auto noisy = sample_trace(u, 0.1, 30, spec);
  CHECK(noisy.provenance.source == TraceSource::Noisy);
  for (std::size_t i = 0; i < exact.gamma.size(); ++i) {
    CHECK(noisy.gamma[i] == doctest::Approx(0.8 * exact.gamma[i]).epsilon(1e-14));
  }
}

TEST_CASE("epsilon model") {
  const auto pl = EpsilonModel::power_law(2.388, -1.9164, -0.4408);
  const double lambda4 = 2.388 - 1.9164 * std::pow(4.0, -0.4408);
  CHECK(pl.at(4) == doctest::Approx(1.0 - 1.0 / lambda4).epsilon(1e-14));
  CHECK(pl.at(4) < pl.at(16));
  CHECK_THROWS_AS(EpsilonModel::constant(1.0).at(4), std::domain_error);
  CHECK(EpsilonModel::constant(0.2).fingerprint() != pl.fingerprint());
  // lambda < 1 would give negative epsilon
  CHECK_THROWS_AS(EpsilonModel::power_law(0.5, 0.0, -1.0).at(4), std::domain_error);
}

TEST_CASE("shot sampling is reproducible and unbiased") {
  NoiseSpec spec;
  spec.shots = 8192;
  spec.seed = 42;
  const auto u = prepare_uniform(4);
  const auto a = sample_trace(u, 0.1, 30, spec);
  const auto b = sample_trace(u, 0.1, 30, spec);
  CHECK(a.gamma == b.gamma);
  spec.seed = 43;
  CHECK(sample_trace(u, 0.1, 30, spec).gamma != a.gamma);
  CHECK(a.provenance.source == TraceSource::ShotSampled);

  // mean of many single-instant draws sits within 4 standard errors
  const double gamma = 0.3;
  const std::uint64_t shots = 1000;
  const int draws = 4000;
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) {
    auto rng = stream_engine(7, static_cast<std::uint64_t>(i));
    sum += swap_test_sample(gamma, shots, rng);
  }
  const double sigma = std::sqrt((1.0 - gamma * gamma) / static_cast<double>(shots));
  CHECK(std::abs(sum / draws - gamma) < 4.0 * sigma / std::sqrt(double(draws)));

  auto rng = stream_engine(1, 0);
  CHECK_THROWS(swap_test_sample(0.5, 0, rng));
  CHECK_THROWS(swap_test_sample(1.5, 10, rng));
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}
