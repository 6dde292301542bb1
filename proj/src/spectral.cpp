#include "pied/spectral.hpp"

#include "pied/numtheory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pied::spectral {

double composite_simpson(std::span<const double> values, double h) {
  if (values.size() < 3 || (values.size() - 1) % 2 != 0) {
    throw std::invalid_argument(
        "composite Simpson needs an even, positive number of subintervals; got " +
        std::to_string(values.empty() ? 0 : values.size() - 1));
  }
  const std::size_t last = values.size() - 1;
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < last; i += 2) {
    odd += values[i];
  }
  for (std::size_t i = 2; i < last; i += 2) {
    even += values[i];
  }
  return h / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

std::string_view to_string(SpectrumSource s) noexcept {
  switch (s) {
    case SpectrumSource::ClosedForm: return "closed-form";
    case SpectrumSource::Numeric: return "numeric";
    case SpectrumSource::NumericNoisy: return "numeric-noisy";
  }
  return "?";
}

SpectrumSource parse_spectrum_source(std::string_view name) {
  if (name == "closed-form") return SpectrumSource::ClosedForm;
  if (name == "numeric") return SpectrumSource::Numeric;
  if (name == "numeric-noisy") return SpectrumSource::NumericNoisy;
  throw std::invalid_argument("unknown spectrum source '" + std::string(name) + "'");
}

double FourierSpectrum::at(int n) const {
  if (n < first_n || n > last_n()) {
    throw std::out_of_range("mode n = " + std::to_string(n) + " outside [2, " +
                            std::to_string(last_n()) + "]");
  }
  return modes.at(static_cast<std::size_t>(n - first_n));
}

double& FourierSpectrum::at(int n) {
  if (n < first_n || n > last_n()) {
    throw std::out_of_range("mode n = " + std::to_string(n) + " outside [2, " +
                            std::to_string(last_n()) + "]");
  }
  return modes.at(static_cast<std::size_t>(n - first_n));
}

double fourier_mode_numeric(const statesim::PurityTrace& trace, int n) {
  if (n < 1) {
    throw std::invalid_argument("fourier_mode_numeric: n must be >= 1");
  }
  const auto p = trace.partitions();
  if (p < 2 || p % 2 != 0 || trace.gamma.size() != trace.times.size()) {
    throw std::invalid_argument(
        "fourier_mode_numeric: trace needs an even number of subintervals (Simpson)");
  }
  const double omega = trace.omega;
  const double h = (trace.times.back() - trace.times.front()) / static_cast<double>(p);
  std::vector<double> integrand(trace.gamma.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    integrand[i] = trace.gamma[i] * std::cos(n * omega * trace.times[i]);
  }
  return 2.0 * omega / std::numbers::pi * composite_simpson(integrand, h);
}

double fourier_mode_closed(const statesim::AmplitudeProfile& profile, int n) {
  if (n < 2) {
    throw std::invalid_argument("fourier_mode_closed: n must be >= 2");
  }
  const auto d = profile.dimension();
  double sum = 0.0;
  for (auto y : numtheory::divisors(static_cast<std::uint64_t>(n)).divisors) {
    const auto cofactor = static_cast<std::uint64_t>(n) / y;
    if (y >= d || cofactor >= d) {
      continue;
    }
    sum += statesim::shift_overlap(profile, cofactor) * statesim::shift_overlap(profile, y);
  }
  return 4.0 * sum;
}

FourierSpectrum spectrum_from_trace(const statesim::PurityTrace& trace, std::size_t d) {
  require_dimension(d);
  FourierSpectrum s;
  s.d = d;
  s.omega = trace.omega;
  s.provenance.partitions = trace.partitions();
  const bool noisy = trace.provenance.source != statesim::TraceSource::Exact;
  s.provenance.source = noisy ? SpectrumSource::NumericNoisy : SpectrumSource::Numeric;
  s.provenance.epsilon = trace.provenance.epsilon;
  s.provenance.shots = trace.provenance.shots;
  for (int n = FourierSpectrum::first_n; n <= s.last_n(); ++n) {
    s.modes.push_back(fourier_mode_numeric(trace, n));
  }
  return s;
}

FourierSpectrum spectrum(const statesim::AmplitudeProfile& profile, double omega,
                         std::size_t p, const std::optional<statesim::NoiseSpec>& noise,
                         SpectrumMode mode) {
  if (mode == SpectrumMode::Numeric) {
    const auto trace = statesim::sample_trace(profile, omega, p, noise);
    return spectrum_from_trace(trace, profile.dimension());
  }
  if (noise) {
    throw std::invalid_argument("closed-form spectrum does not take a noise model");
  }
  FourierSpectrum s;
  s.d = profile.dimension();
  s.omega = omega;
  for (int n = FourierSpectrum::first_n; n <= s.last_n(); ++n) {
    s.modes.push_back(fourier_mode_closed(profile, n));
  }
  return s;
}

}  // namespace pied::spectral
