// Cosine modes of the purity over the half period [0, pi/omega]:
//
//   alpha_n = (2 omega / pi) * integral_0^{pi/omega} gamma(t) cos(n omega t) dt
//
// evaluated either by composite Simpson over a sampled trace or exactly as
// a sum over the divisors of n.

#ifndef PIED_SPECTRAL_HPP
#define PIED_SPECTRAL_HPP

#include "pied/statesim.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pied::spectral {

/// Composite Simpson rule on equally spaced samples with step h. The number
/// of subintervals (values.size() - 1) must be even and positive.
double composite_simpson(std::span<const double> values, double h);

enum class SpectrumSource { ClosedForm, Numeric, NumericNoisy };

std::string_view to_string(SpectrumSource s) noexcept;
SpectrumSource parse_spectrum_source(std::string_view name);

struct SpectrumProvenance {
  SpectrumSource source = SpectrumSource::ClosedForm;
  std::size_t partitions = 0;
  double epsilon = 0.0;
  std::optional<std::uint64_t> shots;
  /// Set once a global CFE rescaling has been applied.
  std::optional<double> mitigation_lambda;
};

/// Modes for n in [2, 2(d-1)], stored contiguously from n = 2.
struct FourierSpectrum {
  std::size_t d = 0;
  double omega = 0.0;
  std::vector<double> modes;
  SpectrumProvenance provenance;

  static constexpr int first_n = 2;
  int last_n() const noexcept { return static_cast<int>(2 * (d - 1)); }
  double at(int n) const;
  double& at(int n);
};

double fourier_mode_numeric(const statesim::PurityTrace& trace, int n);

/// 4 * sum over divisors y of n of S(n/y) * S(y), with S(a) the population
/// overlap at shift a; shifts >= d contribute nothing.
double fourier_mode_closed(const statesim::AmplitudeProfile& profile, int n);

enum class SpectrumMode { ClosedForm, Numeric };

/// All modes over [2, 2(d-1)]. Numeric mode samples one trace (noise as
/// given) and integrates it once per n; ClosedForm ignores omega/p and
/// rejects a noise spec.
FourierSpectrum spectrum(const statesim::AmplitudeProfile& profile, double omega,
                         std::size_t p, const std::optional<statesim::NoiseSpec>& noise,
                         SpectrumMode mode);

/// Numeric spectrum of an existing trace.
FourierSpectrum spectrum_from_trace(const statesim::PurityTrace& trace, std::size_t d);

}  // namespace pied::spectral

#endif  // PIED_SPECTRAL_HPP
