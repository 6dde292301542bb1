// Product-state preparation, diagonal time evolution and purity sampling
// for two coupled d-level systems.
//
// Levels are numbered 1..d as in the energy spectrum n*mu; the evolution
// operator is the diagonal phase map |a,b> -> exp(-i*omega*a*b*t) |a,b>.

#ifndef PIED_STATESIM_HPP
#define PIED_STATESIM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pied {

bool is_power_of_two(std::size_t d) noexcept;

/// Throws std::invalid_argument unless d is a power of two >= 2.
void require_dimension(std::size_t d);

}  // namespace pied

namespace pied::statesim {

enum class StateFamily { Uniform, SpinCoherent, Custom };

std::string_view to_string(StateFamily f) noexcept;
StateFamily parse_state_family(std::string_view name);

/// Real, strictly nonzero, normalized local amplitudes c_1..c_d.
class AmplitudeProfile {
 public:
  /// Validates normalization (1e-12), nonzero entries and the dimension.
  static AmplitudeProfile from_amplitudes(std::vector<double> amplitudes,
                                          StateFamily family = StateFamily::Custom);

  std::size_t dimension() const noexcept { return amplitudes_.size(); }
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  /// 1-based level index.
  double amplitude(std::size_t level) const { return amplitudes_.at(level - 1); }
  /// Populations |c_j|^2, 0-based.
  std::span<const double> weights() const noexcept { return weights_; }
  StateFamily family() const noexcept { return family_; }

 private:
  AmplitudeProfile(std::vector<double> amplitudes, StateFamily family);

  std::vector<double> amplitudes_;
  std::vector<double> weights_;
  StateFamily family_;
};

AmplitudeProfile prepare_uniform(std::size_t d);

/// Spin coherent state at theta = pi/2, phi = 0 with spin s = (d-1)/2:
/// c_n = 2^{-(d-1)/2} sqrt(C(d-1, d-n)).
AmplitudeProfile prepare_spin_coherent(std::size_t d);

AmplitudeProfile prepare(StateFamily family, std::size_t d);

/// sum_k |c_k|^2 |c_{k+shift}|^2 over in-range k; zero once shift >= d.
double shift_overlap(const AmplitudeProfile& profile, std::size_t shift);

/// Reduced purity from the quadruple phase sum, grouped by the level
/// differences (j-k) and (l-m). Throws std::logic_error if the imaginary
/// residue exceeds 1e-10.
double purity_closed_form(const AmplitudeProfile& profile, double omega, double t);

/// Same quantity via the evolved d^2 statevector, the partial trace over B
/// and Tr(rho_A^2).
double purity_statevector(const AmplitudeProfile& profile, double omega, double t);

/// Imaginary part of the quadruple phase sum (zero up to rounding).
double purity_imaginary_residue(const AmplitudeProfile& profile, double omega,
                                double t);

// ---------------------------------------------------------------------------
// Sampling and synthetic noise

/// Deterministic 64-bit mix of (seed, stream); used to derive independent
/// RNG streams per time index, batch or noise-scale factor.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Engine for one time index of one trace.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index);

/// Simulated SWAP test: successes ~ Binomial(shots, (1+gamma)/2), returns
/// 2*successes/shots - 1.
double swap_test_sample(double gamma_true, std::uint64_t shots, std::mt19937_64& rng);
double swap_test_sample(double gamma_true, std::uint64_t shots, std::uint64_t rng_seed);

/// Uniform contraction gamma -> (1 - epsilon) * gamma.
double apply_noise(double gamma, double epsilon);

/// Dimension-dependent contraction strength. The power-law form mirrors the
/// correction model: epsilon(d) = 1 - 1/(lambda0 + kappa * d^eta), so the
/// exact rescaling that undoes it is lambda0 + kappa * d^eta.
class EpsilonModel {
 public:
  enum class Kind { Constant, PowerLaw };

  static EpsilonModel constant(double epsilon);
  static EpsilonModel power_law(double lambda0, double kappa, double eta);

  Kind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }
  double lambda0() const noexcept { return lambda0_; }
  double kappa() const noexcept { return kappa_; }
  double eta() const noexcept { return eta_; }

  /// Throws std::domain_error when the result leaves [0, 1).
  double at(std::size_t d) const;
  std::string fingerprint() const;

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  double lambda0_ = 1.0;
  double kappa_ = 0.0;
  double eta_ = -1.0;
};

struct NoiseSpec {
  EpsilonModel epsilon = EpsilonModel::constant(0.0);
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;

  std::string fingerprint() const;
};

enum class TraceSource { Exact, ShotSampled, Noisy, ZneExtrapolated };

std::string_view to_string(TraceSource s) noexcept;
TraceSource parse_trace_source(std::string_view name);

struct TraceProvenance {
  TraceSource source = TraceSource::Exact;
  double epsilon = 0.0;
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

/// Purity samples on p+1 equally spaced instants covering [0, pi/omega].
struct PurityTrace {
  double omega = 0.0;
  std::vector<double> times;
  std::vector<double> gamma;
  /// Per-instant standard error when several batches were averaged.
  std::vector<double> gamma_stderr;
  TraceProvenance provenance;

  std::size_t partitions() const noexcept {
    return times.empty() ? 0 : times.size() - 1;
  }
};

/// Uniform grid t_i = i * (pi/omega) / p, i = 0..p.
std::vector<double> half_period_grid(double omega, std::size_t p);

/// Exact purity, contracted by epsilon(d), then shot-sampled, per NoiseSpec.
/// p must be even (composite Simpson needs an even number of subintervals).
PurityTrace sample_trace(const AmplitudeProfile& profile, double omega, std::size_t p,
                         const std::optional<NoiseSpec>& noise = std::nullopt);

/// Exact samples only, no noise bookkeeping.
std::vector<double> exact_purities(const AmplitudeProfile& profile, double omega,
                                   std::span<const double> times);

}  // namespace pied::statesim

#endif  // PIED_STATESIM_HPP
