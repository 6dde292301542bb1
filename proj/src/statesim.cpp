#include "pied/statesim.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pied {

bool is_power_of_two(std::size_t d) noexcept { return d != 0 && (d & (d - 1)) == 0; }

void require_dimension(std::size_t d) {
  if (d < 2 || !is_power_of_two(d)) {
    throw std::invalid_argument("dimension must be a power of two >= 2, got " +
                                std::to_string(d));
  }
}

}  // namespace pied

namespace pied::statesim {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kImaginaryTolerance = 1e-10;

// Autocorrelation of the populations for shifts -(d-1)..(d-1); index
// shift + d - 1.
std::vector<double> difference_weights(const AmplitudeProfile& profile) {
  const auto d = profile.dimension();
  std::vector<double> out(2 * d - 1, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    const double v = shift_overlap(profile, a);
    out[d - 1 + a] = v;
    out[d - 1 - a] = v;
  }
  return out;
}

std::complex<double> phase_sum(std::span<const double> diff, std::size_t d, double omega,
                               double t) {
  const auto offset = static_cast<long>(d) - 1;
  std::complex<double> acc{0.0, 0.0};
  for (long a = -offset; a <= offset; ++a) {
    const double wa = diff[static_cast<std::size_t>(a + offset)];
    std::complex<double> row{0.0, 0.0};
    for (long b = -offset; b <= offset; ++b) {
      const double wb = diff[static_cast<std::size_t>(b + offset)];
      const double phase = -omega * t * static_cast<double>(a * b);
      row += wb * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    acc += wa * row;
  }
  return acc;
}

double clamp_unit(double g) { return std::min(1.0, std::max(-1.0, g)); }

}  // namespace

std::string_view to_string(StateFamily f) noexcept {
  switch (f) {
    case StateFamily::Uniform: return "uniform";
    case StateFamily::SpinCoherent: return "spin-coherent";
    case StateFamily::Custom: return "custom";
  }
  return "?";
}

StateFamily parse_state_family(std::string_view name) {
  if (name == "uniform") return StateFamily::Uniform;
  if (name == "spin-coherent" || name == "spin_coherent") return StateFamily::SpinCoherent;
  if (name == "custom") return StateFamily::Custom;
  throw std::invalid_argument("unknown state family '" + std::string(name) + "'");
}

AmplitudeProfile::AmplitudeProfile(std::vector<double> amplitudes, StateFamily family)
    : amplitudes_(std::move(amplitudes)), family_(family) {
  weights_.reserve(amplitudes_.size());
  for (double c : amplitudes_) {
    weights_.push_back(c * c);
  }
}

AmplitudeProfile AmplitudeProfile::from_amplitudes(std::vector<double> amplitudes,
                                                   StateFamily family) {
  require_dimension(amplitudes.size());
  double norm = 0.0;
  for (double c : amplitudes) {
    if (!std::isfinite(c) || c == 0.0) {
      throw std::invalid_argument("amplitudes must be finite and nonzero");
    }
    norm += c * c;
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "amplitudes not normalized: sum of squares = " << norm;
    throw std::invalid_argument(msg.str());
  }
  return AmplitudeProfile(std::move(amplitudes), family);
}

AmplitudeProfile prepare_uniform(std::size_t d) {
  require_dimension(d);
  return AmplitudeProfile::from_amplitudes(
      std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))), StateFamily::Uniform);
}

AmplitudeProfile prepare_spin_coherent(std::size_t d) {
  require_dimension(d);
  const auto top = static_cast<double>(d - 1);
  std::vector<double> c(d);
  for (std::size_t n = 1; n <= d; ++n) {
    const auto r = static_cast<double>(d - n);
    const double log_binom = std::lgamma(top + 1) - std::lgamma(r + 1) - std::lgamma(top - r + 1);
    c[n - 1] = std::exp(0.5 * (log_binom - top * std::numbers::ln2));
  }
  return AmplitudeProfile::from_amplitudes(std::move(c), StateFamily::SpinCoherent);
}

AmplitudeProfile prepare(StateFamily family, std::size_t d) {
  switch (family) {
    case StateFamily::Uniform: return prepare_uniform(d);
    case StateFamily::SpinCoherent: return prepare_spin_coherent(d);
    case StateFamily::Custom: break;
  }
  throw std::invalid_argument("custom profiles must be built from explicit amplitudes");
}

double shift_overlap(const AmplitudeProfile& profile, std::size_t shift) {
  const auto w = profile.weights();
  double s = 0.0;
  for (std::size_t k = 0; k + shift < w.size(); ++k) {
    s += w[k] * w[k + shift];
  }
  return s;
}

double purity_imaginary_residue(const AmplitudeProfile& profile, double omega, double t) {
  const auto diff = difference_weights(profile);
  return phase_sum(diff, profile.dimension(), omega, t).imag();
}

double purity_closed_form(const AmplitudeProfile& profile, double omega, double t) {
  const auto diff = difference_weights(profile);
  const auto z = phase_sum(diff, profile.dimension(), omega, t);
  if (std::abs(z.imag()) > kImaginaryTolerance) {
    throw std::logic_error("purity sum has a non-negligible imaginary part");
  }
  return std::min(1.0, z.real());
}

double purity_statevector(const AmplitudeProfile& profile, double omega, double t) {
  const auto d = static_cast<Eigen::Index>(profile.dimension());
  const auto c = profile.amplitudes();
  Eigen::MatrixXcd psi(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double phase = -omega * t * static_cast<double>((a + 1) * (b + 1));
      psi(a, b) = c[a] * c[b] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  // rho_A = Tr_B |psi><psi| with psi reshaped as (A index, B index)
  const Eigen::MatrixXcd rho = psi * psi.adjoint();
  return (rho * rho).trace().real();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double swap_test_sample(double gamma_true, std::uint64_t shots, std::mt19937_64& rng) {
  if (shots == 0) {
    throw std::invalid_argument("swap_test_sample: shots must be positive");
  }
  if (!(gamma_true >= 0.0 && gamma_true <= 1.0)) {
    throw std::invalid_argument("swap_test_sample: gamma must lie in [0, 1]");
  }
  const double p0 = 0.5 * (1.0 + gamma_true);
  std::uint64_t successes = shots;
  if (p0 < 1.0) {
    std::binomial_distribution<std::uint64_t> draw(shots, p0);
    successes = draw(rng);
  }
  return 2.0 * (static_cast<double>(successes) / static_cast<double>(shots)) - 1.0;
}

double swap_test_sample(double gamma_true, std::uint64_t shots, std::uint64_t rng_seed) {
  std::mt19937_64 rng = stream_engine(rng_seed, 0);
  return swap_test_sample(gamma_true, shots, rng);
}

double apply_noise(double gamma, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::domain_error("noise strength must lie in [0, 1)");
  }
  return (1.0 - epsilon) * gamma;
}

EpsilonModel EpsilonModel::constant(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::domain_error("noise strength must lie in [0, 1)");
  }
  EpsilonModel m;
  m.kind_ = Kind::Constant;
  m.value_ = epsilon;
  return m;
}

EpsilonModel EpsilonModel::power_law(double lambda0, double kappa, double eta) {
  EpsilonModel m;
  m.kind_ = Kind::PowerLaw;
  m.lambda0_ = lambda0;
  m.kappa_ = kappa;
  m.eta_ = eta;
  return m;
}

double EpsilonModel::at(std::size_t d) const {
  double eps = value_;
  if (kind_ == Kind::PowerLaw) {
    const double lambda = lambda0_ + kappa_ * std::pow(static_cast<double>(d), eta_);
    eps = 1.0 - 1.0 / lambda;
  }
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::domain_error("noise model yields epsilon outside [0, 1) at d = " +
                            std::to_string(d));
  }
  return eps;
}

std::string EpsilonModel::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::Constant) {
    os << "const(" << value_ << ")";
  } else {
    os << "powerlaw(" << lambda0_ << "," << kappa_ << "," << eta_ << ")";
  }
  return os.str();
}

std::string NoiseSpec::fingerprint() const {
  std::ostringstream os;
  os << "eps=" << epsilon.fingerprint() << ";shots=";
  if (shots) {
    os << *shots;
  } else {
    os << "none";
  }
  os << ";seed=" << seed;
  return os.str();
}

std::string_view to_string(TraceSource s) noexcept {
  switch (s) {
    case TraceSource::Exact: return "exact";
    case TraceSource::ShotSampled: return "shot-sampled";
    case TraceSource::Noisy: return "noisy";
    case TraceSource::ZneExtrapolated: return "zne-extrapolated";
  }
  return "?";
}

TraceSource parse_trace_source(std::string_view name) {
  if (name == "exact") return TraceSource::Exact;
  if (name == "shot-sampled") return TraceSource::ShotSampled;
  if (name == "noisy") return TraceSource::Noisy;
  if (name == "zne-extrapolated") return TraceSource::ZneExtrapolated;
  throw std::invalid_argument("unknown trace source '" + std::string(name) + "'");
}

std::vector<double> half_period_grid(double omega, std::size_t p) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("omega must be positive");
  }
  if (p < 2 || p % 2 != 0) {
    throw std::invalid_argument("p must be even and >= 2 (composite Simpson needs an even "
                                "number of subintervals), got " + std::to_string(p));
  }
  const double span = std::numbers::pi / omega;
  std::vector<double> t(p + 1);
  for (std::size_t i = 0; i <= p; ++i) {
    t[i] = span * static_cast<double>(i) / static_cast<double>(p);
  }
  return t;
}

std::vector<double> exact_purities(const AmplitudeProfile& profile, double omega,
                                   std::span<const double> times) {
  const auto diff = difference_weights(profile);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const auto z = phase_sum(diff, profile.dimension(), omega, t);
    if (std::abs(z.imag()) > kImaginaryTolerance) {
      throw std::logic_error("purity sum has a non-negligible imaginary part");
    }
    out.push_back(std::min(1.0, z.real()));
  }
  return out;
}

PurityTrace sample_trace(const AmplitudeProfile& profile, double omega, std::size_t p,
                         const std::optional<NoiseSpec>& noise) {
  PurityTrace trace;
  trace.omega = omega;
  trace.times = half_period_grid(omega, p);
  trace.gamma = exact_purities(profile, omega, trace.times);
  if (!noise) {
    return trace;
  }

  const double eps = noise->epsilon.at(profile.dimension());
  trace.provenance.epsilon = eps;
  trace.provenance.shots = noise->shots;
  trace.provenance.seed = noise->seed;
  trace.provenance.source = eps > 0.0 ? TraceSource::Noisy
                            : noise->shots ? TraceSource::ShotSampled
                                           : TraceSource::Exact;
  for (std::size_t i = 0; i < trace.gamma.size(); ++i) {
    double g = apply_noise(trace.gamma[i], eps);
    if (noise->shots) {
      auto rng = stream_engine(noise->seed, i);
      g = swap_test_sample(std::max(0.0, g), *noise->shots, rng);
    }
    trace.gamma[i] = clamp_unit(g);
  }
  return trace;
}

}  // namespace pied::statesim
