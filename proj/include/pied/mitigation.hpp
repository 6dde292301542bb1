// Error mitigation for noisy Fourier spectra and purity traces.
//
// CFE (correction factor extrapolation): one global factor per dimension
// minimizes sum_i |lambda * noisy_i - reference_i|; the per-dimension
// optima are fitted to lambda0 + kappa * d^eta and extrapolated to
// dimensions without reference data.
//
// ZNE (zero-noise extrapolation): observe at amplified noise xi_j >= 1 and
// extrapolate a least-squares polynomial in xi back to xi = 0.

#ifndef PIED_MITIGATION_HPP
#define PIED_MITIGATION_HPP

#include "pied/spectral.hpp"
#include "pied/statesim.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pied::mitigation {

/// Exact L1-optimal rescaling: the weighted median of reference/noisy with
/// weights |noisy|. Pairs with noisy == 0 are dropped. On a flat optimal
/// segment the smallest optimizer is returned.
double cfe_lambda_opt(std::span<const double> noisy, std::span<const double> reference);

/// sum_i |lambda * noisy_i - reference_i|
double cfe_objective(double lambda, std::span<const double> noisy,
                     std::span<const double> reference);

spectral::FourierSpectrum cfe_apply(double lambda, const spectral::FourierSpectrum& spectrum);

struct CalibrationPoint {
  std::size_t d = 0;
  double lambda_opt = 0.0;
};

struct CorrectionModel {
  double lambda0 = 1.0;
  double kappa = 0.0;
  double eta = -1.0;
  std::vector<CalibrationPoint> calibration;

  double evaluate(double d) const;
};

/// Least-squares fit of lambda0 + kappa * d^eta. The exponent is searched on
/// [-3, 0) (coarse grid, then golden-section refinement); lambda0 and kappa
/// come from the linear least-squares problem at each trial exponent.
/// Constant data gives kappa = 0 and eta = -1 by convention.
CorrectionModel cfe_fit(std::vector<CalibrationPoint> calibration);

/// lambda0 + kappa * d^eta; d may not lie below the smallest calibrated d.
double cfe_extrapolate(const CorrectionModel& model, std::size_t d);

/// xi = 1 + 2 * folded / total for unitary folding.
double zne_scale_factor(std::uint64_t total_gates, std::uint64_t folded_gates);

struct ZneSeries {
  std::vector<double> scale_factors;
  std::vector<double> values;
  std::size_t fit_order = 1;
};

/// Least-squares polynomial of degree fit_order in xi, evaluated at xi = 0.
double zne_extrapolate(const ZneSeries& series);

struct ZneRun {
  statesim::PurityTrace mitigated;
  /// One trace per scale factor, in the order given.
  std::vector<statesim::PurityTrace> raw;
  std::vector<double> scale_factors;
};

/// Emulates folding by scaling the contraction strength to xi_j * epsilon(d)
/// (each factor gets its own shot stream) and extrapolates every instant.
ZneRun zne_run_synthetic(const statesim::AmplitudeProfile& profile, double omega,
                         std::size_t p, const statesim::NoiseSpec& noise,
                         std::span<const double> scale_factors, std::size_t fit_order = 1);

}  // namespace pied::mitigation

#endif  // PIED_MITIGATION_HPP
