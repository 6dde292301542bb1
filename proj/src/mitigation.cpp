#include "pied/mitigation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pied::mitigation {

namespace {

void require_same_length(std::span<const double> noisy, std::span<const double> reference) {
  if (noisy.size() != reference.size()) {
    throw std::invalid_argument("noisy and reference lists differ in length");
  }
  if (noisy.empty()) {
    throw std::invalid_argument("noisy and reference lists are empty");
  }
}

struct LinearFit {
  double intercept;
  double slope;
  double ssr;
};

// Ordinary least squares of y on x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = intercept + slope * x[i] - y[i];
    ssr += r * r;
  }
  return {intercept, slope, ssr};
}

constexpr double kEtaLow = -3.0;
constexpr double kEtaHigh = -1e-6;
constexpr int kEtaGrid = 600;

}  // namespace

double cfe_objective(double lambda, std::span<const double> noisy,
                     std::span<const double> reference) {
  require_same_length(noisy, reference);
  double e = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    e += std::abs(lambda * noisy[i] - reference[i]);
  }
  return e;
}

double cfe_lambda_opt(std::span<const double> noisy, std::span<const double> reference) {
  require_same_length(noisy, reference);
  std::vector<std::pair<double, double>> ratios;  // (ratio, weight)
  double total = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i] == 0.0) {
      continue;
    }
    const double w = std::abs(noisy[i]);
    ratios.emplace_back(reference[i] / noisy[i], w);
    total += w;
  }
  if (ratios.empty()) {
    throw std::invalid_argument("cfe_lambda_opt: every noisy value is zero");
  }
  std::sort(ratios.begin(), ratios.end());
  // Smallest ratio whose cumulative weight reaches half the total; the slack
  // absorbs rounding in the running sum on exact ties.
  const double half = 0.5 * total * (1.0 - 1e-12);
  double cumulative = 0.0;
  for (const auto& [ratio, weight] : ratios) {
    cumulative += weight;
    if (cumulative >= half) {
      return ratio;
    }
  }
  return ratios.back().first;
}

spectral::FourierSpectrum cfe_apply(double lambda, const spectral::FourierSpectrum& spectrum) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("cfe_apply: lambda must be positive");
  }
  spectral::FourierSpectrum out = spectrum;
  for (double& m : out.modes) {
    m *= lambda;
  }
  out.provenance.mitigation_lambda = spectrum.provenance.mitigation_lambda.value_or(1.0) * lambda;
  return out;
}

double CorrectionModel::evaluate(double d) const {
  return lambda0 + kappa * std::pow(d, eta);
}

CorrectionModel cfe_fit(std::vector<CalibrationPoint> calibration) {
  if (calibration.size() < 3) {
    throw std::invalid_argument("cfe_fit: need at least 3 calibration points");
  }
  std::sort(calibration.begin(), calibration.end(),
            [](const auto& a, const auto& b) { return a.d < b.d; });
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    if (calibration[i].d == 0 || !(calibration[i].lambda_opt > 0.0)) {
      throw std::invalid_argument("cfe_fit: dimensions and factors must be positive");
    }
    if (i > 0 && calibration[i].d == calibration[i - 1].d) {
      throw std::invalid_argument("cfe_fit: calibration dimensions must be distinct");
    }
  }

  std::vector<double> ds;
  std::vector<double> ys;
  for (const auto& c : calibration) {
    ds.push_back(static_cast<double>(c.d));
    ys.push_back(c.lambda_opt);
  }

  CorrectionModel model;
  model.calibration = calibration;

  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  if (*hi - *lo <= 1e-12 * std::max(1.0, std::abs(*hi))) {
    model.lambda0 = fit_line(ds, ys).intercept;  // mean
    model.kappa = 0.0;
    model.eta = -1.0;
    return model;
  }

  std::vector<double> basis(ds.size());
  auto fit_at = [&](double eta) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      basis[i] = std::pow(ds[i], eta);
    }
    return fit_line(basis, ys);
  };

  const double step = (kEtaHigh - kEtaLow) / kEtaGrid;
  int best = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kEtaGrid; ++i) {
    const double ssr = fit_at(kEtaLow + i * step).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best = i;
    }
  }

  double a = kEtaLow + std::max(0, best - 1) * step;
  double b = kEtaLow + std::min(kEtaGrid, best + 1) * step;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = fit_at(x1).ssr;
  double f2 = fit_at(x2).ssr;
  for (int iter = 0; iter < 200 && b - a > 1e-14; ++iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = fit_at(x1).ssr;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = fit_at(x2).ssr;
    }
  }

  // The refinement bracket includes the grid endpoints; keep whichever of
  // the refined point and the grid optimum is better.
  double eta = 0.5 * (a + b);
  if (fit_at(eta).ssr > best_ssr) {
    eta = kEtaLow + best * step;
  }
  const auto line = fit_at(eta);
  model.lambda0 = line.intercept;
  model.kappa = line.slope;
  model.eta = eta;
  return model;
}

double cfe_extrapolate(const CorrectionModel& model, std::size_t d) {
  if (!model.calibration.empty()) {
    const auto smallest =
        std::min_element(model.calibration.begin(), model.calibration.end(),
                         [](const auto& a, const auto& b) { return a.d < b.d; })
            ->d;
    if (d < smallest) {
      throw std::out_of_range("cfe_extrapolate: d = " + std::to_string(d) +
                              " lies below the calibrated range");
    }
  }
  return model.evaluate(static_cast<double>(d));
}

double zne_scale_factor(std::uint64_t total_gates, std::uint64_t folded_gates) {
  if (total_gates == 0) {
    throw std::invalid_argument("zne_scale_factor: circuit has no gates");
  }
  if (folded_gates > total_gates) {
    throw std::invalid_argument("zne_scale_factor: cannot fold more gates than exist");
  }
  return 1.0 + 2.0 * static_cast<double>(folded_gates) / static_cast<double>(total_gates);
}

double zne_extrapolate(const ZneSeries& series) {
  const auto m = series.scale_factors.size();
  if (series.values.size() != m) {
    throw std::invalid_argument("zne_extrapolate: scale factors and values differ in length");
  }
  if (m < series.fit_order + 1) {
    throw std::invalid_argument("zne_extrapolate: need at least fit_order + 1 points");
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (series.scale_factors[i] == series.scale_factors[j]) {
        throw std::invalid_argument("zne_extrapolate: scale factors must be distinct");
      }
    }
  }
  const auto rows = static_cast<Eigen::Index>(m);
  const auto cols = static_cast<Eigen::Index>(series.fit_order + 1);
  Eigen::MatrixXd vandermonde(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double power = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      vandermonde(i, j) = power;
      power *= series.scale_factors[static_cast<std::size_t>(i)];
    }
    rhs(i) = series.values[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = vandermonde.colPivHouseholderQr().solve(rhs);
  return coef(0);
}

ZneRun zne_run_synthetic(const statesim::AmplitudeProfile& profile, double omega,
                         std::size_t p, const statesim::NoiseSpec& noise,
                         std::span<const double> scale_factors, std::size_t fit_order) {
  if (scale_factors.size() < fit_order + 1 || scale_factors.size() < 2) {
    throw std::invalid_argument("zne: need at least fit_order + 1 (and two) scale factors");
  }
  const bool has_unit = std::any_of(scale_factors.begin(), scale_factors.end(),
                                    [](double x) { return std::abs(x - 1.0) < 1e-12; });
  if (!has_unit) {
    throw std::invalid_argument("zne: scale factors must include 1.0");
  }
  const double eps = noise.epsilon.at(profile.dimension());
  const double max_factor = *std::max_element(scale_factors.begin(), scale_factors.end());
  if (*std::min_element(scale_factors.begin(), scale_factors.end()) < 1.0) {
    throw std::invalid_argument("zne: scale factors must be >= 1");
  }
  if (!(eps * max_factor < 1.0)) {
    throw std::domain_error("zne: epsilon * max scale factor must stay below 1");
  }

  ZneRun run;
  run.scale_factors.assign(scale_factors.begin(), scale_factors.end());
  for (std::size_t j = 0; j < scale_factors.size(); ++j) {
    statesim::NoiseSpec scaled;
    scaled.epsilon = statesim::EpsilonModel::constant(eps * scale_factors[j]);
    scaled.shots = noise.shots;
    scaled.seed = statesim::derive_seed(noise.seed, j);
    run.raw.push_back(statesim::sample_trace(profile, omega, p, scaled));
  }

  run.mitigated.omega = omega;
  run.mitigated.times = run.raw.front().times;
  run.mitigated.provenance = {statesim::TraceSource::ZneExtrapolated, eps, noise.shots,
                              noise.seed};
  ZneSeries series;
  series.scale_factors = run.scale_factors;
  series.fit_order = fit_order;
  series.values.resize(scale_factors.size());
  for (std::size_t i = 0; i < run.mitigated.times.size(); ++i) {
    for (std::size_t j = 0; j < run.raw.size(); ++j) {
      series.values[j] = run.raw[j].gamma[i];
    }
    run.mitigated.gamma.push_back(std::clamp(zne_extrapolate(series), -1.0, 1.0));
  }
  return run;
}

}  // namespace pied::mitigation
