// Run configuration, experiment records and their JSON / CSV forms.

#ifndef PIED_RECORD_HPP
#define PIED_RECORD_HPP

#include "pied/bounds.hpp"
#include "pied/mitigation.hpp"
#include "pied/spectral.hpp"
#include "pied/statesim.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pied::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kDefaultOmega = 0.1;
inline constexpr std::uint64_t kDefaultShots = 8192;

/// Bad flags, bad config values or inconsistent inputs (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required file or record section is absent (exit code 3).
class MissingInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::size_t d = 4;
  double omega = kDefaultOmega;
  std::size_t p = 30;
  statesim::StateFamily state = statesim::StateFamily::Uniform;
  /// Absent means exact (shot-free) sampling.
  std::optional<std::uint64_t> shots;
  /// Absent means no contraction noise.
  std::optional<statesim::EpsilonModel> noise;
  std::uint64_t seed = 0;
  std::size_t repeat = 1;
  double tolerance = bounds::kDefaultTolerance;

  /// Throws ConfigError.
  void validate() const;
  /// Present whenever noise or shots are configured.
  std::optional<statesim::NoiseSpec> noise_spec() const;
  std::string noise_fingerprint() const;
  statesim::AmplitudeProfile profile() const;
};

struct MitigationInfo {
  double lambda_used = 1.0;
  /// "explicit", "model" or "fitted".
  std::string source;
  std::optional<mitigation::CorrectionModel> model;
};

struct ZneInfo {
  std::vector<double> scale_factors;
  std::size_t fit_order = 1;
  std::vector<statesim::PurityTrace> raw;
};

struct ExperimentRecord {
  int schema_version = kSchemaVersion;
  RunConfig config;
  std::optional<statesim::PurityTrace> trace;
  std::optional<ZneInfo> zne;
  std::optional<spectral::FourierSpectrum> spectrum;
  std::optional<spectral::FourierSpectrum> mitigated_spectrum;
  std::optional<bounds::BoundsTable> bounds;
  std::optional<MitigationInfo> mitigation;
  std::vector<bounds::Verdict> verdicts;
  std::string created_at;
  std::string updated_at;
};

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const statesim::PurityTrace& t);
statesim::PurityTrace trace_from_json(const nlohmann::json& j);

nlohmann::json to_json(const spectral::FourierSpectrum& s);
spectral::FourierSpectrum spectrum_from_json(const nlohmann::json& j);

nlohmann::json to_json(const bounds::BoundsTable& b);
bounds::BoundsTable bounds_from_json(const nlohmann::json& j);

nlohmann::json to_json(const mitigation::CorrectionModel& m);
mitigation::CorrectionModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const bounds::Verdict& v);
bounds::Verdict verdict_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const nlohmann::json& j);

void write_record(const std::filesystem::path& path, const ExperimentRecord& r);
/// Throws MissingInputError if the file is absent, ConfigError if malformed.
ExperimentRecord read_record(const std::filesystem::path& path);

void write_model(const std::filesystem::path& path, const mitigation::CorrectionModel& m,
                 const std::string& noise_fingerprint);
mitigation::CorrectionModel read_model(const std::filesystem::path& path);

/// Header: n,alpha_raw,alpha_mitigated,B_n,P_n,region,label,alpha_closed,deviation
/// Empty cells mark values that are not available.
void write_spectrum_csv(std::ostream& os, const ExperimentRecord& r);

/// Header: t,gamma,gamma_stderr
void write_trace_csv(std::ostream& os, const statesim::PurityTrace& t);

/// Header: n,region,evidence,witness,subinterval,label
void write_verdicts_csv(std::ostream& os, const std::vector<bounds::Verdict>& verdicts);

}  // namespace pied::cli

#endif  // PIED_RECORD_HPP
