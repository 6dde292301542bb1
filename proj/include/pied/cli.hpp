// Command-line front end. Every subcommand is also exposed as a plain
// function over records so the pipeline can be driven in-process.

#ifndef PIED_CLI_HPP
#define PIED_CLI_HPP

#include "pied/record.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pied::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitMissingInput = 3,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PIED_OUTPUT_DIR";

std::filesystem::path default_output_dir();

/// Fresh record holding the sampled trace. With repeat > 1 the trace is the
/// per-instant mean over independent batches, with standard errors.
ExperimentRecord simulate_record(const RunConfig& config);

/// Stores a closed-form or numeric (from the record's trace) spectrum and
/// the matching bounds table; clears downstream mitigation and verdicts.
void attach_spectrum(ExperimentRecord& record, bool closed_form);

/// Largest |alpha_n - closed-form alpha_n| over the record's raw spectrum.
double max_closed_form_deviation(const ExperimentRecord& record);

/// L1-optimal factor of the record's raw spectrum against the closed form.
double record_lambda_opt(const ExperimentRecord& record);

void apply_mitigation(ExperimentRecord& record, double lambda, MitigationInfo info);

/// One verdict per n in [2, 2(d-1)] using the mitigated spectrum when
/// present. Requires a uniform-state record.
std::vector<bounds::Verdict> classify_record(ExperimentRecord& record, double tolerance);

ExperimentRecord zne_record(const RunConfig& config, std::span<const double> scale_factors,
                            std::size_t fit_order);

/// Entry point; args exclude the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace pied::cli

#endif  // PIED_CLI_HPP
