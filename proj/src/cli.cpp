#include "pied/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pied::cli {

namespace fs = std::filesystem;

fs::path default_output_dir() {
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    return fs::path(dir);
  }
  return fs::current_path();
}

ExperimentRecord simulate_record(const RunConfig& config) {
  config.validate();
  const auto profile = config.profile();
  const auto spec = config.noise_spec();

  ExperimentRecord rec;
  rec.config = config;
  rec.created_at = utc_timestamp();
  rec.updated_at = rec.created_at;

  if (config.repeat == 1) {
    rec.trace = statesim::sample_trace(profile, config.omega, config.p, spec);
    return rec;
  }

  std::vector<statesim::PurityTrace> batches;
  for (std::size_t b = 0; b < config.repeat; ++b) {
    auto batch_spec = spec;
    if (batch_spec && b > 0) {
      batch_spec->seed = statesim::derive_seed(config.seed, b);
    }
    batches.push_back(statesim::sample_trace(profile, config.omega, config.p, batch_spec));
  }
  statesim::PurityTrace mean = batches.front();
  const auto k = static_cast<double>(batches.size());
  mean.gamma_stderr.assign(mean.times.size(), 0.0);
  for (std::size_t i = 0; i < mean.times.size(); ++i) {
    double sum = 0.0;
    for (const auto& t : batches) {
      sum += t.gamma[i];
    }
    const double m = sum / k;
    double ss = 0.0;
    for (const auto& t : batches) {
      ss += (t.gamma[i] - m) * (t.gamma[i] - m);
    }
    mean.gamma[i] = m;
    mean.gamma_stderr[i] = std::sqrt(ss / (k - 1.0) / k);
  }
  rec.trace = std::move(mean);
  return rec;
}

void attach_spectrum(ExperimentRecord& record, bool closed_form) {
  const auto profile = record.config.profile();
  if (closed_form) {
    record.spectrum = spectral::spectrum(profile, record.config.omega, record.config.p,
                                         std::nullopt, spectral::SpectrumMode::ClosedForm);
  } else {
    if (!record.trace) {
      throw MissingInputError("record has no trace; run simulate or pass --closed-form");
    }
    record.spectrum = spectral::spectrum_from_trace(*record.trace, record.config.d);
  }
  record.bounds = bounds::profile_table(profile);
  record.mitigated_spectrum.reset();
  record.mitigation.reset();
  record.verdicts.clear();
  record.updated_at = utc_timestamp();
}

double max_closed_form_deviation(const ExperimentRecord& record) {
  if (!record.spectrum) {
    throw MissingInputError("record has no spectrum");
  }
  const auto profile = record.config.profile();
  double worst = 0.0;
  for (int n = 2; n <= record.spectrum->last_n(); ++n) {
    worst = std::max(worst,
                     std::abs(record.spectrum->at(n) - spectral::fourier_mode_closed(profile, n)));
  }
  return worst;
}

double record_lambda_opt(const ExperimentRecord& record) {
  if (!record.spectrum) {
    throw MissingInputError("record has no spectrum; run spectrum first");
  }
  const auto profile = record.config.profile();
  std::vector<double> reference;
  for (int n = 2; n <= record.spectrum->last_n(); ++n) {
    reference.push_back(spectral::fourier_mode_closed(profile, n));
  }
  return mitigation::cfe_lambda_opt(record.spectrum->modes, reference);
}

void apply_mitigation(ExperimentRecord& record, double lambda, MitigationInfo info) {
  if (!record.spectrum) {
    throw MissingInputError("record has no spectrum; run spectrum first");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("correction factor must be positive");
  }
  record.mitigated_spectrum = mitigation::cfe_apply(lambda, *record.spectrum);
  info.lambda_used = lambda;
  record.mitigation = std::move(info);
  record.verdicts.clear();
  record.updated_at = utc_timestamp();
}

std::vector<bounds::Verdict> classify_record(ExperimentRecord& record, double tolerance) {
  const auto& spec = record.mitigated_spectrum ? record.mitigated_spectrum : record.spectrum;
  if (!spec) {
    throw MissingInputError("record has no spectrum; run spectrum first");
  }
  if (record.config.state != statesim::StateFamily::Uniform) {
    throw ConfigError("classification needs the composite bound, which is only derived for "
                      "the uniform state");
  }
  if (!(tolerance >= 0.0 && tolerance < 1.0)) {
    throw ConfigError("tolerance must lie in [0, 1)");
  }
  const auto table = bounds::uniform_table(record.config.d);
  record.bounds = table;
  record.verdicts.clear();
  for (int n = 2; n <= spec->last_n(); ++n) {
    record.verdicts.push_back(bounds::classify(n, spec->at(n), table, tolerance));
  }
  record.config.tolerance = tolerance;
  record.updated_at = utc_timestamp();
  return record.verdicts;
}

ExperimentRecord zne_record(const RunConfig& config, std::span<const double> scale_factors,
                            std::size_t fit_order) {
  config.validate();
  if (!config.noise) {
    throw ConfigError("zne needs a noise model (--noise-eps or --noise-model)");
  }
  if (scale_factors.size() < 2) {
    throw ConfigError("zne needs at least two scale factors");
  }
  const auto spec = config.noise_spec();
  mitigation::ZneRun run;
  try {
    run = mitigation::zne_run_synthetic(config.profile(), config.omega, config.p, *spec,
                                        scale_factors, fit_order);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  ExperimentRecord rec;
  rec.config = config;
  rec.trace = std::move(run.mitigated);
  rec.zne = ZneInfo{run.scale_factors, fit_order, std::move(run.raw)};
  rec.created_at = utc_timestamp();
  rec.updated_at = rec.created_at;
  return rec;
}

namespace {

// Raw flag values; presence is checked through the option handles.
struct ConfigFlags {
  std::size_t d = 4;
  double omega = kDefaultOmega;
  std::size_t p = 30;
  std::string state = "uniform";
  std::uint64_t shots = kDefaultShots;
  double noise_eps = 0.0;
  std::string noise_model;
  std::uint64_t seed = 0;
  std::size_t repeat = 1;

  CLI::Option* shots_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
  CLI::Option* model_opt = nullptr;
};

void add_config_flags(CLI::App& app, ConfigFlags& f, bool with_repeat) {
  app.add_option("--d", f.d, "Local dimension (power of two)")->capture_default_str();
  app.add_option("--omega", f.omega, "Coupling frequency")->capture_default_str();
  app.add_option("--p", f.p, "Number of Simpson subintervals (even)")->capture_default_str();
  app.add_option("--state", f.state, "uniform | spin-coherent")->capture_default_str();
  f.shots_opt = app.add_option("--shots", f.shots,
                               "Shots per instant; 0 for exact sampling (default 8192 when "
                               "noise is on, exact otherwise)");
  f.eps_opt = app.add_option("--noise-eps", f.noise_eps, "Constant contraction strength");
  f.model_opt = app.add_option("--noise-model", f.noise_model,
                               "Power-law contraction: lambda0,kappa,eta");
  app.add_option("--seed", f.seed, "RNG seed")->capture_default_str();
  if (with_repeat) {
    app.add_option("--repeat", f.repeat, "Independent batches to average")
        ->capture_default_str();
  }
}

statesim::EpsilonModel parse_noise_model(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ConfigError("--noise-model expects lambda0,kappa,eta (got '" + text + "')");
    }
  }
  if (parts.size() != 3) {
    throw ConfigError("--noise-model expects lambda0,kappa,eta (got '" + text + "')");
  }
  return statesim::EpsilonModel::power_law(parts[0], parts[1], parts[2]);
}

RunConfig to_config(const ConfigFlags& f) {
  RunConfig c;
  c.d = f.d;
  c.omega = f.omega;
  c.p = f.p;
  try {
    c.state = statesim::parse_state_family(f.state);
  } catch (const std::exception&) {
    throw ConfigError("unknown state '" + f.state + "' (uniform | spin-coherent)");
  }
  c.seed = f.seed;
  c.repeat = f.repeat;
  if (f.eps_opt->count() > 0 && f.model_opt->count() > 0) {
    throw ConfigError("--noise-eps and --noise-model are mutually exclusive");
  }
  try {
    if (f.eps_opt->count() > 0) {
      c.noise = statesim::EpsilonModel::constant(f.noise_eps);
    } else if (f.model_opt->count() > 0) {
      c.noise = parse_noise_model(f.noise_model);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (f.shots_opt->count() > 0) {
    if (f.shots > 0) {
      c.shots = f.shots;
    }
  } else if (c.noise) {
    c.shots = kDefaultShots;
  }
  c.validate();
  return c;
}

fs::path output_path(const std::string& flag, const std::string& fallback_name) {
  return flag.empty() ? default_output_dir() / fallback_name : fs::path(flag);
}

std::string record_name(const RunConfig& c, const char* kind) {
  return std::string(kind) + "_d" + std::to_string(c.d) + ".json";
}

void write_csv_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write " + path.string());
  }
  body(os);
}

std::string shots_text(const std::optional<std::uint64_t>& shots) {
  return shots ? std::to_string(*shots) : std::string("exact");
}

// Record path either given or the one the command just read.
fs::path save_target(const std::string& out, const std::string& record_path,
                     const std::string& fallback) {
  if (!out.empty()) {
    return out;
  }
  if (!record_path.empty()) {
    return record_path;
  }
  return default_output_dir() / fallback;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime identification from entanglement dynamics of two coupled qudits", "pied"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with flag values");

  // simulate
  ConfigFlags sim_flags;
  std::string sim_out;
  std::string sim_csv;
  auto* sim = app.add_subcommand("simulate", "Sample a purity trace");
  add_config_flags(*sim, sim_flags, true);
  sim->add_option("--out", sim_out, "Record path");
  sim->add_option("--csv", sim_csv, "Also export the trace as CSV");

  // spectrum
  ConfigFlags spec_flags;
  std::string spec_record;
  bool spec_closed = false;
  std::string spec_out;
  std::string spec_csv;
  auto* spec = app.add_subcommand("spectrum", "Fourier modes of a trace (or closed form)");
  add_config_flags(*spec, spec_flags, false);
  spec->add_option("--record", spec_record, "Input record");
  spec->add_flag("--closed-form", spec_closed, "Use the exact divisor-sum modes");
  spec->add_option("--out", spec_out, "Record path (default: overwrite the input)");
  spec->add_option("--csv", spec_csv, "Spectrum CSV path");

  // calibrate
  std::vector<std::string> cal_records;
  std::vector<std::string> cal_points;
  std::string cal_out;
  auto* cal = app.add_subcommand("calibrate", "Fit the correction model");
  cal->add_option("--record", cal_records, "Noisy records with spectra (repeatable)");
  cal->add_option("--point", cal_points, "Injected calibration point d:lambda (repeatable)");
  cal->add_option("--out", cal_out, "Model path");

  // mitigate
  std::string mit_record;
  std::string mit_model;
  double mit_lambda = 1.0;
  std::string mit_out;
  std::string mit_csv;
  auto* mit = app.add_subcommand("mitigate", "Rescale a noisy spectrum");
  mit->add_option("--record", mit_record, "Input record")->required();
  auto* mit_model_opt = mit->add_option("--model", mit_model, "Correction model file");
  auto* mit_lambda_opt = mit->add_option("--lambda", mit_lambda, "Explicit correction factor");
  mit_model_opt->excludes(mit_lambda_opt);
  mit->add_option("--out", mit_out, "Record path (default: overwrite the input)");
  mit->add_option("--csv", mit_csv, "Spectrum CSV path");

  // classify
  std::string cls_record;
  double cls_tol = bounds::kDefaultTolerance;
  std::string cls_out;
  std::string cls_csv;
  auto* cls = app.add_subcommand("classify", "Label every n in [2, 2(d-1)]");
  cls->add_option("--record", cls_record, "Input record")->required();
  auto* cls_tol_opt = cls->add_option("--tolerance", cls_tol, "Relative band around B and P");
  cls->add_option("--out", cls_out, "Record path (default: overwrite the input)");
  cls->add_option("--csv", cls_csv, "Verdicts CSV path");

  // zne
  ConfigFlags zne_flags;
  std::vector<double> zne_factors{1.0, 2.0, 3.0};
  std::size_t zne_order = 1;
  std::string zne_out;
  std::string zne_csv;
  auto* zne = app.add_subcommand("zne", "Zero-noise extrapolated trace");
  add_config_flags(*zne, zne_flags, false);
  zne->add_option("--scale-factors", zne_factors, "Noise scale factors, must include 1")
      ->delimiter(',')
      ->capture_default_str();
  zne->add_option("--fit-order", zne_order, "Polynomial degree")->capture_default_str();
  zne->add_option("--out", zne_out, "Record path");
  zne->add_option("--csv", zne_csv, "Also export the trace as CSV");

  // bounds
  std::size_t bnd_d = 4;
  std::string bnd_csv;
  auto* bnd = app.add_subcommand("bounds", "Uniform-state bounds and thresholds");
  bnd->add_option("--d", bnd_d, "Local dimension (power of two)")->capture_default_str();
  bnd->add_option("--csv", bnd_csv, "Bounds CSV path");

  std::vector<std::string> argv_storage;
  argv_storage.emplace_back("pied");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) {
    argv.push_back(a.c_str());
  }

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfigError;
    }

    out << std::setprecision(10);

    if (*sim) {
      const auto config = to_config(sim_flags);
      const auto rec = simulate_record(config);
      const auto path = output_path(sim_out, record_name(config, "record"));
      write_record(path, rec);
      if (!sim_csv.empty()) {
        write_csv_file(sim_csv, [&](std::ostream& os) { write_trace_csv(os, *rec.trace); });
      }
      out << "simulate: d=" << config.d << " p=" << config.p
          << " shots=" << shots_text(config.shots) << " gamma_first=" << rec.trace->gamma.front()
          << " gamma_last=" << rec.trace->gamma.back() << " -> " << path.string() << '\n';
      return kExitOk;
    }

    if (*spec) {
      ExperimentRecord rec;
      if (!spec_record.empty()) {
        rec = read_record(spec_record);
      } else if (spec_closed) {
        rec.config = to_config(spec_flags);
        rec.created_at = utc_timestamp();
      } else {
        throw MissingInputError("spectrum needs --record (with a trace) or --closed-form");
      }
      attach_spectrum(rec, spec_closed);
      const auto path = save_target(spec_out, spec_record, record_name(rec.config, "spectrum"));
      write_record(path, rec);
      const fs::path csv_path =
          spec_csv.empty() ? fs::path(path).replace_extension(".csv") : fs::path(spec_csv);
      write_csv_file(csv_path, [&](std::ostream& os) { write_spectrum_csv(os, rec); });
      out << "spectrum: d=" << rec.config.d << " modes=" << rec.spectrum->modes.size()
          << " source=" << spectral::to_string(rec.spectrum->provenance.source)
          << " max_deviation=" << max_closed_form_deviation(rec) << " -> " << path.string()
          << ", " << csv_path.string() << '\n';
      return kExitOk;
    }

    if (*cal) {
      std::vector<mitigation::CalibrationPoint> points;
      std::string fingerprint;
      for (const auto& p : cal_records) {
        const auto rec = read_record(p);
        const double lambda = record_lambda_opt(rec);
        points.push_back({rec.config.d, lambda});
        if (fingerprint.empty()) {
          fingerprint = rec.config.noise_fingerprint();
        } else if (fingerprint != rec.config.noise_fingerprint()) {
          err << "warning: calibration records use different noise settings\n";
        }
      }
      for (const auto& text : cal_points) {
        const auto colon = text.find(':');
        try {
          if (colon == std::string::npos) {
            throw std::invalid_argument(text);
          }
          points.push_back({static_cast<std::size_t>(std::stoull(text.substr(0, colon))),
                            std::stod(text.substr(colon + 1))});
        } catch (const std::exception&) {
          throw ConfigError("--point expects d:lambda (got '" + text + "')");
        }
        if (fingerprint.empty()) {
          fingerprint = "injected";
        }
      }
      std::vector<std::size_t> dims;
      for (const auto& pt : points) {
        dims.push_back(pt.d);
      }
      std::sort(dims.begin(), dims.end());
      if (std::unique(dims.begin(), dims.end()) - dims.begin() < 3) {
        throw ConfigError("calibration needs at least 3 distinct dimensions");
      }
      mitigation::CorrectionModel model;
      try {
        model = mitigation::cfe_fit(points);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const auto path = output_path(cal_out, "correction_model.json");
      write_model(path, model, fingerprint);
      for (const auto& pt : model.calibration) {
        out << "calibrate: d=" << pt.d << " lambda_opt=" << pt.lambda_opt
            << " fitted=" << model.evaluate(static_cast<double>(pt.d)) << '\n';
      }
      out << "calibrate: lambda0=" << model.lambda0 << " kappa=" << model.kappa
          << " eta=" << model.eta << " -> " << path.string() << '\n';
      return kExitOk;
    }

    if (*mit) {
      auto rec = read_record(mit_record);
      MitigationInfo info;
      double lambda = 1.0;
      if (mit_lambda_opt->count() > 0) {
        lambda = mit_lambda;
        info.source = "explicit";
      } else if (mit_model_opt->count() > 0) {
        const auto model = read_model(mit_model);
        try {
          lambda = mitigation::cfe_extrapolate(model, rec.config.d);
        } catch (const std::out_of_range& e) {
          throw ConfigError(e.what());
        }
        info.source = "model";
        info.model = model;
      } else {
        throw MissingInputError("mitigate needs --model or --lambda");
      }
      apply_mitigation(rec, lambda, std::move(info));
      const auto path = save_target(mit_out, mit_record, record_name(rec.config, "record"));
      write_record(path, rec);
      const fs::path csv_path =
          mit_csv.empty() ? fs::path(path).replace_extension(".csv") : fs::path(mit_csv);
      write_csv_file(csv_path, [&](std::ostream& os) { write_spectrum_csv(os, rec); });
      out << "mitigate: d=" << rec.config.d << " lambda=" << lambda << " -> " << path.string()
          << ", " << csv_path.string() << '\n';
      return kExitOk;
    }

    if (*cls) {
      auto rec = read_record(cls_record);
      const double tol = cls_tol_opt->count() > 0 ? cls_tol : rec.config.tolerance;
      const auto verdicts = classify_record(rec, tol);
      write_verdicts_csv(out, verdicts);
      const auto path = save_target(cls_out, cls_record, record_name(rec.config, "record"));
      write_record(path, rec);
      if (!cls_csv.empty()) {
        write_csv_file(cls_csv, [&](std::ostream& os) { write_verdicts_csv(os, verdicts); });
      }
      return kExitOk;
    }

    if (*zne) {
      const auto config = to_config(zne_flags);
      const auto rec = zne_record(config, zne_factors, zne_order);
      const auto path = output_path(zne_out, record_name(config, "zne"));
      write_record(path, rec);
      if (!zne_csv.empty()) {
        write_csv_file(zne_csv, [&](std::ostream& os) { write_trace_csv(os, *rec.trace); });
      }
      out << "zne: d=" << config.d << " factors=" << rec.zne->scale_factors.size()
          << " order=" << zne_order << " gamma_first=" << rec.trace->gamma.front()
          << " gamma_last=" << rec.trace->gamma.back() << " -> " << path.string() << '\n';
      return kExitOk;
    }

    if (*bnd) {
      if (bnd_d < 4 || !is_power_of_two(bnd_d)) {
        throw ConfigError("bounds needs d a power of two >= 4");
      }
      const auto table = bounds::uniform_table(bnd_d);
      out << "bounds: d=" << bnd_d << " n_th2=" << table.n_th2 << " n_th3=" << table.n_th3
          << " k_minus=" << bounds::k_minus(static_cast<double>(bnd_d)) << " k_set={";
      for (std::size_t i = 0; i < table.k_set.size(); ++i) {
        out << (i ? "," : "") << table.k_set[i];
      }
      out << "}\n";
      if (!bnd_csv.empty()) {
        write_csv_file(bnd_csv, [&](std::ostream& os) {
          os << "n,B_n,P_n,B2_n,B3_n\n" << std::setprecision(17);
          for (int n = 2; n <= static_cast<int>(2 * (bnd_d - 1)); ++n) {
            const auto i = static_cast<std::size_t>(n - 2);
            os << n << ',' << table.b[i] << ',' << table.p[i] << ',' << table.b2[i] << ','
               << table.b3[i] << '\n';
          }
        });
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const MissingInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace pied::cli
