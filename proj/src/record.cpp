#include "pied/record.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace pied::cli {

using nlohmann::json;

namespace {

// Non-finite values (unbounded thresholds) are stored as null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<T>();
}

void write_cell(std::ostream& os, double x) {
  if (std::isfinite(x)) {
    os << std::setprecision(17) << x;
  }
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::validate() const {
  if (d < 2 || !is_power_of_two(d)) {
    throw ConfigError("d must be a power of two >= 2 (got " + std::to_string(d) + ")");
  }
  if (p < 2 || p % 2 != 0) {
    throw ConfigError("p must be even (composite Simpson needs an even number of "
                      "subintervals), got " + std::to_string(p));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ConfigError("omega must be positive");
  }
  if (shots && *shots == 0) {
    throw ConfigError("shots must be >= 1");
  }
  if (repeat == 0) {
    throw ConfigError("repeat must be >= 1");
  }
  if (!(tolerance >= 0.0 && tolerance < 1.0)) {
    throw ConfigError("tolerance must lie in [0, 1)");
  }
  if (state == statesim::StateFamily::Custom) {
    throw ConfigError("state must be 'uniform' or 'spin-coherent'");
  }
  if (noise) {
    try {
      (void)noise->at(d);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
}

std::optional<statesim::NoiseSpec> RunConfig::noise_spec() const {
  if (!noise && !shots) {
    return std::nullopt;
  }
  statesim::NoiseSpec spec;
  spec.epsilon = noise.value_or(statesim::EpsilonModel::constant(0.0));
  spec.shots = shots;
  spec.seed = seed;
  return spec;
}

std::string RunConfig::noise_fingerprint() const {
  const auto spec = noise_spec();
  return spec ? spec->fingerprint() : std::string("none");
}

statesim::AmplitudeProfile RunConfig::profile() const { return statesim::prepare(state, d); }

json to_json(const RunConfig& c) {
  json noise = nullptr;
  if (c.noise) {
    if (c.noise->kind() == statesim::EpsilonModel::Kind::Constant) {
      noise = {{"kind", "constant"}, {"epsilon", c.noise->value()}};
    } else {
      noise = {{"kind", "power-law"},
               {"lambda0", c.noise->lambda0()},
               {"kappa", c.noise->kappa()},
               {"eta", c.noise->eta()}};
    }
  }
  return {{"d", c.d},
          {"omega", c.omega},
          {"p", c.p},
          {"state_family", std::string(statesim::to_string(c.state))},
          {"shots", optional_json(c.shots)},
          {"noise", noise},
          {"noise_fingerprint", c.noise_fingerprint()},
          {"seed", c.seed},
          {"repeat", c.repeat},
          {"tolerance", c.tolerance}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.d = j.at("d").get<std::size_t>();
  c.omega = j.at("omega").get<double>();
  c.p = j.at("p").get<std::size_t>();
  c.state = statesim::parse_state_family(j.at("state_family").get<std::string>());
  c.shots = optional_from<std::uint64_t>(j, "shots");
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& n = j.at("noise");
    if (n.at("kind") == "constant") {
      c.noise = statesim::EpsilonModel::constant(n.at("epsilon").get<double>());
    } else {
      c.noise = statesim::EpsilonModel::power_law(
          n.at("lambda0").get<double>(), n.at("kappa").get<double>(), n.at("eta").get<double>());
    }
  }
  c.seed = j.at("seed").get<std::uint64_t>();
  c.repeat = j.value("repeat", std::size_t{1});
  c.tolerance = j.value("tolerance", bounds::kDefaultTolerance);
  return c;
}

// ---------------------------------------------------------------------------
// Traces and spectra

json to_json(const statesim::PurityTrace& t) {
  json j = {{"omega", t.omega},
            {"times", t.times},
            {"gamma", t.gamma},
            {"provenance",
             {{"source", std::string(statesim::to_string(t.provenance.source))},
              {"epsilon", t.provenance.epsilon},
              {"shots", optional_json(t.provenance.shots)},
              {"seed", t.provenance.seed}}}};
  if (!t.gamma_stderr.empty()) {
    j["gamma_stderr"] = t.gamma_stderr;
  }
  return j;
}

statesim::PurityTrace trace_from_json(const json& j) {
  statesim::PurityTrace t;
  t.omega = j.at("omega").get<double>();
  t.times = j.at("times").get<std::vector<double>>();
  t.gamma = j.at("gamma").get<std::vector<double>>();
  if (j.contains("gamma_stderr")) {
    t.gamma_stderr = j.at("gamma_stderr").get<std::vector<double>>();
  }
  const auto& p = j.at("provenance");
  t.provenance.source = statesim::parse_trace_source(p.at("source").get<std::string>());
  t.provenance.epsilon = p.at("epsilon").get<double>();
  t.provenance.shots = optional_from<std::uint64_t>(p, "shots");
  t.provenance.seed = p.at("seed").get<std::uint64_t>();
  if (t.times.size() != t.gamma.size()) {
    throw ConfigError("trace: times and gamma differ in length");
  }
  return t;
}

json to_json(const spectral::FourierSpectrum& s) {
  json modes = json::array();
  for (int n = spectral::FourierSpectrum::first_n; n <= s.last_n(); ++n) {
    modes.push_back({{"n", n}, {"alpha", s.at(n)}});
  }
  return {{"d", s.d},
          {"omega", s.omega},
          {"modes", modes},
          {"provenance",
           {{"source", std::string(spectral::to_string(s.provenance.source))},
            {"partitions", s.provenance.partitions},
            {"epsilon", s.provenance.epsilon},
            {"shots", optional_json(s.provenance.shots)},
            {"mitigation_lambda", optional_json(s.provenance.mitigation_lambda)}}}};
}

spectral::FourierSpectrum spectrum_from_json(const json& j) {
  spectral::FourierSpectrum s;
  s.d = j.at("d").get<std::size_t>();
  s.omega = j.at("omega").get<double>();
  for (const auto& m : j.at("modes")) {
    if (m.at("n").get<int>() != spectral::FourierSpectrum::first_n + static_cast<int>(s.modes.size())) {
      throw ConfigError("spectrum: modes must be contiguous from n = 2");
    }
    s.modes.push_back(m.at("alpha").get<double>());
  }
  if (s.modes.size() != 2 * s.d - 3) {
    throw ConfigError("spectrum: expected modes for n in [2, 2(d-1)]");
  }
  const auto& p = j.at("provenance");
  s.provenance.source = spectral::parse_spectrum_source(p.at("source").get<std::string>());
  s.provenance.partitions = p.at("partitions").get<std::size_t>();
  s.provenance.epsilon = p.at("epsilon").get<double>();
  s.provenance.shots = optional_from<std::uint64_t>(p, "shots");
  s.provenance.mitigation_lambda = optional_from<double>(p, "mitigation_lambda");
  return s;
}

json to_json(const bounds::BoundsTable& b) {
  return {{"d", b.d},
          {"state_family", std::string(statesim::to_string(b.family))},
          {"n_th2", number(b.n_th2)},
          {"n_th3", number(b.n_th3)},
          {"k_set", b.k_set},
          {"B", b.b},
          {"P", b.p}};
}

bounds::BoundsTable bounds_from_json(const json& j) {
  bounds::BoundsTable b;
  b.d = j.at("d").get<std::size_t>();
  b.family = statesim::parse_state_family(j.at("state_family").get<std::string>());
  b.n_th2 = number_or_inf(j.at("n_th2"));
  b.n_th3 = number_or_inf(j.at("n_th3"));
  b.k_set = j.at("k_set").get<std::vector<int>>();
  b.b = j.at("B").get<std::vector<double>>();
  b.p = j.at("P").get<std::vector<double>>();
  return b;
}

json to_json(const mitigation::CorrectionModel& m) {
  json cal = json::array();
  for (const auto& c : m.calibration) {
    cal.push_back({{"d", c.d}, {"lambda_opt", c.lambda_opt}});
  }
  return {{"lambda0", m.lambda0}, {"kappa", m.kappa}, {"eta", m.eta}, {"calibration", cal}};
}

mitigation::CorrectionModel model_from_json(const json& j) {
  mitigation::CorrectionModel m;
  m.lambda0 = j.at("lambda0").get<double>();
  m.kappa = j.at("kappa").get<double>();
  m.eta = j.at("eta").get<double>();
  for (const auto& c : j.at("calibration")) {
    m.calibration.push_back({c.at("d").get<std::size_t>(), c.at("lambda_opt").get<double>()});
  }
  return m;
}

json to_json(const bounds::Verdict& v) {
  return {{"n", v.n},
          {"label", std::string(bounds::to_string(v.label))},
          {"evidence", std::string(bounds::to_string(v.evidence))},
          {"witness", optional_json(v.witness)},
          {"region", std::string(bounds::to_string(v.region))},
          {"subinterval", std::string(numtheory::to_string(v.subinterval))}};
}

bounds::Verdict verdict_from_json(const json& j) {
  bounds::Verdict v;
  v.n = j.at("n").get<int>();
  v.label = bounds::parse_label(j.at("label").get<std::string>());
  v.evidence = bounds::parse_evidence(j.at("evidence").get<std::string>());
  v.witness = optional_from<std::uint64_t>(j, "witness");
  v.region = bounds::parse_region(j.at("region").get<std::string>());
  const auto sub = j.at("subinterval").get<std::string>();
  using numtheory::Subinterval;
  v.subinterval = sub == "I1"   ? Subinterval::I1
                  : sub == "I2" ? Subinterval::I2
                  : sub == "I3" ? Subinterval::I3
                                : Subinterval::Endpoint;
  return v;
}

// ---------------------------------------------------------------------------
// Records

json to_json(const ExperimentRecord& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["config"] = to_json(r.config);
  j["trace"] = r.trace ? to_json(*r.trace) : json(nullptr);
  if (r.zne) {
    json raw = json::array();
    for (const auto& t : r.zne->raw) {
      raw.push_back(to_json(t));
    }
    j["zne"] = {{"scale_factors", r.zne->scale_factors},
                {"fit_order", r.zne->fit_order},
                {"raw_traces", raw}};
  } else {
    j["zne"] = nullptr;
  }
  j["spectrum"] = r.spectrum ? to_json(*r.spectrum) : json(nullptr);
  j["mitigated_spectrum"] = r.mitigated_spectrum ? to_json(*r.mitigated_spectrum) : json(nullptr);
  j["bounds"] = r.bounds ? to_json(*r.bounds) : json(nullptr);
  if (r.mitigation) {
    j["mitigation"] = {{"lambda_used", r.mitigation->lambda_used},
                       {"source", r.mitigation->source},
                       {"model", r.mitigation->model ? to_json(*r.mitigation->model)
                                                     : json(nullptr)}};
  } else {
    j["mitigation"] = nullptr;
  }
  j["verdicts"] = json::array();
  for (const auto& v : r.verdicts) {
    j["verdicts"].push_back(to_json(v));
  }
  j["timestamps"] = {{"created", r.created_at}, {"updated", r.updated_at}};
  return j;
}

ExperimentRecord record_from_json(const json& j) {
  ExperimentRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw ConfigError("unsupported record schema_version " + std::to_string(r.schema_version));
  }
  r.config = config_from_json(j.at("config"));
  if (!j.at("trace").is_null()) {
    r.trace = trace_from_json(j.at("trace"));
  }
  if (j.contains("zne") && !j.at("zne").is_null()) {
    ZneInfo z;
    z.scale_factors = j.at("zne").at("scale_factors").get<std::vector<double>>();
    z.fit_order = j.at("zne").at("fit_order").get<std::size_t>();
    for (const auto& t : j.at("zne").at("raw_traces")) {
      z.raw.push_back(trace_from_json(t));
    }
    r.zne = std::move(z);
  }
  if (!j.at("spectrum").is_null()) {
    r.spectrum = spectrum_from_json(j.at("spectrum"));
  }
  if (!j.at("mitigated_spectrum").is_null()) {
    r.mitigated_spectrum = spectrum_from_json(j.at("mitigated_spectrum"));
  }
  if (!j.at("bounds").is_null()) {
    r.bounds = bounds_from_json(j.at("bounds"));
  }
  if (!j.at("mitigation").is_null()) {
    const auto& m = j.at("mitigation");
    MitigationInfo info;
    info.lambda_used = m.at("lambda_used").get<double>();
    info.source = m.at("source").get<std::string>();
    if (!m.at("model").is_null()) {
      info.model = model_from_json(m.at("model"));
    }
    r.mitigation = std::move(info);
  }
  for (const auto& v : j.at("verdicts")) {
    r.verdicts.push_back(verdict_from_json(v));
  }
  r.created_at = j.at("timestamps").at("created").get<std::string>();
  r.updated_at = j.at("timestamps").at("updated").get<std::string>();
  return r;
}

void write_record(const std::filesystem::path& path, const ExperimentRecord& r) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write " + path.string());
  }
  os << to_json(r).dump(2) << '\n';
}

namespace {

json read_json(const std::filesystem::path& path, const char* what) {
  std::ifstream is(path);
  if (!is) {
    throw MissingInputError(std::string(what) + " not found: " + path.string());
  }
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + " " + path.string() + ": " + e.what());
  }
}

}  // namespace

ExperimentRecord read_record(const std::filesystem::path& path) {
  const auto j = read_json(path, "record");
  try {
    return record_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("malformed record " + path.string() + ": " + e.what());
  }
}

void write_model(const std::filesystem::path& path, const mitigation::CorrectionModel& m,
                 const std::string& noise_fingerprint) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path);
  if (!os) {
    throw ConfigError("cannot write " + path.string());
  }
  json j = to_json(m);
  j["schema_version"] = kSchemaVersion;
  j["noise_fingerprint"] = noise_fingerprint;
  os << j.dump(2) << '\n';
}

mitigation::CorrectionModel read_model(const std::filesystem::path& path) {
  const auto j = read_json(path, "model");
  try {
    return model_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("malformed model " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

void write_spectrum_csv(std::ostream& os, const ExperimentRecord& r) {
  const auto& primary = r.spectrum ? r.spectrum : r.mitigated_spectrum;
  if (!primary) {
    throw MissingInputError("record has no spectrum");
  }
  const auto profile = r.config.profile();
  const std::size_t d = primary->d;
  const auto table = r.bounds ? *r.bounds : bounds::profile_table(profile);

  os << "n,alpha_raw,alpha_mitigated,B_n,P_n,region,label,alpha_closed,deviation\n";
  for (int n = 2; n <= static_cast<int>(2 * (d - 1)); ++n) {
    const double closed = spectral::fourier_mode_closed(profile, n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double raw = r.spectrum ? r.spectrum->at(n) : nan;
    const double mitigated = r.mitigated_spectrum ? r.mitigated_spectrum->at(n) : nan;
    os << n << ',';
    write_cell(os, raw);
    os << ',';
    write_cell(os, mitigated);
    os << ',';
    write_cell(os, table.b_at(n));
    os << ',';
    if (table.has_composite_bound()) {
      write_cell(os, table.p_at(n));
    }
    os << ',';
    const auto v = std::find_if(r.verdicts.begin(), r.verdicts.end(),
                                [n](const auto& x) { return x.n == n; });
    if (v != r.verdicts.end()) {
      os << bounds::to_string(v->region) << ',' << bounds::to_string(v->label);
    } else {
      os << ',';
    }
    os << ',';
    write_cell(os, closed);
    os << ',';
    const double shown = std::isfinite(mitigated) ? mitigated : raw;
    write_cell(os, shown - closed);
    os << '\n';
  }
}

void write_trace_csv(std::ostream& os, const statesim::PurityTrace& t) {
  os << "t,gamma,gamma_stderr\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    write_cell(os, t.times[i]);
    os << ',';
    write_cell(os, t.gamma[i]);
    os << ',';
    if (!t.gamma_stderr.empty()) {
      write_cell(os, t.gamma_stderr[i]);
    }
    os << '\n';
  }
}

void write_verdicts_csv(std::ostream& os, const std::vector<bounds::Verdict>& verdicts) {
  os << "n,region,evidence,witness,subinterval,label\n";
  for (const auto& v : verdicts) {
    os << v.n << ',' << bounds::to_string(v.region) << ',' << bounds::to_string(v.evidence)
       << ',';
    if (v.witness) {
      os << *v.witness;
    }
    os << ',' << numtheory::to_string(v.subinterval) << ',' << bounds::to_string(v.label)
       << '\n';
  }
}

}  // namespace pied::cli
