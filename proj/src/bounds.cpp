#include "pied/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pied::bounds {

namespace {

double d4(std::size_t d) {
  const auto x = static_cast<double>(d);
  return x * x * x * x;
}

void require_n(double n, const char* where) {
  if (!(n >= 2.0)) {
    throw std::invalid_argument(std::string(where) + ": n must be >= 2");
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double b_uniform(double n, std::size_t d) {
  require_n(n, "b_uniform");
  const auto x = static_cast<double>(d);
  if (n >= x) {
    return 0.0;
  }
  return 8.0 * (x - n) * (x - 1.0) / d4(d);
}

double b_general(const statesim::AmplitudeProfile& profile, int n) {
  require_n(n, "b_general");
  const auto d = profile.dimension();
  if (static_cast<std::size_t>(n) >= d) {
    return 0.0;
  }
  const auto w = profile.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k + n < d; ++k) {
    for (std::size_t m = 0; m + 1 < d; ++m) {
      sum += w[k] * w[m] * w[k + n] * w[m + 1];
    }
  }
  return 8.0 * sum;
}

double p_uniform(double n, std::size_t d) {
  const auto x = static_cast<double>(d);
  return b_uniform(n, d) + 4.0 * (x * x + n - 2.0 * x * std::sqrt(n)) / d4(d);
}

double bk_uniform(double n, double k, std::size_t d) {
  if (k == 0.0) {
    throw std::invalid_argument("bk_uniform: k must be nonzero");
  }
  const auto x = static_cast<double>(d);
  return b_uniform(n, d) + 8.0 * (x * x + n - x * (k + n / k)) / d4(d);
}

double delta(double n, double k, std::size_t d) {
  if (!(n > 0.0)) {
    throw std::invalid_argument("delta: n must be positive");
  }
  if (k == 0.0) {
    throw std::invalid_argument("delta: k must be nonzero");
  }
  const auto x = static_cast<double>(d);
  return x * x + n - 2.0 * x * (k + n / k) + 2.0 * x * std::sqrt(n);
}

double delta_maximum(double k, std::size_t d) {
  const auto x = static_cast<double>(d);
  const double r = x * k / (2.0 * x - k);
  return r * r;
}

double n_threshold(double k, std::size_t d) {
  const auto x = static_cast<double>(d);
  if (!(k >= 2.0) || !(k < x / 2.0)) {
    throw std::out_of_range("n_threshold: need 2 <= k < d/2 (k = " + std::to_string(k) +
                            ", d = " + std::to_string(d) + ")");
  }
  const double numerator = 4.0 * x * x * x / k - 6.0 * x * x + 4.0 * x * k +
                           4.0 * std::sqrt(2.0 / k) * (x - k) * std::pow(x, 1.5);
  const double shrink = 1.0 - 2.0 * x / k;
  const double root = numerator / (2.0 * shrink * shrink);
  if (std::abs(delta(root, k, d)) > 1e-9 * x * x) {
    throw std::logic_error("n_threshold: closed-form root does not zero delta");
  }
  return root;
}

namespace {

struct KRoots {
  double s2;  // (d + sqrt(2(d-1)))^2
  double u;
};

KRoots k_roots(double d) {
  if (!(d >= 2.0)) {
    throw std::invalid_argument("k roots need d >= 2");
  }
  const double s = d + std::sqrt(2.0 * (d - 1.0));
  const double s2 = s * s;
  return {s2, std::sqrt(s2 * s2 - 32.0 * d * d * (d - 1.0))};
}

}  // namespace

double k_minus(double d) {
  const auto [s2, u] = k_roots(d);
  // (s2 - u) / (4d) with the difference of squares folded in
  return 8.0 * d * (d - 1.0) / (s2 + u);
}

double k_plus(double d) {
  const auto [s2, u] = k_roots(d);
  return (s2 + u) / (4.0 * d);
}

std::vector<int> k_admissible_set(std::size_t d) {
  if (d < 4) {
    throw std::invalid_argument("k_admissible_set: d must be >= 4");
  }
  const auto x = static_cast<double>(d);
  const double top = 2.0 * (x - 1.0);
  const double k_max = k_minus(x);
  std::vector<int> ks;
  for (int k = 2; k <= k_max && k < x / 2.0; ++k) {
    if (numtheory::is_prime(static_cast<std::uint64_t>(k)) && n_threshold(k, d) < top) {
      ks.push_back(k);
    }
  }
  return ks;
}

std::size_t BoundsTable::index(int n) const {
  if (n < 2 || n > static_cast<int>(2 * (d - 1))) {
    throw std::out_of_range("n = " + std::to_string(n) + " outside [2, " +
                            std::to_string(2 * (d - 1)) + "]");
  }
  return static_cast<std::size_t>(n - 2);
}

BoundsTable uniform_table(std::size_t d) {
  require_dimension(d);
  BoundsTable t;
  t.d = d;
  t.family = statesim::StateFamily::Uniform;
  const auto x = static_cast<double>(d);
  for (int n = 2; n <= static_cast<int>(2 * (d - 1)); ++n) {
    t.b.push_back(b_uniform(n, d));
    t.p.push_back(p_uniform(n, d));
    t.b2.push_back(bk_uniform(n, 2, d));
    t.b3.push_back(bk_uniform(n, 3, d));
  }
  t.n_th2 = 2.0 < x / 2.0 ? n_threshold(2, d) : kInf;
  t.n_th3 = 3.0 < x / 2.0 ? n_threshold(3, d) : kInf;
  if (d >= 4) {
    t.k_set = k_admissible_set(d);
  }
  return t;
}

BoundsTable profile_table(const statesim::AmplitudeProfile& profile) {
  if (profile.family() == statesim::StateFamily::Uniform) {
    return uniform_table(profile.dimension());
  }
  BoundsTable t;
  t.d = profile.dimension();
  t.family = profile.family();
  for (int n = 2; n <= static_cast<int>(2 * (t.d - 1)); ++n) {
    t.b.push_back(b_general(profile, n));
  }
  t.n_th2 = kInf;
  t.n_th3 = kInf;
  return t;
}

std::string_view to_string(Label l) noexcept {
  switch (l) {
    case Label::Prime: return "Prime";
    case Label::Composite: return "Composite";
    case Label::ProbablePrime: return "ProbablePrime";
  }
  return "?";
}

std::string_view to_string(Evidence e) noexcept {
  switch (e) {
    case Evidence::BelowB: return "BelowB";
    case Evidence::AboveP: return "AboveP";
    case Evidence::WitnessFound: return "WitnessFound";
    case Evidence::NoWitness: return "NoWitness";
  }
  return "?";
}

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::Green: return "Green";
    case Region::LightBlue: return "LightBlue";
    case Region::Purple: return "Purple";
  }
  return "?";
}

Label parse_label(std::string_view s) {
  if (s == "Prime") return Label::Prime;
  if (s == "Composite") return Label::Composite;
  if (s == "ProbablePrime") return Label::ProbablePrime;
  throw std::invalid_argument("unknown label '" + std::string(s) + "'");
}

Evidence parse_evidence(std::string_view s) {
  if (s == "BelowB") return Evidence::BelowB;
  if (s == "AboveP") return Evidence::AboveP;
  if (s == "WitnessFound") return Evidence::WitnessFound;
  if (s == "NoWitness") return Evidence::NoWitness;
  throw std::invalid_argument("unknown evidence '" + std::string(s) + "'");
}

Region parse_region(std::string_view s) {
  if (s == "Green") return Region::Green;
  if (s == "LightBlue") return Region::LightBlue;
  if (s == "Purple") return Region::Purple;
  throw std::invalid_argument("unknown region '" + std::string(s) + "'");
}

Verdict classify(int n, double alpha, const BoundsTable& table, double tolerance) {
  if (!table.has_composite_bound()) {
    throw std::invalid_argument(
        "classify: composite bound is only available for the uniform state");
  }
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("classify: tolerance must be >= 0");
  }
  const double lower = table.b_at(n);
  const double upper = table.p_at(n);
  const auto interval = numtheory::classify_interval(n, static_cast<std::int64_t>(table.d),
                                                     table.thresholds());

  Verdict v;
  v.n = n;
  v.subinterval = interval.subinterval;
  if (alpha < lower * (1.0 - tolerance)) {
    v.region = Region::Green;
    v.evidence = Evidence::BelowB;
    v.label = Label::Prime;
  } else if (alpha > upper * (1.0 + tolerance)) {
    v.region = Region::Purple;
    v.evidence = Evidence::AboveP;
    v.label = Label::Composite;
  } else {
    v.region = Region::LightBlue;
    v.witness = numtheory::run_divisibility_tests(static_cast<std::uint64_t>(n),
                                                  interval.required_tests);
    v.evidence = v.witness ? Evidence::WitnessFound : Evidence::NoWitness;
    v.label = v.witness ? Label::Composite : Label::ProbablePrime;
  }
  return v;
}

}  // namespace pied::bounds
