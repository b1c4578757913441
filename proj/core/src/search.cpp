#include "lightcone/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include "json.hpp"

#include "lightcone/catalog.hpp"
#include "lightcone/curvature.hpp"
#include "lightcone/error.hpp"
#include "lightcone/global.hpp"
#include "lightcone/nelder_mead.hpp"
#include "lightcone/parallel.hpp"
#include "lightcone/quadrature.hpp"

namespace lightcone {

void SearchConfig::validate() const {
  auto fail = [](const std::string& what) { throw GeometryError(ErrorCode::InvalidArgument, what); };
  if (l_max < 0 || l_max > kMaxHarmonicDegree) fail("l_max must lie in [0, 4]");
  if (first_free_degree() > l_max) fail("every degree up to l_max is frozen");
  if (!(box > 0.0)) fail("box must be positive");
  if (n_theta < 2 || n_phi < 3) fail("grid needs n_theta >= 2 and n_phi >= 3");
  if (starts < 1) fail("starts must be positive");
  if (max_evaluations < 1 || restarts < 0) fail("evaluation budget must be positive");
  if (!(initial_step > 0.0)) fail("initial_step must be positive");
  if (!(variance_tolerance > 0.0) || !(umbilic_threshold > 0.0) || !(candidate_gap > 0.0))
    fail("tolerances must be positive");
  if (!(barrier_weight > 0.0) || !(barrier_epsilon > 0.0)) fail("barrier parameters must be positive");
}

int SearchConfig::first_free_degree() const { return freeze_degree1 ? 2 : (freeze_degree0 ? 1 : 0); }

std::vector<std::pair<int, int>> SearchConfig::free_modes() const {
  std::vector<std::pair<int, int>> modes;
  for (int l = first_free_degree(); l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) modes.emplace_back(l, m);
  // a frozen degree 0 with free degree 1 is the only non-contiguous case
  if (freeze_degree1 && !freeze_degree0) modes.insert(modes.begin(), {0, 0});
  return modes;
}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

SearchConfig parse_search_config(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // the parser reports the byte just past the offending token
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("malformed JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ": " + e.what(),
                      line, column);
  }
  if (!j.is_object()) throw ConfigError("search config must be a JSON object", 1, 1);

  SearchConfig c;
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw ConfigError("'" + key + "' must be a number");
      return value.get<double>();
    };
    auto integer = [&]() {
      if (!value.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
      return value.get<long long>();
    };
    auto boolean = [&]() {
      if (!value.is_boolean()) throw ConfigError("'" + key + "' must be a boolean");
      return value.get<bool>();
    };
    if (key == "l_max") c.l_max = static_cast<int>(integer());
    else if (key == "box") c.box = number();
    else if (key == "n_theta") c.n_theta = static_cast<int>(integer());
    else if (key == "n_phi") c.n_phi = static_cast<int>(integer());
    else if (key == "starts") c.starts = static_cast<int>(integer());
    else if (key == "max_evaluations") c.max_evaluations = static_cast<int>(integer());
    else if (key == "restarts") c.restarts = static_cast<int>(integer());
    else if (key == "initial_step") c.initial_step = number();
    else if (key == "variance_tolerance") c.variance_tolerance = number();
    else if (key == "umbilic_threshold") c.umbilic_threshold = number();
    else if (key == "candidate_gap") c.candidate_gap = number();
    else if (key == "barrier_weight") c.barrier_weight = number();
    else if (key == "barrier_epsilon") c.barrier_epsilon = number();
    else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "freeze_degree0") c.freeze_degree0 = boolean();
    else if (key == "freeze_degree1") c.freeze_degree1 = boolean();
    else if (key == "zero_start") c.zero_start = boolean();
    else throw ConfigError("unknown key '" + key + "'");
  }
  try {
    c.validate();
  } catch (const GeometryError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

std::string to_json(const SearchConfig& c) {
  nlohmann::ordered_json j;
  j["l_max"] = c.l_max;
  j["box"] = c.box;
  j["n_theta"] = c.n_theta;
  j["n_phi"] = c.n_phi;
  j["starts"] = c.starts;
  j["max_evaluations"] = c.max_evaluations;
  j["restarts"] = c.restarts;
  j["initial_step"] = c.initial_step;
  j["variance_tolerance"] = c.variance_tolerance;
  j["umbilic_threshold"] = c.umbilic_threshold;
  j["candidate_gap"] = c.candidate_gap;
  j["barrier_weight"] = c.barrier_weight;
  j["barrier_epsilon"] = c.barrier_epsilon;
  j["seed"] = c.seed;
  j["freeze_degree0"] = c.freeze_degree0;
  j["freeze_degree1"] = c.freeze_degree1;
  j["zero_start"] = c.zero_start;
  return j.dump(2);
}

KetaStatistics keta_statistics(const HarmonicSpec& spec, int n_theta, int n_phi,
                               double barrier_weight, double barrier_epsilon) {
  KetaStatistics s;
  auto fail = [&](std::string why) {
    s.valid = false;
    s.failure = std::move(why);
    s.barrier = 10.0 * barrier_weight;
    s.objective = s.barrier;
    s.variance = s.mean = s.sup_deviation = s.sup_gap_low =
        std::numeric_limits<double>::quiet_NaN();
    return s;
  };
  try {
    spec.validate();
    const SurfacePatch patch = perturbed_sphere(spec);
    const QuadratureRule rule = gauss_legendre(n_theta);
    const auto points = SphereGrid::node_points(n_theta, n_phi);
    std::vector<double> weight(points.size()), keta(points.size());
    s.min_dkr = std::numeric_limits<double>::infinity();
    // serial on purpose: concurrency lives at the level of search starts
    for (std::size_t k = 0; k < points.size(); ++k) {
      const PointGeometry g = complete_point_geometry(patch, points[k]);
      if (!std::isfinite(g.K_eta)) return fail("II_eta not positive definite");
      const int i = static_cast<int>(k) / n_phi;
      weight[k] = rule.weights[n_theta - 1 - i] * g.sqrt_det_g / std::sin(points[k].u);
      keta[k] = g.K_eta;
      s.min_dkr = std::min(s.min_dkr, g.dkr);
      s.sup_gap_low = std::max(s.sup_gap_low, g.gap_low);
    }
    double total = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      total += weight[k];
      sum += weight[k] * keta[k];
    }
    s.mean = sum / total;
    double var = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const double dev = keta[k] - s.mean;
      var += weight[k] * dev * dev;
      s.sup_deviation = std::max(s.sup_deviation, std::abs(dev));
    }
    s.variance = var / total;
  } catch (const GeometryError& e) {
    return fail(e.what());
  }
  s.valid = true;
  if (s.min_dkr < barrier_epsilon) {
    const double x = (barrier_epsilon - s.min_dkr) / barrier_epsilon;
    s.barrier = barrier_weight * (1.0 + x * x);
  }
  s.objective = s.variance + s.barrier;
  return s;
}

double keta_variance(const HarmonicSpec& spec, int n_theta, int n_phi, double barrier_weight,
                     double barrier_epsilon) {
  return keta_statistics(spec, n_theta, n_phi, barrier_weight, barrier_epsilon).objective;
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Umbilical: return "umbilical";
    case Classification::Candidate: return "candidate";
    case Classification::Demoted: return "demoted";
    case Classification::NotConstant: return "not_constant";
    case Classification::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

HarmonicSpec spec_from_parameters(const SearchConfig& config, const std::vector<double>& a) {
  const auto modes = config.free_modes();
  if (a.size() != modes.size())
    throw GeometryError(ErrorCode::InvalidArgument, "parameter count does not match free modes");
  HarmonicSpec spec;
  for (std::size_t i = 0; i < modes.size(); ++i) spec.terms.push_back({modes[i].first, modes[i].second, a[i]});
  return spec;
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

struct Evaluation {
  KetaStatistics stats;
  double objective = 0.0;
};

// One start: simplex runs with restarts, recording a trace row per iteration.
StartResult run_start(const SearchConfig& config, int index, std::vector<TraceRow>& trace) {
  const auto n = config.free_modes().size();
  StartResult result;
  result.index = index;

  std::mt19937_64 rng(config.seed);
  rng.discard(static_cast<unsigned long long>(index) * 64);  // disjoint streams per start
  std::uniform_real_distribution<double> uniform(-config.box, config.box);
  result.initial.assign(n, 0.0);
  if (!(config.zero_start && index == 0))
    for (auto& a : result.initial) a = uniform(rng);

  std::map<std::vector<double>, Evaluation> seen;
  auto objective = [&](const Eigen::VectorXd& x) {
    auto key = to_std(x);
    if (auto it = seen.find(key); it != seen.end()) return it->second.objective;
    // box: evaluate at the clamped point and penalise the excess
    double excess = 0.0;
    std::vector<double> clamped = key;
    for (auto& a : clamped) {
      const double c = std::clamp(a, -config.box, config.box);
      excess += std::abs(a - c);
      a = c;
    }
    Evaluation e;
    e.stats = keta_statistics(spec_from_parameters(config, clamped), config.n_theta, config.n_phi,
                              config.barrier_weight, config.barrier_epsilon);
    e.objective = e.stats.objective;
    if (excess > 0.0) e.objective += config.barrier_weight * (1.0 + excess / config.box);
    seen.emplace(std::move(key), e);
    return e.objective;
  };

  NelderMeadOptions options;
  options.initial_step = config.initial_step;
  options.max_evaluations = config.max_evaluations;
  options.f_tolerance = 1e-3 * config.variance_tolerance;
  options.x_tolerance = 1e-6;

  int iteration = 0;
  auto observer = [&](int, const Eigen::VectorXd& best, double f) {
    const auto& stats = seen.at(to_std(best)).stats;
    trace.push_back({index, ++iteration, f, stats.variance, stats.mean, stats.sup_gap_low, to_std(best)});
  };

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(result.initial.data(), static_cast<Eigen::Index>(n));
  double best = std::numeric_limits<double>::infinity();
  for (int run = 0; run <= config.restarts; ++run) {
    const auto r = nelder_mead(objective, x, options, observer);
    result.evaluations += r.evaluations;
    result.converged = r.converged;
    const double improvement = best - r.f;
    x = r.x;
    best = std::min(best, r.f);
    if (run > 0 && !(improvement > options.f_tolerance)) break;
  }
  const auto params = to_std(x);
  result.stats = seen.at(params).stats;
  result.best = spec_from_parameters(config, params);
  return result;
}

void classify(const SearchConfig& config, StartResult& r) {
  const auto& s = r.stats;
  if (!s.valid) {
    r.classification = Classification::NotConstant;
    r.reason = "minimizer not evaluable: " + s.failure;
    return;
  }
  if (s.sup_gap_low < config.umbilic_threshold) {
    r.classification = Classification::Umbilical;
    r.reason = "sup gap_low below umbilicity threshold";
    return;
  }
  if (s.variance >= config.variance_tolerance) {
    r.classification = Classification::NotConstant;
    r.reason = "variance of K^eta above tolerance";
    return;
  }
  if (s.sup_gap_low < config.candidate_gap) {
    r.classification = Classification::Indeterminate;
    r.reason = "small variance with sup gap_low between the umbilicity and candidate thresholds";
    return;
  }
  // candidate: must survive a doubled grid
  const KetaStatistics fine = keta_statistics(r.best, 2 * config.n_theta, 2 * config.n_phi,
                                              config.barrier_weight, config.barrier_epsilon);
  char buffer[256];
  if (!fine.valid) {
    r.classification = Classification::Demoted;
    r.reason = "doubled grid evaluation failed: " + fine.failure;
  } else if (fine.variance >= config.variance_tolerance) {
    std::snprintf(buffer, sizeof buffer, "variance %.3e on the doubled grid exceeds tolerance",
                  fine.variance);
    r.classification = Classification::Demoted;
    r.reason = buffer;
  } else if (fine.sup_gap_low < config.candidate_gap) {
    std::snprintf(buffer, sizeof buffer, "sup gap_low %.3e on the doubled grid below candidate gap",
                  fine.sup_gap_low);
    r.classification = Classification::Demoted;
    r.reason = buffer;
  } else {
    r.classification = Classification::Candidate;
    r.reason = "survived grid doubling";
  }
}

}  // namespace

SearchReport search(const SearchConfig& config) {
  config.validate();
  SearchReport report;
  report.config = config;
  report.starts.resize(static_cast<std::size_t>(config.starts));
  std::vector<std::vector<TraceRow>> traces(report.starts.size());
  parallel_for(report.starts.size(), [&](std::size_t k) {
    report.starts[k] = run_start(config, static_cast<int>(k), traces[k]);
    classify(config, report.starts[k]);
  });
  for (auto& t : traces) report.trace.insert(report.trace.end(), t.begin(), t.end());

  double best = std::numeric_limits<double>::infinity();
  report.all_minimizers_umbilical = true;
  report.umbilic_mean_consistent = true;
  for (const auto& s : report.starts) {
    if (s.stats.objective < best) {
      best = s.stats.objective;
      report.best_start = s.index;
    }
    const bool small_variance = s.stats.valid && s.stats.variance < config.variance_tolerance;
    if (small_variance && s.classification != Classification::Umbilical)
      report.all_minimizers_umbilical = false;
    if (small_variance && s.stats.sup_gap_low < config.variance_tolerance &&
        !(std::abs(s.stats.mean - 2.0) < 10.0 * config.variance_tolerance))
      report.umbilic_mean_consistent = false;
  }
  report.floor_consistent = true;
  for (const auto& row : report.trace)
    if (row.variance < config.variance_tolerance && !(row.mean >= 2.0 - 1e-3))
      report.floor_consistent = false;
  return report;
}

namespace {
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

nlohmann::ordered_json spec_json(const HarmonicSpec& spec) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& t : spec.terms) j.push_back({t.l, t.m, t.amplitude});
  return j;
}
}  // namespace

std::string to_json(const SearchReport& report) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(to_json(report.config));
  j["seed"] = report.config.seed;
  j["best_start"] = report.best_start;
  if (report.best_start >= 0) {
    const auto& b = report.starts[static_cast<std::size_t>(report.best_start)];
    j["best_coefficients"] = spec_json(b.best);
    j["variance"] = number(b.stats.variance);
    j["sup_deviation"] = number(b.stats.sup_deviation);
    j["sup_gap_low"] = number(b.stats.sup_gap_low);
    j["min_dkr"] = number(b.stats.min_dkr);
    j["mean_keta"] = number(b.stats.mean);
  }
  j["all_minimizers_umbilical"] = report.all_minimizers_umbilical;
  j["floor_consistent"] = report.floor_consistent;
  j["umbilic_mean_consistent"] = report.umbilic_mean_consistent;
  auto starts = nlohmann::ordered_json::array();
  for (const auto& s : report.starts) {
    nlohmann::ordered_json e;
    e["index"] = s.index;
    e["initial"] = s.initial;
    e["coefficients"] = spec_json(s.best);
    e["objective"] = number(s.stats.objective);
    e["variance"] = number(s.stats.variance);
    e["mean_keta"] = number(s.stats.mean);
    e["sup_deviation"] = number(s.stats.sup_deviation);
    e["sup_gap_low"] = number(s.stats.sup_gap_low);
    e["min_dkr"] = number(s.stats.min_dkr);
    e["converged"] = s.converged;
    e["evaluations"] = s.evaluations;
    e["classification"] = std::string(to_string(s.classification));
    e["reason"] = s.reason;
    starts.push_back(std::move(e));
  }
  j["starts"] = std::move(starts);
  j["trace_rows"] = report.trace.size();
  return j.dump(2);
}

void write_trace_csv(std::ostream& out, const SearchReport& report) {
  out << "start,iteration,objective,variance,mean_keta,sup_gap_low";
  for (const auto& [l, m] : report.config.free_modes()) out << ",a_" << l << '_' << m;
  out << '\n';
  char buffer[64];
  for (const auto& row : report.trace) {
    out << row.start << ',' << row.iteration;
    for (double x : {row.objective, row.variance, row.mean, row.sup_gap_low}) {
      std::snprintf(buffer, sizeof buffer, ",%.17g", x);
      out << buffer;
    }
    for (double a : row.coefficients) {
      std::snprintf(buffer, sizeof buffer, ",%.17g", a);
      out << buffer;
    }
    out << '\n';
  }
}

}  // namespace lightcone
