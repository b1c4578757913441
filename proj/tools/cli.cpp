#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lightcone/catalog.hpp"
#include "lightcone/curvature.hpp"
#include "lightcone/error.hpp"
#include "lightcone/global.hpp"
#include "lightcone/parallel.hpp"
#include "lightcone/search.hpp"
#include "lightcone/transforms.hpp"

#ifndef LIGHTCONE_VERSION
#define LIGHTCONE_VERSION "0.0.0"
#endif

namespace lightcone::cli {

std::map<std::string, double> default_tolerances() {
  return {
      {"degeneracy", 1e-8},         // |d| below this counts as degenerate
      {"frame", 1e-10},             // lightlike normal frame, normal connection
      {"weingarten", 1e-9},         // A_psi = -I, closed form vs projection, <H,H> = K
      {"codazzi", 1e-8},
      {"difference_tensor", 1e-8},  // symmetry, Koszul route, trace identity
      {"relation", 1e-6},           // K^eta relation
      {"ricci", 1e-8},
      {"conjugate", 1e-7},
      {"double_conjugate", 1e-9},
      {"expansion", 1e-7},
      {"inequality", 1e-9},         // gaps >= -tol
      {"round", 1e-9},              // A_eta = -I/(2r^2), K, d on round spheres
      {"keta_round", 1e-8},
      {"cylinder", 1e-10},
      {"paraboloid", 1e-12},
      {"gauss_bonnet", 1e-6},
      {"gauss_bonnet_eta", 1e-5},
      {"ii_area", 1e-6},
      {"keta_floor", 1e-6},
      {"reilly_slack", 5e-2},
  };
}

namespace {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Skip, Info };

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skip: return "SKIP";
    case Status::Info: return "INFO";
  }
  return "?";
}

struct Check {
  std::string name;
  Status status = Status::Skip;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

Check bounded(std::string name, double residual, double tolerance, std::string detail = {}) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  return {std::move(name), ok ? Status::Pass : Status::Fail, residual, tolerance, std::move(detail)};
}

Check skipped(std::string name, double tolerance, std::string why) {
  return {std::move(name), Status::Skip, std::numeric_limits<double>::quiet_NaN(), tolerance,
          std::move(why)};
}

Check info(std::string name, double value, std::string detail) {
  return {std::move(name), Status::Info, value, std::numeric_limits<double>::quiet_NaN(),
          std::move(detail)};
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

struct Options {
  std::string selector;
  double r = 1.0;
  std::vector<double> u{-1.0, 0.0, 0.0, 0.0};
  std::string spec_path;
  std::string grid = "64x128";
  int n_theta = 64, n_phi = 128;
  std::vector<std::string> tol_overrides;
  std::map<std::string, double> tol = default_tolerances();
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config_path;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void parse_grid(Options& o) {
  int a = 0, b = 0;
  char x = 0, extra = 0;
  if (std::sscanf(o.grid.c_str(), "%d%c%d%c", &a, &x, &b, &extra) != 3 || (x != 'x' && x != 'X') ||
      a < 2 || b < 3)
    throw UsageError("--grid expects NTHETAxNPHI with NTHETA >= 2 and NPHI >= 3, got '" + o.grid + "'");
  o.n_theta = a;
  o.n_phi = b;
}

void parse_tolerances(Options& o) {
  for (const auto& item : o.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    auto it = o.tol.find(name);
    if (it == o.tol.end()) throw UsageError("unknown tolerance '" + name + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("tolerance '" + name + "' needs a numeric value");
    }
    if (!(value > 0.0)) throw UsageError("tolerance '" + name + "' must be positive");
    it->second = value;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::vector<std::string> kSelectors = {"round-sphere", "perturbed", "cylinder", "paraboloid"};

SurfacePatch make_surface(const Options& o) {
  if (o.selector == "round-sphere")
    return round_sphere({o.u[0], o.u[1], o.u[2], o.u[3]}, o.r);
  if (o.selector == "perturbed") {
    if (o.spec_path.empty()) throw UsageError("'perturbed' needs --spec FILE");
    std::string text;
    try {
      text = read_file(o.spec_path);
    } catch (const std::exception& e) {
      throw GeometryError(ErrorCode::InvalidArgument, e.what());
    }
    return perturbed_sphere(parse_harmonic_spec(text), o.r);
  }
  if (o.selector == "cylinder") return product_cylinder();
  if (o.selector == "paraboloid") return paraboloid_graph();
  throw UsageError("unknown surface '" + o.selector + "'");
}

std::vector<Point> samples_for(const SurfacePatch& patch, const Options& o) {
  return patch.compact() ? SphereGrid::node_points(o.n_theta, o.n_phi)
                         : plane_samples(patch, o.n_theta, o.n_phi);
}

json config_echo(const Options& o, const std::string& command) {
  json c;
  c["command"] = command;
  if (!o.selector.empty()) c["surface"] = o.selector;
  c["r"] = o.r;
  c["u"] = o.u;
  if (!o.spec_path.empty()) c["spec"] = o.spec_path;
  if (!o.config_path.empty()) c["config"] = o.config_path;
  c["grid"] = {o.n_theta, o.n_phi};
  c["threads"] = worker_count();
  json t;
  for (const auto& [k, v] : o.tol) t[k] = v;
  c["tolerances"] = t;
  return c;
}

json manifest(const std::string& command, const Options& o, const std::vector<Check>& checks,
              double seconds, int exit_code, std::optional<std::uint64_t> seed) {
  json m;
  m["tool"] = "lightcone";
  m["version"] = LIGHTCONE_VERSION;
  m["command"] = command;
  m["config"] = config_echo(o, command);
  m["seed"] = seed ? json(*seed) : json(nullptr);
  m["wall_seconds"] = seconds;
  json list = json::array();
  bool passed = true;
  for (const auto& c : checks) {
    list.push_back({{"name", c.name},
                    {"status", to_string(c.status)},
                    {"residual", number(c.residual)},
                    {"tolerance", number(c.tolerance)},
                    {"detail", c.detail}});
    passed = passed && c.status != Status::Fail;
  }
  m["checks"] = list;
  m["passed"] = passed;
  m["exit_code"] = exit_code;
  return m;
}

void print_table(std::ostream& out, const std::string& title, const std::vector<Check>& checks) {
  out << title << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "  %-28s %-6s %-12s %-12s %s\n", "check", "status", "residual",
                "tolerance", "detail");
  out << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "  %-28s %-6s %-12.3e %-12.3e ", c.name.c_str(),
                  to_string(c.status), c.residual, c.tolerance);
    out << line << c.detail << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

int finish(std::ostream& out, const std::string& command, const Options& o,
           const std::vector<Check>& checks, std::chrono::steady_clock::time_point start,
           json extra = {}) {
  const bool failed = std::any_of(checks.begin(), checks.end(),
                                  [](const Check& c) { return c.status == Status::Fail; });
  const int code = failed ? kCheckFailed : kOk;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  print_table(out, command + " " + o.selector, checks);
  out << (failed ? "result: FAIL" : "result: PASS") << '\n';
  if (!o.out.empty()) {
    json m = manifest(command, o, checks, seconds, code, o.seed);
    if (!extra.is_null()) m["report"] = std::move(extra);
    write_text(o.out, m.dump(2) + "\n");
  }
  return code;
}

// ---- verify -----------------------------------------------------------------

struct Sup {
  double value = 0.0;
  void operator()(double x) { value = std::isnan(x) || std::isnan(value) ? NAN : std::max(value, x); }
};

double max_abs(const Eigen::Matrix2d& m) { return m.cwiseAbs().maxCoeff(); }

// Deterministic test field for the expansion checks.
SphereField expansion_sphere_field() {
  const HarmonicSpec spec{{{1, 1, 0.1}, {2, -1, 0.08}, {3, 2, 0.05}}};
  return harmonic_field(spec);
}

ScalarField expansion_plane_field() {
  return [](Point p) {
    const Jet2 x = Jet2::variable(Axis::U, p.u), y = Jet2::variable(Axis::V, p.v);
    return 0.1 * sin(x) * cos(y) + 0.05 * x;
  };
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const SurfacePatch patch = make_surface(o);
  const auto samples = samples_for(patch, o);
  const auto& tol = o.tol;

  const NondegeneracyReport nd = is_nondegenerate(patch, samples, tol.at("degeneracy"));
  const bool nondegenerate = nd.nondegenerate;
  const bool riemannian = nondegenerate && nd.ii_positive_definite;
  const bool relation_order = patch.exact_order() >= 4;

  std::optional<SurfacePatch> conj, conj2;
  if (nondegenerate && patch.exact_order() >= 3) {
    conj = conjugate(patch, samples, tol.at("degeneracy"));
    conj2 = conjugate(*conj, {});
  }

  const std::size_t n = samples.size();
  struct Row {
    double frame = 0, normal_conn = 0, a_psi = 0, closed_form = 0, mean_curv = 0, codazzi = 0;
    double gap_min = 0;
    double dt = 0, relation = 0, ricci = 0;
    ConjugateResiduals conj;
    double double_conj = 0;
    ExpansionResiduals expansion;
    double expected1 = 0, expected2 = 0, expected3 = 0;
  };
  std::vector<Row> rows(n);
  const double r = o.r;
  const MinkowskiVec eta_paraboloid{-1.0, -1.0, 0.0, 0.0};
  const SphereField sphere_sigma = expansion_sphere_field();
  const ScalarField sigma =
      patch.compact() ? on_chart(sphere_sigma, patch.kind()) : expansion_plane_field();

  parallel_for(n, [&](std::size_t k) {
    const Point p = samples[k];
    Row& row = rows[k];
    const PointGeometry g = complete_point_geometry(patch, p);
    row.frame = normal_frame_residual(patch, p);
    row.normal_conn = normal_connection_residual(patch, p);
    row.a_psi = verify_A_psi(patch, p);
    row.closed_form = max_abs(weingarten_eta(patch, p, WeingartenMethod::Projection) -
                              weingarten_eta(patch, p, WeingartenMethod::ClosedForm));
    row.mean_curv = std::max(std::abs(g.H_sq - g.K), std::abs(g.second_form_sq - 2.0 * g.K));
    row.codazzi = codazzi_residual(patch, p);
    row.gap_min = std::min(g.gap_low, g.gap_high);
    if (nondegenerate) {
      const auto dt = difference_tensor_checks(patch, p, tol.at("degeneracy"));
      row.dt = std::max({dt.symmetry, dt.total_symmetry, dt.koszul, dt.trace_identity});
    }
    if (riemannian && relation_order) {
      const auto rel = curvature_relation(patch, p, tol.at("degeneracy"));
      row.relation = rel.residual;
      row.ricci = rel.ricci_trace_residual;
    }
    if (conj) {
      row.conj = conjugate_residuals(patch, *conj, p);
      row.double_conj = (conj2->position(p) - patch.position(p)).max_abs();
    }
    row.expansion = verify_expansion(patch, sigma, p);
    if (o.selector == "round-sphere") {
      row.expected1 = std::max(max_abs(g.A_eta + Eigen::Matrix2d::Identity() / (2 * r * r)),
                               std::max(std::abs(g.K - 1 / (r * r)),
                                        std::abs(g.dkr - 1 / (4 * r * r * r * r))));
      row.expected2 = std::abs(g.K_eta - 2.0);
    } else if (o.selector == "cylinder") {
      row.expected1 = std::max({std::abs(g.dkr + 0.25), std::abs(g.K),
                                std::abs(2.0 * (g.A_eta * g.A_eta).trace() - 1.0)});
    } else if (o.selector == "paraboloid") {
      row.expected1 = (g.eta - eta_paraboloid).max_abs();
      row.expected2 = max_abs(g.A_eta);
    }
  });

  auto sup = [&](auto field) {
    Sup s;
    for (const auto& row : rows) s(field(row));
    return s.value;
  };

  std::vector<Check> checks;
  checks.push_back(bounded("normal_frame", sup([](const Row& w) { return w.frame; }), tol.at("frame")));
  checks.push_back(bounded("normal_connection", sup([](const Row& w) { return w.normal_conn; }), tol.at("frame")));
  checks.push_back(bounded("A_psi_identity", sup([](const Row& w) { return w.a_psi; }), tol.at("weingarten")));
  checks.push_back(bounded("weingarten_closed_form", sup([](const Row& w) { return w.closed_form; }), tol.at("weingarten")));
  checks.push_back(bounded("mean_curvature_norms", sup([](const Row& w) { return w.mean_curv; }), tol.at("weingarten")));
  checks.push_back(bounded("codazzi", sup([](const Row& w) { return w.codazzi; }), tol.at("codazzi")));
  double gap_min = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) gap_min = std::min(gap_min, row.gap_min);
  checks.push_back(bounded("inequality_gaps", std::max(0.0, -gap_min), tol.at("inequality"),
                           "min gap " + std::to_string(gap_min)));

  {
    std::ostringstream d;
    d << (nondegenerate ? "nondegenerate" : "degenerate") << ", min |d| = " << nd.min_abs_dkr
      << (nd.ii_indefinite_somewhere ? ", II_eta indefinite" : "");
    checks.push_back(info("nondegeneracy", nd.min_abs_dkr, d.str()));
  }
  const std::string degenerate_why = "eta is degenerate on the samples";
  if (nondegenerate)
    checks.push_back(bounded("difference_tensor", sup([](const Row& w) { return w.dt; }), tol.at("difference_tensor")));
  else
    checks.push_back(skipped("difference_tensor", tol.at("difference_tensor"), degenerate_why));

  if (riemannian && relation_order) {
    checks.push_back(bounded("keta_relation", sup([](const Row& w) { return w.relation; }), tol.at("relation")));
    checks.push_back(bounded("ricci_trace", sup([](const Row& w) { return w.ricci; }), tol.at("ricci")));
  } else {
    const std::string why = !nondegenerate ? degenerate_why
                            : !riemannian  ? "II_eta is not Riemannian"
                                           : "chart order too low for K^eta";
    checks.push_back(skipped("keta_relation", tol.at("relation"), why));
    checks.push_back(skipped("ricci_trace", tol.at("ricci"), why));
  }

  if (conj) {
    checks.push_back(bounded("conjugate_weingarten", sup([](const Row& w) { return w.conj.weingarten; }), tol.at("conjugate")));
    checks.push_back(bounded("conjugate_second_form", sup([](const Row& w) { return w.conj.second_form; }), tol.at("conjugate")));
    checks.push_back(bounded("conjugate_curvature", sup([](const Row& w) { return w.conj.curvature; }), tol.at("conjugate")));
    checks.push_back(bounded("third_form_metric", sup([](const Row& w) { return w.conj.third_form; }), tol.at("conjugate")));
    checks.push_back(bounded("double_conjugate", sup([](const Row& w) { return w.double_conj; }), tol.at("double_conjugate")));
  } else {
    for (const char* name : {"conjugate_weingarten", "conjugate_second_form", "conjugate_curvature",
                             "third_form_metric"})
      checks.push_back(skipped(name, tol.at("conjugate"), degenerate_why));
    checks.push_back(skipped("double_conjugate", tol.at("double_conjugate"), degenerate_why));
  }

  checks.push_back(bounded("expansion_metric_normal",
                           sup([](const Row& w) { return std::max(w.expansion.metric, w.expansion.normal); }),
                           tol.at("expansion")));
  checks.push_back(bounded("expansion_weingarten", sup([](const Row& w) { return w.expansion.weingarten; }), tol.at("expansion")));
  checks.push_back(bounded("expansion_second_form", sup([](const Row& w) { return w.expansion.second_form; }), tol.at("expansion")));
  checks.push_back(bounded("expansion_curvature",
                           sup([](const Row& w) { return std::max(w.expansion.curvature, w.expansion.trace); }),
                           tol.at("expansion")));

  if (o.selector == "round-sphere") {
    checks.push_back(bounded("round_sphere_values", sup([](const Row& w) { return w.expected1; }), tol.at("round"),
                             "A_eta = -I/(2r^2), K = 1/r^2, d = 1/(4r^4)"));
    checks.push_back(bounded("round_sphere_keta", sup([](const Row& w) { return w.expected2; }), tol.at("keta_round"),
                             "K^eta = 2"));
  } else if (o.selector == "cylinder") {
    checks.push_back(bounded("cylinder_values", sup([](const Row& w) { return w.expected1; }), tol.at("cylinder"),
                             "d = -1/4, K = 0, 2 tr A^2 = 1"));
  } else if (o.selector == "paraboloid") {
    checks.push_back(bounded("paraboloid_normal", sup([](const Row& w) { return w.expected1; }), tol.at("paraboloid"),
                             "eta = (-1,-1,0,0)"));
    checks.push_back(bounded("paraboloid_weingarten", sup([](const Row& w) { return w.expected2; }), tol.at("paraboloid"),
                             "A_eta = 0"));
  }

  json extra;
  extra["surface"] = patch.name();
  extra["samples"] = samples.size();
  return finish(out, "verify", o, checks, start, extra);
}

// ---- global -----------------------------------------------------------------

int cmd_global(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const SurfacePatch patch = make_surface(o);
  if (!patch.compact()) {
    err << "error: surface '" << patch.name() << "' is not compact; global analysis needs a sphere chart\n";
    return kInvalidInput;
  }
  const auto& tol = o.tol;
  const GlobalReport report = global_report(patch, o.n_theta, o.n_phi, tol.at("reilly_slack"));
  const SphereGrid grid(patch, o.n_theta, o.n_phi);

  std::vector<Check> checks;
  checks.push_back(bounded("gauss_bonnet", report.gauss_bonnet_error, tol.at("gauss_bonnet"),
                           "int K dA = 4 pi"));
  if (std::isfinite(report.gauss_bonnet_eta))
    checks.push_back(bounded("gauss_bonnet_eta", report.gauss_bonnet_eta_error, tol.at("gauss_bonnet_eta"),
                             "int K^eta dA_II = 4 pi"));
  else
    checks.push_back(skipped("gauss_bonnet_eta", tol.at("gauss_bonnet_eta"), "II_eta is not Riemannian"));
  checks.push_back(bounded("ii_area_bound", std::max(0.0, -report.ii_area_deficit), tol.at("ii_area"),
                           "area(II_eta) <= 2 pi"));
  checks.push_back(info("ii_area_deficit", report.ii_area_deficit, "2 pi - area(II_eta)"));
  {
    std::ostringstream d;
    d << "lambda1 = " << report.lambda1.lambda1 << " (+- " << report.lambda1.refinement_error
      << "), rhs = " << report.bound_rhs << ", relative slack " << report.slack;
    checks.push_back(bounded("eigenvalue_bound",
                             std::max(0.0, (report.lambda1.lambda1 - report.bound_rhs) / report.bound_rhs),
                             report.slack, d.str()));
    checks.push_back(info("eigenvalue_equality_within_slack", report.reilly_gap,
                          report.equality_within_slack ? "yes" : "no"));
  }
  const LocatedPoint umbilic = locate_umbilic(grid);
  {
    std::ostringstream d;
    d << "at (" << umbilic.at.u << ", " << umbilic.at.v << ") in "
      << (umbilic.chart == ChartKind::SpherePolar ? "polar" : "standard") << " chart, gap_high "
      << umbilic.geometry.gap_high;
    checks.push_back(info("umbilic_point_gap", umbilic.geometry.gap_low, d.str()));
  }
  try {
    const KetaFloor floor = keta_floor_check(grid);
    checks.push_back(bounded("keta_floor", std::max(0.0, floor.k2_over_d - 2.0 * floor.k_eta),
                             tol.at("keta_floor"), "2 K^eta >= K^2/d at the d-argmax"));
    checks.push_back(bounded("k2_over_d_at_argmax", std::max(0.0, 4.0 - floor.k2_over_d),
                             tol.at("keta_floor"), "K^2/d = " + std::to_string(floor.k2_over_d)));
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::NotRiemannianII) throw;
    checks.push_back(skipped("keta_floor", tol.at("keta_floor"), "II_eta is not Riemannian"));
  }
  return finish(out, "global", o, checks, start, json::parse(to_json(report)));
}

// ---- search -----------------------------------------------------------------

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int cmd_search(Options& o, bool grid_given, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  SearchConfig config;
  try {
    config = parse_search_config(read_file(o.config_path));
    if (o.seed) config.seed = *o.seed;
    if (grid_given) {
      config.n_theta = o.n_theta;
      config.n_phi = o.n_phi;
    }
    config.validate();
  } catch (const ConfigError& e) {
    err << "error: " << o.config_path;
    if (e.line() > 0) err << ':' << e.line() << ':' << e.column();
    err << ": " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }
  o.seed = config.seed;
  o.n_theta = config.n_theta;
  o.n_phi = config.n_phi;
  o.selector = "perturbed-family";

  const std::string manifest_path = o.out.empty() ? "search_manifest.json" : o.out;
  const std::string report_path = sibling(manifest_path, ".report.json");
  const std::string trace_path = sibling(manifest_path, ".trace.csv");
  // fail on unwritable outputs before spending time on the search
  for (const auto& path : {manifest_path, report_path, trace_path})
    if (!std::ofstream(path, std::ios::binary | std::ios::app)) {
      err << "error: cannot open '" << path << "' for writing\n";
      return kInvalidInput;
    }

  const SearchReport report = search(config);

  std::vector<Check> checks;
  int counts[5] = {};
  for (const auto& s : report.starts) ++counts[static_cast<int>(s.classification)];
  std::ostringstream d;
  d << counts[0] << " umbilical, " << counts[1] << " candidate, " << counts[2] << " demoted, "
    << counts[3] << " not constant, " << counts[4] << " indeterminate";
  checks.push_back(info("minimizers", static_cast<double>(report.starts.size()), d.str()));
  checks.push_back(info("all_minimizers_umbilical", report.all_minimizers_umbilical ? 1.0 : 0.0,
                        report.all_minimizers_umbilical ? "yes" : "no"));
  checks.push_back(info("keta_floor_on_trace", report.floor_consistent ? 1.0 : 0.0,
                        report.floor_consistent ? "consistent" : "violated"));
  checks.push_back(info("umbilic_mean_consistency", report.umbilic_mean_consistent ? 1.0 : 0.0,
                        report.umbilic_mean_consistent ? "consistent" : "violated"));
  if (report.best_start >= 0) {
    const auto& b = report.starts[static_cast<std::size_t>(report.best_start)];
    checks.push_back(info("best_variance", b.stats.variance, "start " + std::to_string(b.index)));
  }

  try {
    write_text(report_path, to_json(report) + "\n");
    std::ostringstream trace;
    write_trace_csv(trace, report);
    write_text(trace_path, trace.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  Options with_out = o;
  with_out.out = manifest_path;
  finish(out, "search", with_out, checks, start,
         json{{"report", report_path}, {"trace", trace_path}});
  out << "report: " << report_path << "\ntrace: " << trace_path << '\n';
  return kOk;  // clean completion, whatever the mathematical outcome
}

// ---- export -----------------------------------------------------------------

int cmd_export(const Options& o, std::ostream& out, std::ostream& err) {
  const SurfacePatch patch = make_surface(o);
  std::vector<PointGeometry> nodes;
  if (patch.compact()) {
    const SphereGrid grid(patch, o.n_theta, o.n_phi);
    for (const auto& n : grid.nodes()) nodes.push_back(n.geometry);
  } else {
    const auto points = plane_samples(patch, o.n_theta, o.n_phi);
    nodes.resize(points.size());
    parallel_for(points.size(), [&](std::size_t k) { nodes[k] = complete_point_geometry(patch, points[k]); });
  }
  if (o.out.empty()) {
    write_node_csv(out, nodes);
    return kOk;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) {
    err << "error: cannot open '" << o.out << "' for writing\n";
    return kInvalidInput;
  }
  write_node_csv(f, nodes);
  f.flush();
  if (!f) {
    err << "error: write to '" << o.out << "' failed\n";
    return kInvalidInput;
  }
  out << "wrote " << nodes.size() << " rows to " << o.out << '\n';
  return kOk;
}

std::string tolerance_help() {
  std::ostringstream s;
  s << "Tolerance names and defaults (override with --tol NAME=VALUE):\n";
  for (const auto& [k, v] : default_tolerances()) s << "  " << k << " = " << v << '\n';
  s << "Exit codes: 0 ok, 1 usage, 2 check failed, 3 invalid or degenerate input / I/O, 4 bad search config.\n"
    << "LIGHTCONE_THREADS caps the worker count.\n";
  return s.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spacelike surfaces in the future lightcone of L^4: identity checks, global integrals, "
               "eigenvalue bounds and searches for constant K^eta."};
  app.set_version_flag("--version", std::string(LIGHTCONE_VERSION));
  app.footer(tolerance_help());
  app.require_subcommand(1);

  Options o;
  auto surface_options = [&](CLI::App* sub) {
    sub->add_option("surface", o.selector, "round-sphere | perturbed | cylinder | paraboloid")
        ->required()
        ->check(CLI::IsMember(kSelectors));
    sub->add_option("--r", o.r, "sphere radius")->capture_default_str();
    sub->add_option("--u", o.u, "unit timelike centre u (4 reals), round-sphere only")
        ->expected(4)
        ->capture_default_str();
    sub->add_option("--spec", o.spec_path, "HarmonicSpec JSON file: [[l, m, amplitude], ...]");
    sub->add_option("--grid", o.grid, "NTHETAxNPHI sample grid")->capture_default_str();
  };

  auto* verify = app.add_subcommand("verify", "run the pointwise identity suite");
  surface_options(verify);
  verify->add_option("--tol", o.tol_overrides, "NAME=VALUE tolerance override (repeatable)");
  verify->add_option("--out", o.out, "write the run manifest JSON here");

  auto* global = app.add_subcommand("global", "integrals, II_eta area and the eigenvalue bound");
  surface_options(global);
  global->add_option("--tol", o.tol_overrides, "NAME=VALUE tolerance override (repeatable)");
  global->add_option("--out", o.out, "write the run manifest JSON here");

  auto* search_cmd = app.add_subcommand("search", "multi-start search for constant K^eta");
  search_cmd->add_option("config", o.config_path, "search config JSON")->required();
  search_cmd->add_option("--seed", o.seed, "override the config seed");
  search_cmd->add_option("--grid", o.grid, "override the config grid, NTHETAxNPHI");
  search_cmd->add_option("--out", o.out,
                         "manifest path; report and trace are written next to it "
                         "(default search_manifest.json)");

  auto* export_cmd = app.add_subcommand("export", "dump per-node geometry as CSV");
  surface_options(export_cmd);
  export_cmd->add_option("--out", o.out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    parse_grid(o);
    parse_tolerances(o);
    if (o.r <= 0.0 && !(*search_cmd)) throw GeometryError(ErrorCode::NonpositiveRadius, "--r must be positive");
    if (*verify) return cmd_verify(o, out);
    if (*global) return cmd_global(o, out, err);
    if (*search_cmd) return cmd_search(o, search_cmd->count("--grid") > 0, out, err);
    if (*export_cmd) return cmd_export(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const GeometryError& e) {
    err << "error: invalid surface input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kUsage;
}

}  // namespace lightcone::cli
