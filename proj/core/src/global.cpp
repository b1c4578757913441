#include "lightcone/global.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "lightcone/curvature.hpp"
#include "lightcone/error.hpp"
#include "lightcone/nelder_mead.hpp"
#include "lightcone/parallel.hpp"
#include "lightcone/quadrature.hpp"

namespace lightcone {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_sphere(const SurfacePatch& patch) {
  if (!patch.compact())
    throw GeometryError(ErrorCode::NotCompact,
                        "surface '" + patch.name() + "' has no closed sphere chart");
}

void require_grid_size(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 3)
    throw GeometryError(ErrorCode::InvalidArgument, "grid needs n_theta >= 2 and n_phi >= 3");
}

double wrap_phi(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

// Pick the chart in which a sphere point (given in standard coordinates) is
// farthest from that chart's poles.
std::pair<ChartKind, Point> best_chart(Point standard) {
  if (std::sin(standard.u) >= std::sqrt(0.5)) return {ChartKind::SphereStandard, standard};
  return {ChartKind::SpherePolar, to_polar_coordinates(standard)};
}

// Minimise objective(geometry) near `start` (standard coordinates).
LocatedPoint refine(const SurfacePatch& patch, Point start, double step,
                    const std::function<double(const PointGeometry&)>& objective) {
  auto [kind, local] = best_chart(start);
  const SurfacePatch view = kind == ChartKind::SpherePolar ? patch.polar_view() : patch;
  auto f = [&](const Eigen::VectorXd& x) {
    if (x[0] <= 0.0 || x[0] >= std::numbers::pi) return std::numeric_limits<double>::infinity();
    try {
      const double value = objective(point_geometry(view, {x[0], wrap_phi(x[1])}));
      return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
    } catch (const GeometryError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  NelderMeadOptions options;
  options.initial_step = step;
  options.max_evaluations = 600;
  options.f_tolerance = 0.0;
  options.x_tolerance = 1e-11;
  const auto result = nelder_mead(f, Eigen::Vector2d(local.u, local.v), options);
  const Point best{result.x[0], wrap_phi(result.x[1])};
  return {best, kind, complete_point_geometry(view, best)};
}

}  // namespace

std::vector<Point> SphereGrid::node_points(int n_theta, int n_phi) {
  require_grid_size(n_theta, n_phi);
  const QuadratureRule rule = gauss_legendre(n_theta);
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    // nodes ascend in cos(theta), so reverse to get theta ascending
    const double theta = std::acos(rule.nodes[n_theta - 1 - i]);
    for (int j = 0; j < n_phi; ++j) points.push_back({theta, kTwoPi * j / n_phi});
  }
  return points;
}

SphereGrid::SphereGrid(SurfacePatch patch, int n_theta, int n_phi)
    : patch_(std::move(patch)), n_theta_(n_theta), n_phi_(n_phi) {
  require_sphere(patch_);
  const auto points = node_points(n_theta, n_phi);
  const QuadratureRule rule = gauss_legendre(n_theta);
  nodes_.resize(points.size());
  parallel_for(points.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) / n_phi;
    GridNode& node = nodes_[k];
    node.at = points[k];
    node.geometry = complete_point_geometry(patch_, node.at);
    // dA = sqrt(det g) dtheta dphi and d(cos theta) = sin(theta) dtheta
    node.weight = rule.weights[n_theta - 1 - i] * (kTwoPi / n_phi) * node.geometry.sqrt_det_g /
                  std::sin(node.at.u);
  });
}

std::vector<Point> SphereGrid::points() const {
  std::vector<Point> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.at);
  return out;
}

double integrate(const SphereGrid& grid, std::span<const double> values, Measure measure) {
  const auto& nodes = grid.nodes();
  if (values.size() != nodes.size())
    throw GeometryError(ErrorCode::InvalidArgument, "one value per grid node required");
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double w = nodes[k].weight;
    if (measure == Measure::SecondForm) {
      const double d = nodes[k].geometry.dkr;
      if (!(d > 0.0))
        throw GeometryError(ErrorCode::DegeneracyViolation,
                            "d = " + std::to_string(d) + " <= 0 at grid node (" +
                                std::to_string(nodes[k].at.u) + ", " +
                                std::to_string(nodes[k].at.v) + ")");
      w *= std::sqrt(d);
    }
    sum += w * values[k];
  }
  return sum;
}

double integrate(const SphereGrid& grid, const std::function<double(const PointGeometry&)>& f,
                 Measure measure) {
  std::vector<double> values;
  values.reserve(grid.nodes().size());
  for (const auto& n : grid.nodes()) values.push_back(f(n.geometry));
  return integrate(grid, values, measure);
}

double surface_area(const SphereGrid& grid) {
  return integrate(grid, [](const PointGeometry&) { return 1.0; }, Measure::Induced);
}

double gauss_bonnet(const SphereGrid& grid) {
  return integrate(grid, [](const PointGeometry& g) { return g.K; }, Measure::Induced);
}

double gauss_bonnet_eta(const SphereGrid& grid) {
  for (const auto& n : grid.nodes())
    if (!std::isfinite(n.geometry.K_eta))
      throw GeometryError(ErrorCode::NotRiemannianII,
                          "II_eta is not positive definite at grid node (" +
                              std::to_string(n.at.u) + ", " + std::to_string(n.at.v) + ")");
  return integrate(grid, [](const PointGeometry& g) { return g.K_eta; }, Measure::SecondForm);
}

SecondFormArea ii_eta_area(const SphereGrid& grid) {
  SecondFormArea out;
  out.area = integrate(grid, [](const PointGeometry&) { return 1.0; }, Measure::SecondForm);
  out.bound = kTwoPi;
  out.within_bound = out.area <= kTwoPi + kAreaBoundSlack;
  return out;
}

double reilly_bound(const SphereGrid& grid) {
  const double h = integrate(grid, [](const PointGeometry& g) { return g.H_sq; }, Measure::Induced);
  return 2.0 * h / surface_area(grid);
}

LocatedPoint locate_umbilic(const SphereGrid& grid) {
  const auto& nodes = grid.nodes();
  double best = std::numeric_limits<double>::infinity();
  Point start{};
  for (const auto& n : nodes)
    if (n.geometry.gap_low < best) {
      best = n.geometry.gap_low;
      start = n.at;
    }
  // the same lattice seen from the rotated chart covers the standard poles
  const SurfacePatch polar = grid.patch().polar_view();
  const auto polar_points = SphereGrid::node_points(grid.n_theta(), grid.n_phi());
  std::vector<double> polar_gap(polar_points.size());
  parallel_for(polar_points.size(), [&](std::size_t k) {
    polar_gap[k] = point_geometry(polar, polar_points[k]).gap_low;
  });
  for (std::size_t k = 0; k < polar_points.size(); ++k)
    if (polar_gap[k] < best) {
      best = polar_gap[k];
      start = from_polar_coordinates(polar_points[k]);
    }
  const double step = 0.5 * std::numbers::pi / grid.n_theta();
  return refine(grid.patch(), start, step, [](const PointGeometry& g) { return g.gap_low; });
}

KetaFloor keta_floor_check(const SphereGrid& grid) {
  const GridNode* argmax = nullptr;
  for (const auto& n : grid.nodes()) {
    if (!(n.geometry.dkr > 0.0))
      throw GeometryError(ErrorCode::DegeneracyViolation,
                          "d <= 0 at grid node (" + std::to_string(n.at.u) + ", " +
                              std::to_string(n.at.v) + ")");
    if (!std::isfinite(n.geometry.K_eta))
      throw GeometryError(ErrorCode::NotRiemannianII, "II_eta is not positive definite on the grid");
    if (!argmax || n.geometry.dkr > argmax->geometry.dkr) argmax = &n;
  }
  const double step = 0.5 * std::numbers::pi / grid.n_theta();
  KetaFloor out;
  out.q0 = refine(grid.patch(), argmax->at, step, [](const PointGeometry& g) { return -g.dkr; });
  const PointGeometry& g = out.q0.geometry;
  if (!std::isfinite(g.K_eta))
    throw GeometryError(ErrorCode::NotRiemannianII, "II_eta is not positive definite at the d-argmax");
  out.k2_over_d = g.K * g.K / g.dkr;
  out.k_eta = g.K_eta;
  out.floor_holds = 2.0 * g.K_eta >= out.k2_over_d - 1e-6;
  out.reaches_four = out.k2_over_d >= 4.0 - 1e-6;
  return out;
}

EigenEstimate lambda1_estimate(const SurfacePatch& patch, int n_theta, int n_phi) {
  EigenEstimate out;
  out.n_theta = n_theta;
  out.n_phi = n_phi;
  out.lambda1 = lambda1_discrete(patch, n_theta, n_phi);
  out.coarse_lambda1 = lambda1_discrete(patch, std::max(2, n_theta / 2), std::max(3, n_phi / 2));
  out.extrapolated = out.lambda1 + (out.lambda1 - out.coarse_lambda1) / 3.0;
  out.refinement_error = std::abs(out.lambda1 - out.coarse_lambda1) / 3.0;
  return out;
}

GlobalReport global_report(const SurfacePatch& patch, int n_theta, int n_phi, double slack) {
  require_sphere(patch);
  const SphereGrid grid(patch, n_theta, n_phi);
  GlobalReport r;
  r.surface = patch.name();
  r.n_theta = n_theta;
  r.n_phi = n_phi;
  r.slack = slack;
  r.area = surface_area(grid);
  r.gauss_bonnet = gauss_bonnet(grid);
  r.ii_eta_area = ii_eta_area(grid).area;
  try {
    r.gauss_bonnet_eta = gauss_bonnet_eta(grid);
  } catch (const GeometryError& e) {
    if (e.code() != ErrorCode::NotRiemannianII) throw;
    r.gauss_bonnet_eta = std::numeric_limits<double>::quiet_NaN();
  }
  r.lambda1 = lambda1_estimate(patch, n_theta, n_phi);
  r.bound_rhs = reilly_bound(grid);

  const double four_pi = 2.0 * kTwoPi;
  r.gauss_bonnet_error = std::abs(r.gauss_bonnet - four_pi);
  r.gauss_bonnet_eta_error = std::abs(r.gauss_bonnet_eta - four_pi);
  r.ii_area_deficit = kTwoPi - r.ii_eta_area;
  r.reilly_gap = (r.bound_rhs - r.lambda1.lambda1) / r.bound_rhs;
  r.bound_holds = r.lambda1.lambda1 <= r.bound_rhs * (1.0 + slack);
  r.equality_within_slack = std::abs(r.reilly_gap) <= slack;
  return r;
}

namespace {
nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}
}  // namespace

std::string to_json(const GlobalReport& r) {
  nlohmann::json j;
  j["surface"] = r.surface;
  j["n_theta"] = r.n_theta;
  j["n_phi"] = r.n_phi;
  j["area"] = r.area;
  j["gauss_bonnet"] = r.gauss_bonnet;
  j["gauss_bonnet_eta"] = number(r.gauss_bonnet_eta);
  j["ii_eta_area"] = number(r.ii_eta_area);
  j["lambda1"] = {{"value", r.lambda1.lambda1},
                  {"coarse", r.lambda1.coarse_lambda1},
                  {"extrapolated", r.lambda1.extrapolated},
                  {"refinement_error", r.lambda1.refinement_error}};
  j["bound_rhs"] = r.bound_rhs;
  j["margins"] = {{"gauss_bonnet_error", r.gauss_bonnet_error},
                  {"gauss_bonnet_eta_error", number(r.gauss_bonnet_eta_error)},
                  {"ii_area_deficit", number(r.ii_area_deficit)},
                  {"reilly_gap", r.reilly_gap},
                  {"slack", r.slack},
                  {"slack_note", "lambda1 compared with the bound up to a relative discretization slack"},
                  {"bound_holds", r.bound_holds},
                  {"equality_within_slack", r.equality_within_slack}};
  return j.dump(2);
}

void write_node_csv(std::ostream& out, std::span<const PointGeometry> nodes) {
  out << kNodeCsvHeader << '\n';
  char line[512];
  for (const auto& g : nodes) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", g.at.u,
                  g.at.v, g.K, g.K_eta, g.dkr, g.gap_low, g.gap_high, g.psi[0]);
    out << line;
  }
}

std::vector<Point> plane_samples(const SurfacePatch& patch, int n_u, int n_v) {
  if (n_u < 1 || n_v < 1) throw GeometryError(ErrorCode::InvalidArgument, "sample counts must be positive");
  const Domain& d = patch.domain();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n_u) * n_v);
  for (int i = 0; i < n_u; ++i)
    for (int j = 0; j < n_v; ++j)
      out.push_back({d.u0 + (d.u1 - d.u0) * (i + 0.5) / n_u, d.v0 + (d.v1 - d.v0) * (j + 0.5) / n_v});
  return out;
}

}  // namespace lightcone
