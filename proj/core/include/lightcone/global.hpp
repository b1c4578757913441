#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lightcone/surface.hpp"

namespace lightcone {

struct GridNode {
  Point at;
  double weight = 0.0;  // quadrature weight of the induced area element at this node
  PointGeometry geometry;
};

/// Gauss-Legendre nodes in cos(theta) times uniform nodes in phi on a
/// sphere-type patch. Nodes are strictly interior, so the chart poles are never
/// evaluated. Geometry (with K_eta where II_eta is Riemannian) is cached per node.
class SphereGrid {
 public:
  /// Throws NotCompact for plane patches.
  SphereGrid(SurfacePatch patch, int n_theta, int n_phi);

  const SurfacePatch& patch() const { return patch_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  std::vector<Point> points() const;

  /// Node coordinates without evaluating any geometry.
  static std::vector<Point> node_points(int n_theta, int n_phi);

 private:
  SurfacePatch patch_;
  int n_theta_;
  int n_phi_;
  std::vector<GridNode> nodes_;
};

enum class Measure { Induced, SecondForm };

/// Quadrature of per-node values. The SecondForm measure is sqrt(d) dA and
/// throws DegeneracyViolation unless d > 0 at every node.
double integrate(const SphereGrid& grid, std::span<const double> values, Measure measure);
double integrate(const SphereGrid& grid, const std::function<double(const PointGeometry&)>& f,
                 Measure measure);

double surface_area(const SphereGrid& grid);

/// int K dA (4 pi on any topological sphere).
double gauss_bonnet(const SphereGrid& grid);

/// int K^eta dA_{II}; throws NotRiemannianII if K^eta is undefined at a node.
double gauss_bonnet_eta(const SphereGrid& grid);

inline constexpr double kAreaBoundSlack = 1e-6;

struct SecondFormArea {
  double area = 0.0;
  double bound = 0.0;         // 2 pi
  bool within_bound = false;  // area <= 2 pi + kAreaBoundSlack
};

SecondFormArea ii_eta_area(const SphereGrid& grid);

/// 2 int <H,H> dA / area(g).
double reilly_bound(const SphereGrid& grid);

/// Local refinement of a grid extremum by a derivative-free simplex in chart coordinates.
struct LocatedPoint {
  Point at;
  ChartKind chart = ChartKind::SphereStandard;
  PointGeometry geometry;
};

/// Point where both inequality gaps are smallest: grid search over both
/// sphere charts, then simplex refinement of gap_low.
LocatedPoint locate_umbilic(const SphereGrid& grid);

struct KetaFloor {
  LocatedPoint q0;           // refined argmax of d
  double k2_over_d = 0.0;    // K^2/d at q0
  double k_eta = 0.0;
  bool floor_holds = false;  // 2 K^eta(q0) >= K^2/d - 1e-6
  bool reaches_four = false; // K^2/d >= 4 - 1e-6
};

/// Throws DegeneracyViolation unless d > 0 on the grid, NotRiemannianII if II_eta is indefinite.
KetaFloor keta_floor_check(const SphereGrid& grid);

struct EigenEstimate {
  double lambda1 = 0.0;           // on the requested grid
  double coarse_lambda1 = 0.0;    // on the half-resolution grid
  double extrapolated = 0.0;      // Richardson, assuming O(h^2)
  double refinement_error = 0.0;  // |lambda1 - coarse| / 3
  int n_theta = 0, n_phi = 0;
};

/// First nonzero eigenvalue of the cotangent Laplacian of the lat-long
/// triangulation (two pole vertices, lumped mass). Throws EigenSolverFailure.
double lambda1_discrete(const SurfacePatch& patch, int n_theta, int n_phi);

EigenEstimate lambda1_estimate(const SurfacePatch& patch, int n_theta, int n_phi);

inline constexpr double kEigenBoundSlack = 5e-2;

struct GlobalReport {
  std::string surface;
  int n_theta = 0, n_phi = 0;
  double area = 0.0;
  double gauss_bonnet = 0.0;
  double gauss_bonnet_eta = 0.0;  // NaN when II_eta is not Riemannian everywhere
  double ii_eta_area = 0.0;       // NaN when d <= 0 somewhere
  EigenEstimate lambda1;
  double bound_rhs = 0.0;
  double slack = kEigenBoundSlack;

  // margins
  double gauss_bonnet_error = 0.0;      // |int K dA - 4 pi|
  double gauss_bonnet_eta_error = 0.0;  // |int K^eta dA_II - 4 pi|
  double ii_area_deficit = 0.0;         // 2 pi - area(II)
  double reilly_gap = 0.0;              // (bound_rhs - lambda1) / bound_rhs
  bool bound_holds = false;             // lambda1 <= bound_rhs (1 + slack)
  bool equality_within_slack = false;   // |reilly_gap| <= slack
};

/// Throws NotCompact for plane patches, DegeneracyViolation if d <= 0 at a node.
GlobalReport global_report(const SurfacePatch& patch, int n_theta, int n_phi,
                           double slack = kEigenBoundSlack);

std::string to_json(const GlobalReport& report);

inline constexpr const char* kNodeCsvHeader = "theta,phi,K,Keta,d,gap_low,gap_high,psi0";

void write_node_csv(std::ostream& out, std::span<const PointGeometry> nodes);

/// Cell-centred uniform samples of a plane patch's domain.
std::vector<Point> plane_samples(const SurfacePatch& patch, int n_u, int n_v);

}  // namespace lightcone
