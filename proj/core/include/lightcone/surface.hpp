#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Core>

#include "lightcone/jet.hpp"
#include "lightcone/metric.hpp"
#include "lightcone/minkowski.hpp"

namespace lightcone {

struct Point {
  double u = 0.0;
  double v = 0.0;
};

struct Domain {
  double u0 = 0.0, u1 = 0.0, v0 = 0.0, v1 = 0.0;
  bool periodic_v = false;

  bool contains(Point p) const;
};

/// How chart coordinates relate to the unit sphere for sphere-type patches.
///  SphereStandard: omega = (sin t cos p, sin t sin p, cos t), poles on the x3 axis.
///  SpherePolar:    omega = (cos t, sin t cos p, sin t sin p), poles on the x1 axis,
///                  so the standard poles sit at the interior points (pi/2, +-pi/2).
enum class ChartKind { Plane, SphereStandard, SpherePolar };

struct Direction {
  Jet2 x, y, z;
};

/// Unit-sphere direction of a chart point as jets in the chart coordinates.
Direction sphere_direction(Point p, ChartKind kind);

/// Coordinates of the same sphere point in the other sphere chart.
Point to_polar_coordinates(Point standard);
Point from_polar_coordinates(Point polar);

/// A spacelike chart (u,v) -> psi(u,v) into the future lightcone, given as jets.
///
/// exact_order() is the number of derivative orders the chart jets carry
/// exactly: 4 for closed-form charts, one less for every conjugation.
/// Sphere-type patches carry a second chart whose poles are rotated onto the
/// x1 axis so that points near the standard poles can be evaluated.
class SurfacePatch {
 public:
  using Chart = std::function<JetVec4(Point)>;

  SurfacePatch(std::string name, Domain domain, Chart chart, int exact_order = Jet2::kOrder);

  static SurfacePatch sphere(std::string name, Chart standard, Chart polar,
                             int exact_order = Jet2::kOrder);

  const std::string& name() const { return name_; }
  const Domain& domain() const { return domain_; }
  int exact_order() const { return exact_order_; }
  ChartKind kind() const { return kind_; }
  bool compact() const { return kind_ != ChartKind::Plane; }

  /// Throws InvalidArgument for points outside the domain.
  JetVec4 jets(Point p) const;
  MinkowskiVec position(Point p) const { return jets(p).value(); }

  bool has_polar_chart() const { return polar_.has_value(); }

  /// The same surface seen through its alternate sphere chart.
  SurfacePatch polar_view() const;

  /// Build a new patch by rewriting each chart; `fn` receives the old chart and its kind.
  SurfacePatch transformed(std::string name,
                           const std::function<Chart(const Chart&, ChartKind)>& fn,
                           int exact_order) const;

  /// Drop the alternate chart and the sphere flag (for transforms defined only on one chart).
  SurfacePatch single_chart(std::string name, Chart chart, int exact_order) const;

 private:
  std::string name_;
  Domain domain_;
  Chart chart_;
  std::optional<Chart> polar_;
  int exact_order_;
  ChartKind kind_ = ChartKind::Plane;
};

/// Jets of the immersion, its frame and the eta-geometry at one base point.
/// Orders noted are relative to order = patch.exact_order().
struct SurfaceJets {
  int order = 0;
  JetVec4 psi;
  std::array<JetVec4, 2> dpsi;                    // order - 1
  std::array<std::array<JetVec4, 2>, 2> ddpsi;    // order - 2
  MetricField g;                                  // order - 1
  JetMat2 g_inv;                                  // order - 1
  JetVec4 eta;                                    // order - 1
  std::array<JetVec4, 2> deta;                    // order - 2
  JetMat2 A;   // A[b][a]: component b of A_eta(d_a); order - 2
  JetMat2 II;  // II_eta(d_a, d_b) = -<eta, psi_ab>; order - 2
};

/// Throws NotSpacelike, DegenerateNormalFrame, OrderExceeded (order < 2).
SurfaceJets surface_jets(const SurfacePatch& patch, Point p);
/// Same pipeline on raw chart jets exact to `exact_order`; `p` is used in messages only.
SurfaceJets surface_jets(const JetVec4& psi, int exact_order, Point p);

/// Pointwise dashboard. Matrices act on coordinate columns: (A X)^b = A(b,a) X^a.
struct PointGeometry {
  Point at;
  MinkowskiVec psi;
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d g_inv = Eigen::Matrix2d::Zero();
  double sqrt_det_g = 0.0;
  MinkowskiVec eta;
  Eigen::Matrix2d A_eta = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d II_eta = Eigen::Matrix2d::Zero();
  double K = 0.0;  // -tr A_eta
  double K_eta = std::numeric_limits<double>::quiet_NaN();
  double dkr = 0.0;      // det A_eta
  double quartic = 0.0;  // 2 * dkr
  MinkowskiVec H;        // mean curvature vector from the normal part of psi_ab
  double H_sq = 0.0;     // <H, H>
  double second_form_sq = 0.0;  // <II, II>, equals 2K
  double gap_low = 0.0;   // K^2 - 4 dkr
  double gap_high = 0.0;  // 2 tr(A^2) - K^2
};

Eigen::Matrix2d first_fundamental_form(const SurfacePatch& patch, Point p);

JetVec4 lightlike_normal(const SurfacePatch& patch, Point p);

enum class WeingartenMethod { Projection, ClosedForm };

/// Projection solves psi_*(A X) = -d_X eta tangentially; the closed form uses
/// psi_0, its gradient and its metric Hessian and never touches eta.
Eigen::Matrix2d weingarten_eta(const SurfacePatch& patch, Point p, WeingartenMethod method);

/// ||A_psi + I||_inf with A_psi computed by projection of d psi.
double verify_A_psi(const SurfacePatch& patch, Point p);

/// Max violation of <eta,eta> = 0, <psi,eta> = 1, <eta,psi_u> = <eta,psi_v> = 0.
double normal_frame_residual(const SurfacePatch& patch, Point p);

/// Largest normal component of d eta (eta is parallel in the normal bundle).
double normal_connection_residual(const SurfacePatch& patch, Point p);

PointGeometry point_geometry(const SurfacePatch& patch, Point p);
PointGeometry point_geometry(const SurfaceJets& jets, Point p);

struct GaussMaps {
  MinkowskiVec GF;
  MinkowskiVec GP;
  int GP_jacobian_rank = 0;  // diagnostic only
};

/// GF = psi/psi0, GP = -eta/eta0. Throws GaussMapUndefined when eta0 = 0.
GaussMaps gauss_maps(const SurfacePatch& patch, Point p);

inline constexpr double kDegeneracyThreshold = 1e-8;

struct NondegeneracyReport {
  bool nondegenerate = true;
  double min_abs_dkr = std::numeric_limits<double>::infinity();
  Point worst;
  bool ii_positive_definite = true;  // at every sample
  bool ii_indefinite_somewhere = false;
};

NondegeneracyReport is_nondegenerate(const SurfacePatch& patch, std::span<const Point> samples,
                                     double threshold = kDegeneracyThreshold);

}  // namespace lightcone
