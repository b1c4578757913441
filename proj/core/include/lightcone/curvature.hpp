#pragma once

#include <array>

#include "lightcone/surface.hpp"

namespace lightcone {

/// L(d_a, d_b) = sum_c L[a][b][c] d_c, the difference between the Levi-Civita
/// connections of II_eta and of the induced metric.
struct DifferenceTensor {
  std::array<std::array<std::array<double, 2>, 2>, 2> L{};

  /// II_eta(L(d_a, d_b), d_e)
  double lowered(int a, int b, int e, const Eigen::Matrix2d& II) const {
    return II(0, e) * L[a][b][0] + II(1, e) * L[a][b][1];
  }
};

/// Gauss curvature of the induced metric by the Brioschi formula (needs order 3).
double intrinsic_curvature(const SurfacePatch& patch, Point p);

/// Norm of (nabla_u A)d_v - (nabla_v A)d_u in the induced metric.
double codazzi_residual(const SurfacePatch& patch, Point p);

/// L(X,Y) = 1/2 A^{-1} (nabla_X A) Y. Throws DegeneracyViolation when |det A| < threshold.
DifferenceTensor difference_tensor(const SurfacePatch& patch, Point p,
                                   double threshold = kDegeneracyThreshold);

struct DifferenceTensorChecks {
  double symmetry = 0.0;        // max |L[a][b][c] - L[b][a][c]|
  double total_symmetry = 0.0;  // lowered tensor under all index permutations
  double koszul = 0.0;          // |L - (Gamma^{II} - Gamma)|, independent route through Christoffels
  double trace_identity = 0.0;  // |II(tr_II L - grad^II d / (2d), .)|
  double max_abs = 0.0;         // sup |L| components
};

DifferenceTensorChecks difference_tensor_checks(const SurfacePatch& patch, Point p,
                                                double threshold = kDegeneracyThreshold);

/// Gauss curvature of II_eta (Brioschi on the II_eta jets). Throws
/// NotRiemannianII unless II_eta is positive definite, OrderExceeded below order 4.
double k_eta(const SurfacePatch& patch, Point p);

struct CurvatureRelation {
  double k_eta = 0.0;
  double K = 0.0;
  double dkr = 0.0;
  double k2_over_d = 0.0;
  double ii_LL = 0.0;         // II(L, L)
  double grad_term = 0.0;     // II(grad d, grad d) / (4 d^2)
  double residual = 0.0;      // |2K^eta - K^2/d - II(L,L) + grad_term|
  double ricci_trace = 0.0;   // tr_II(Ric) with Ric from the Brioschi curvature of g
  double ricci_trace_residual = 0.0;  // |tr_II(Ric) - K^2/d|
};

/// Relation between K, K^eta and d on surfaces with Riemannian II_eta.
/// Throws DegeneracyViolation, NotRiemannianII, OrderExceeded.
CurvatureRelation curvature_relation(const SurfacePatch& patch, Point p,
                                     double threshold = kDegeneracyThreshold);

/// point_geometry plus K_eta whenever II_eta is positive definite and order permits.
PointGeometry complete_point_geometry(const SurfacePatch& patch, Point p);
PointGeometry complete_point_geometry(const SurfaceJets& jets, Point p);

}  // namespace lightcone
