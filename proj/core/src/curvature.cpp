#include "lightcone/curvature.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "lightcone/error.hpp"

namespace lightcone {
namespace {

using Tensor3 = std::array<std::array<std::array<double, 2>, 2>, 2>;

Axis axis_of(int a) { return a == 0 ? Axis::U : Axis::V; }

void require_order(const SurfacePatch& patch, int needed, const char* what) {
  if (patch.exact_order() < needed) {
    std::ostringstream os;
    os << what << " needs " << needed << " exact derivative orders, patch '" << patch.name()
       << "' carries " << patch.exact_order();
    throw GeometryError(ErrorCode::OrderExceeded, os.str());
  }
}

/// nabla[a][c][b] = component c of (nabla_{d_a} A) d_b.
Tensor3 covariant_derivative_of_A(const SurfaceJets& s, const Christoffels& gamma) {
  Tensor3 out{};
  for (int a = 0; a < 2; ++a) {
    const JetMat2 dA = derivative(s.A, axis_of(a));
    for (int c = 0; c < 2; ++c)
      for (int b = 0; b < 2; ++b) {
        double v = dA[c][b].value();
        for (int d = 0; d < 2; ++d)
          v += gamma[c][a][d].value() * s.A[d][b].value() - s.A[c][d].value() * gamma[d][a][b].value();
        out[a][c][b] = v;
      }
  }
  return out;
}

void require_nondegenerate(double dkr, double threshold, Point p) {
  if (!(std::abs(dkr) >= threshold)) {
    std::ostringstream os;
    os << "|det A_eta| = " << std::abs(dkr) << " below " << threshold << " at (" << p.u << ","
       << p.v << ")";
    throw GeometryError(ErrorCode::DegeneracyViolation, os.str());
  }
}

void require_riemannian_ii(const Eigen::Matrix2d& ii, Point p) {
  if (!(ii(0, 0) > 0.0 && ii.determinant() > 0.0)) {
    std::ostringstream os;
    os << "II_eta is not positive definite at (" << p.u << "," << p.v << ")";
    throw GeometryError(ErrorCode::NotRiemannianII, os.str());
  }
}

DifferenceTensor difference_from_jets(const SurfaceJets& s) {
  const Christoffels gamma = christoffels(s.g);
  const Tensor3 nabla = covariant_derivative_of_A(s, gamma);
  const Eigen::Matrix2d a_inv = values(s.A).inverse();
  DifferenceTensor t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        t.L[a][b][c] = 0.5 * (a_inv(c, 0) * nabla[a][0][b] + a_inv(c, 1) * nabla[a][1][b]);
  return t;
}

Jet2 det_jet(const JetMat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

}  // namespace

double intrinsic_curvature(const SurfacePatch& patch, Point p) {
  require_order(patch, 3, "intrinsic curvature");
  return brioschi_curvature(surface_jets(patch, p).g);
}

double codazzi_residual(const SurfacePatch& patch, Point p) {
  require_order(patch, 3, "Codazzi residual");
  const SurfaceJets s = surface_jets(patch, p);
  const Tensor3 nabla = covariant_derivative_of_A(s, christoffels(s.g));
  Eigen::Vector2d w;
  for (int c = 0; c < 2; ++c) w[c] = nabla[0][c][1] - nabla[1][c][0];
  return std::sqrt(std::max(0.0, w.dot(s.g.value() * w)));
}

DifferenceTensor difference_tensor(const SurfacePatch& patch, Point p, double threshold) {
  require_order(patch, 3, "difference tensor");
  const SurfaceJets s = surface_jets(patch, p);
  require_nondegenerate(values(s.A).determinant(), threshold, p);
  return difference_from_jets(s);
}

DifferenceTensorChecks difference_tensor_checks(const SurfacePatch& patch, Point p,
                                                double threshold) {
  require_order(patch, 3, "difference tensor");
  const SurfaceJets s = surface_jets(patch, p);
  const double dkr = values(s.A).determinant();
  require_nondegenerate(dkr, threshold, p);
  const DifferenceTensor t = difference_from_jets(s);
  const Eigen::Matrix2d ii = values(s.II);

  DifferenceTensorChecks out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        out.max_abs = std::max(out.max_abs, std::abs(t.L[a][b][c]));
        out.symmetry = std::max(out.symmetry, std::abs(t.L[a][b][c] - t.L[b][a][c]));
        const double abc = t.lowered(a, b, c, ii);
        out.total_symmetry = std::max({out.total_symmetry, std::abs(abc - t.lowered(a, c, b, ii)),
                                       std::abs(abc - t.lowered(c, b, a, ii))});
      }

  const Christoffels gamma = christoffels(s.g);
  const Christoffels gamma_ii = christoffels(MetricField::from(s.II));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        out.koszul = std::max(out.koszul, std::abs(t.L[a][b][c] - (gamma_ii[c][a][b].value() -
                                                                    gamma[c][a][b].value())));

  // tr_II L = h^{ab} L(d_a, d_b); compared with grad^II d / (2d) through its II-lowering.
  const Eigen::Matrix2d h_inv = ii.inverse();
  Eigen::Vector2d trace = Eigen::Vector2d::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) trace[c] += h_inv(a, b) * t.L[a][b][c];
  const Jet2 d = det_jet(s.A);
  const Eigen::Vector2d dd(d.partial(1, 0), d.partial(0, 1));
  const Eigen::Vector2d lowered = ii * trace - dd / (2.0 * dkr);
  out.trace_identity = lowered.cwiseAbs().maxCoeff();
  return out;
}

double k_eta(const SurfacePatch& patch, Point p) {
  require_order(patch, 4, "K^eta");
  const SurfaceJets s = surface_jets(patch, p);
  require_riemannian_ii(values(s.II), p);
  return brioschi_curvature(MetricField::from(s.II));
}

CurvatureRelation curvature_relation(const SurfacePatch& patch, Point p, double threshold) {
  require_order(patch, 4, "K^eta relation");
  const SurfaceJets s = surface_jets(patch, p);
  const Eigen::Matrix2d A = values(s.A);
  const Eigen::Matrix2d h = values(s.II);
  const double dkr = A.determinant();
  require_nondegenerate(dkr, threshold, p);
  require_riemannian_ii(h, p);

  CurvatureRelation r;
  r.dkr = dkr;
  r.K = -A.trace();
  r.k2_over_d = r.K * r.K / dkr;
  r.k_eta = brioschi_curvature(MetricField::from(s.II));

  const DifferenceTensor t = difference_from_jets(s);
  const Eigen::Matrix2d h_inv = h.inverse();
  double ll = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double w = h_inv(a, i) * h_inv(b, j);
          if (w == 0.0) continue;
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d) ll += w * h(c, d) * t.L[a][b][c] * t.L[i][j][d];
        }
  r.ii_LL = ll;

  const Jet2 d = det_jet(s.A);
  const Eigen::Vector2d dd(d.partial(1, 0), d.partial(0, 1));
  r.grad_term = dd.dot(h_inv * dd) / (4.0 * dkr * dkr);
  r.residual = std::abs(2.0 * r.k_eta - r.k2_over_d - r.ii_LL + r.grad_term);

  const double k_intrinsic = brioschi_curvature(s.g);
  r.ricci_trace = k_intrinsic * (h_inv * s.g.value()).trace();
  r.ricci_trace_residual = std::abs(r.ricci_trace - r.k2_over_d);
  return r;
}

PointGeometry complete_point_geometry(const SurfaceJets& s, Point p) {
  PointGeometry pg = point_geometry(s, p);
  if (s.order >= 4 && pg.II_eta(0, 0) > 0.0 && pg.II_eta.determinant() > 0.0)
    pg.K_eta = brioschi_curvature(MetricField::from(s.II));
  return pg;
}

PointGeometry complete_point_geometry(const SurfacePatch& patch, Point p) {
  return complete_point_geometry(surface_jets(patch, p), p);
}

}  // namespace lightcone
