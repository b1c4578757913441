#include "lightcone/transforms.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "lightcone/curvature.hpp"
#include "lightcone/error.hpp"

namespace lightcone {

SurfacePatch conjugate(const SurfacePatch& patch, std::span<const Point> check_points,
                       double threshold) {
  if (patch.exact_order() < 3)
    throw GeometryError(ErrorCode::OrderExceeded,
                        "conjugation of '" + patch.name() + "' would leave fewer than 2 exact orders");
  for (const Point& p : check_points) {
    const double d = point_geometry(patch, p).dkr;
    if (!(std::abs(d) >= threshold)) {
      std::ostringstream os;
      os << "eta is degenerate at (" << p.u << "," << p.v << "), |det A_eta| = " << std::abs(d)
         << "; -eta is not an immersion";
      throw GeometryError(ErrorCode::DegeneracyViolation, os.str());
    }
  }
  const int order = patch.exact_order();
  return patch.transformed(
      "conjugate(" + patch.name() + ")",
      [order](const SurfacePatch::Chart& chart, ChartKind) -> SurfacePatch::Chart {
        return [chart, order](Point p) {
          const JetVec4 psi = order < Jet2::kOrder ? chart(p).truncated(order) : chart(p);
          return (-surface_jets(psi, order, p).eta).truncated(order - 1);
        };
      },
      order - 1);
}

Eigen::Matrix2d third_fundamental_form(const SurfacePatch& patch, Point p) {
  const PointGeometry pg = point_geometry(patch, p);
  const Eigen::Matrix2d a2 = pg.A_eta * pg.A_eta;
  return a2.transpose() * pg.g;
}

ConjugateResiduals conjugate_residuals(const SurfacePatch& patch, const SurfacePatch& conj,
                                       Point p) {
  const PointGeometry pg = point_geometry(patch, p);
  const PointGeometry cg = point_geometry(conj, p);
  ConjugateResiduals r;
  r.weingarten = (cg.A_eta * pg.A_eta - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  r.second_form = (cg.II_eta - pg.II_eta).cwiseAbs().maxCoeff();
  r.curvature = std::abs(cg.K - pg.K / pg.dkr);
  const Eigen::Matrix2d a2 = pg.A_eta * pg.A_eta;
  r.third_form = (a2.transpose() * pg.g - cg.g).cwiseAbs().maxCoeff();
  r.chart = (cg.psi + pg.eta).to_eigen().cwiseAbs().maxCoeff();
  return r;
}

ConjugateDualitySweep verify_conjugate_duality(const SurfacePatch& patch,
                                               std::span<const Point> samples) {
  const SurfacePatch conj = conjugate(patch, samples);
  ConjugateDualitySweep out;
  for (const Point& p : samples) {
    const ConjugateResiduals r = conjugate_residuals(patch, conj, p);
    out.sup.weingarten = std::max(out.sup.weingarten, r.weingarten);
    out.sup.second_form = std::max(out.sup.second_form, r.second_form);
    out.sup.curvature = std::max(out.sup.curvature, r.curvature);
    out.sup.third_form = std::max(out.sup.third_form, r.third_form);
    out.sup.chart = std::max(out.sup.chart, r.chart);
    out.max_gap_low = std::max(out.max_gap_low, point_geometry(patch, p).gap_low);
    out.max_gap_low_conj = std::max(out.max_gap_low_conj, point_geometry(conj, p).gap_low);
  }
  return out;
}

SurfacePatch expand(const SurfacePatch& patch, const ScalarField& sigma) {
  const int order = patch.exact_order();
  auto chart = [base = patch, sigma](Point p) { return exp(sigma(p)) * base.jets(p); };
  return patch.single_chart("expand(" + patch.name() + ")", chart, order);
}

ScalarField on_chart(const SphereField& field, ChartKind kind) {
  if (kind == ChartKind::Plane)
    throw GeometryError(ErrorCode::InvalidArgument, "sphere field on a plane chart");
  return [field, kind](Point p) { return field(sphere_direction(p, kind)); };
}

SurfacePatch expand(const SurfacePatch& patch, const SphereField& sigma) {
  if (!patch.compact())
    throw GeometryError(ErrorCode::InvalidArgument, "sphere field needs a sphere-type patch");
  return patch.transformed(
      "expand(" + patch.name() + ")",
      [sigma](const SurfacePatch::Chart& chart, ChartKind kind) -> SurfacePatch::Chart {
        return [chart, sigma, kind](Point p) {
          return exp(sigma(sphere_direction(p, kind))) * chart(p);
        };
      },
      patch.exact_order());
}

ExpansionResiduals verify_expansion(const SurfacePatch& patch, const ScalarField& sigma, Point p) {
  const SurfaceJets s = surface_jets(patch, p);
  const PointGeometry pg = point_geometry(s, p);
  const SurfacePatch expanded = expand(patch, sigma);
  const PointGeometry eg = point_geometry(expanded, p);

  const Jet2 sj = sigma(p);
  const double e2 = std::exp(2.0 * sj.value());
  const Eigen::Vector2d ds(sj.partial(1, 0), sj.partial(0, 1));
  const Christoffels gamma = christoffels(s.g);
  Eigen::Matrix2d hess;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      hess(a, b) = sj.partial((a == 0) + (b == 0), (a == 1) + (b == 1)) -
                   gamma[0][a][b].value() * ds[0] - gamma[1][a][b].value() * ds[1];
  const Eigen::Vector2d grad = pg.g_inv * ds;
  const double grad_sq = ds.dot(grad);
  const double laplacian = (pg.g_inv * hess).trace();

  const Eigen::Matrix2d a_law = (pg.A_eta + pg.g_inv * hess +
                                 0.5 * grad_sq * Eigen::Matrix2d::Identity() - grad * ds.transpose()) /
                                e2;
  const Eigen::Matrix2d ii_law = pg.II_eta + ds * ds.transpose() - 0.5 * grad_sq * pg.g - hess;
  const double k_law = (pg.K - laplacian) / e2;

  ExpansionResiduals r;
  r.metric = (eg.g - e2 * pg.g).cwiseAbs().maxCoeff();
  // eta_sigma = e^{-sigma} (eta - psi_* grad sigma - |grad sigma|^2 psi / 2)
  const MinkowskiVec eta_law =
      std::exp(-sj.value()) * (pg.eta - grad[0] * s.dpsi[0].value() - grad[1] * s.dpsi[1].value() -
                               0.5 * grad_sq * pg.psi);
  r.normal = (eg.eta - eta_law).max_abs();
  r.weingarten = (eg.A_eta - a_law).cwiseAbs().maxCoeff();
  r.second_form = (eg.II_eta - ii_law).cwiseAbs().maxCoeff();
  r.curvature = std::abs(intrinsic_curvature(expanded, p) - k_law);
  r.trace = std::abs(-a_law.trace() - k_law);
  return r;
}

}  // namespace lightcone
