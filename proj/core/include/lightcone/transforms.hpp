#pragma once

#include <functional>
#include <span>

#include "lightcone/surface.hpp"

namespace lightcone {

/// A smooth function on the chart domain, as jets at each base point.
using ScalarField = std::function<Jet2(Point)>;

/// A smooth function on the unit sphere, given in terms of the direction jets.
/// Usable on either sphere chart.
using SphereField = std::function<Jet2(const Direction&)>;

/// The conjugate immersion -eta. The chart loses one exact order.
/// Throws DegeneracyViolation (naming the offending point) if |det A_eta| is
/// below `threshold` at any of `check_points`.
SurfacePatch conjugate(const SurfacePatch& patch, std::span<const Point> check_points,
                       double threshold = kDegeneracyThreshold);

/// III_eta(d_a, d_b) = <A_eta^2 d_a, d_b>.
Eigen::Matrix2d third_fundamental_form(const SurfacePatch& patch, Point p);

struct ConjugateResiduals {
  double weingarten = 0.0;   // ||A~ A - I||_inf
  double second_form = 0.0;  // ||II~ - II||_inf
  double curvature = 0.0;    // |K~ - K/d|
  double third_form = 0.0;   // ||III_eta - g~||_inf
  double chart = 0.0;        // ||psi~ + eta||_inf, chart sanity
};

/// Duality checks at one point, every conjugate quantity computed on the
/// conjugate patch by the ordinary surface pipeline.
ConjugateResiduals conjugate_residuals(const SurfacePatch& patch, const SurfacePatch& conj, Point p);

struct ConjugateDualitySweep {
  ConjugateResiduals sup;
  double max_gap_low = 0.0;       // on the original
  double max_gap_low_conj = 0.0;  // on the conjugate
};

/// Conjugates `patch` (checking nondegeneracy on `samples`) and takes suprema over them.
ConjugateDualitySweep verify_conjugate_duality(const SurfacePatch& patch,
                                               std::span<const Point> samples);

/// The expansion e^sigma psi.
SurfacePatch expand(const SurfacePatch& patch, const ScalarField& sigma);
/// Sphere-type patches keep both charts when sigma is a function on the sphere.
SurfacePatch expand(const SurfacePatch& patch, const SphereField& sigma);

ScalarField on_chart(const SphereField& field, ChartKind kind);

struct ExpansionResiduals {
  double metric = 0.0;       // ||g_sigma - e^{2 sigma} g||
  double normal = 0.0;       // ||eta_sigma - e^{-sigma}(eta - grad sigma - |grad sigma|^2 psi / 2)||
  double weingarten = 0.0;   // direct A^sigma against the transformation law
  double second_form = 0.0;  // direct II^sigma against the transformation law
  double curvature = 0.0;    // Brioschi K_sigma against (K - Lap sigma) e^{-2 sigma}
  double trace = 0.0;        // -tr of the transformed A against the same curvature law
};

ExpansionResiduals verify_expansion(const SurfacePatch& patch, const ScalarField& sigma, Point p);

}  // namespace lightcone
