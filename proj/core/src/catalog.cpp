#include "lightcone/catalog.hpp"

#include <cmath>
#include <sstream>

#include "lightcone/error.hpp"

namespace lightcone {
namespace {

JetVec4 cone_point(const Jet2& radius, const Direction& w) {
  JetVec4 psi;
  psi[0] = radius;
  psi[1] = radius * w.x;
  psi[2] = radius * w.y;
  psi[3] = radius * w.z;
  return psi;
}

}  // namespace

SurfacePatch round_sphere(const MinkowskiVec& u, double r) {
  if (!(r > 0.0)) {
    std::ostringstream os;
    os << "radius must be positive, got " << r;
    throw GeometryError(ErrorCode::NonpositiveRadius, os.str());
  }
  const Mat4 b = boost_to(u);
  const bool identity = b.isIdentity(0.0);
  auto make = [b, r, identity](ChartKind kind) -> SurfacePatch::Chart {
    return [b, r, identity, kind](Point p) {
      const JetVec4 psi = cone_point(Jet2(r), sphere_direction(p, kind));
      return identity ? psi : apply(b, psi);
    };
  };
  std::ostringstream name;
  name << "round_sphere(r=" << r << ")";
  return SurfacePatch::sphere(name.str(), make(ChartKind::SphereStandard),
                              make(ChartKind::SpherePolar));
}

SurfacePatch product_cylinder(Domain domain) {
  return SurfacePatch("product_cylinder", domain, [](Point p) {
    const Jet2 x = Jet2::variable(Axis::U, p.u);
    const Jet2 y = Jet2::variable(Axis::V, p.v);
    JetVec4 psi;
    psi[0] = cosh(x);
    psi[1] = sinh(x);
    psi[2] = cos(y);
    psi[3] = sin(y);
    return psi;
  });
}

SurfacePatch paraboloid_graph(Domain domain) {
  return SurfacePatch("paraboloid_graph", domain, [](Point p) {
    const Jet2 x = Jet2::variable(Axis::U, p.u);
    const Jet2 y = Jet2::variable(Axis::V, p.v);
    const Jet2 rho = x * x + y * y;
    JetVec4 psi;
    psi[0] = 0.5 * (rho + 1.0);
    psi[1] = 0.5 * (rho - 1.0);
    psi[2] = x;
    psi[3] = y;
    return psi;
  });
}

SphereField harmonic_field(const HarmonicSpec& spec) {
  spec.validate();
  return [spec](const Direction& w) { return spec.evaluate(w.x, w.y, w.z); };
}

SurfacePatch perturbed_sphere(const HarmonicSpec& spec, double r) {
  SurfacePatch p = expand(round_sphere({-1.0, 0.0, 0.0, 0.0}, r), harmonic_field(spec));
  std::ostringstream name;
  name << "perturbed_sphere(r=" << r << ", spec=" << to_json(spec) << ")";
  return p.transformed(
      name.str(), [](const SurfacePatch::Chart& c, ChartKind) { return c; }, p.exact_order());
}

SurfacePatch graph_over_sphere(const SphereField& f, std::string name) {
  auto make = [f](ChartKind kind) -> SurfacePatch::Chart {
    return [f, kind](Point p) {
      const Direction w = sphere_direction(p, kind);
      const Jet2 radius = f(w);
      if (!(radius.value() > 0.0)) {
        std::ostringstream os;
        os << "radial function is " << radius.value() << " at (" << p.u << "," << p.v << ")";
        throw GeometryError(ErrorCode::NonpositiveRadialFunction, os.str());
      }
      return cone_point(radius, w);
    };
  };
  return SurfacePatch::sphere(std::move(name), make(ChartKind::SphereStandard),
                              make(ChartKind::SpherePolar));
}

HarmonicSpec random_harmonic_spec(std::mt19937_64& rng, int l_min, int l_max, double norm) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  HarmonicSpec spec;
  double sq = 0.0;
  for (int l = l_min; l <= l_max; ++l)
    for (int m = -l; m <= l; ++m) {
      const double a = gauss(rng);
      spec.terms.push_back({l, m, a});
      sq += a * a;
    }
  const double scale = sq > 0.0 ? norm / std::sqrt(sq) : 0.0;
  for (auto& t : spec.terms) t.amplitude *= scale;
  return spec;
}

}  // namespace lightcone
