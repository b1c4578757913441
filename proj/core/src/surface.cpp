#include "lightcone/surface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "lightcone/error.hpp"

namespace lightcone {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

Axis axis_of(int a) { return a == 0 ? Axis::U : Axis::V; }

void require_order(const SurfacePatch& patch, int needed, const char* what) {
  if (patch.exact_order() < needed) {
    std::ostringstream os;
    os << what << " needs " << needed << " exact derivative orders, patch '" << patch.name()
       << "' carries " << patch.exact_order();
    throw GeometryError(ErrorCode::OrderExceeded, os.str());
  }
}

}  // namespace

bool Domain::contains(Point p) const {
  constexpr double slack = 1e-12;
  const bool in_u = p.u >= u0 - slack && p.u <= u1 + slack;
  const bool in_v = periodic_v || (p.v >= v0 - slack && p.v <= v1 + slack);
  return in_u && in_v && std::isfinite(p.v);
}

Direction sphere_direction(Point p, ChartKind kind) {
  const Jet2 theta = Jet2::variable(Axis::U, p.u);
  const Jet2 phi = Jet2::variable(Axis::V, p.v);
  const Jet2 st = sin(theta), ct = cos(theta), sp = sin(phi), cp = cos(phi);
  if (kind == ChartKind::SpherePolar) return {ct, st * cp, st * sp};
  return {st * cp, st * sp, ct};
}

Point to_polar_coordinates(Point s) {
  const double x = std::sin(s.u) * std::cos(s.v);
  const double y = std::sin(s.u) * std::sin(s.v);
  const double z = std::cos(s.u);
  return {std::acos(std::clamp(x, -1.0, 1.0)), wrap_angle(std::atan2(z, y))};
}

Point from_polar_coordinates(Point q) {
  const double x = std::cos(q.u);
  const double y = std::sin(q.u) * std::cos(q.v);
  const double z = std::sin(q.u) * std::sin(q.v);
  return {std::acos(std::clamp(z, -1.0, 1.0)), wrap_angle(std::atan2(y, x))};
}

SurfacePatch::SurfacePatch(std::string name, Domain domain, Chart chart, int exact_order)
    : name_(std::move(name)), domain_(domain), chart_(std::move(chart)), exact_order_(exact_order) {}

SurfacePatch SurfacePatch::sphere(std::string name, Chart standard, Chart polar, int exact_order) {
  SurfacePatch p(std::move(name), Domain{0.0, std::numbers::pi, 0.0, kTwoPi, true},
                 std::move(standard), exact_order);
  p.polar_ = std::move(polar);
  p.kind_ = ChartKind::SphereStandard;
  return p;
}

JetVec4 SurfacePatch::jets(Point p) const {
  if (!domain_.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.u << "," << p.v << ") outside the domain of '" << name_ << "'";
    throw GeometryError(ErrorCode::InvalidArgument, os.str());
  }
  JetVec4 j = chart_(p);
  if (exact_order_ < Jet2::kOrder) j = j.truncated(exact_order_);
  return j;
}

SurfacePatch SurfacePatch::polar_view() const {
  if (!polar_) throw GeometryError(ErrorCode::InvalidArgument, "patch has no alternate chart");
  SurfacePatch p = *this;
  std::swap(p.chart_, *p.polar_);
  p.kind_ = kind_ == ChartKind::SphereStandard ? ChartKind::SpherePolar : ChartKind::SphereStandard;
  return p;
}

SurfacePatch SurfacePatch::transformed(std::string name,
                                       const std::function<Chart(const Chart&, ChartKind)>& fn,
                                       int exact_order) const {
  SurfacePatch p = *this;
  p.name_ = std::move(name);
  p.exact_order_ = exact_order;
  p.chart_ = fn(chart_, kind_);
  if (polar_) {
    const ChartKind other =
        kind_ == ChartKind::SphereStandard ? ChartKind::SpherePolar : ChartKind::SphereStandard;
    p.polar_ = fn(*polar_, other);
  }
  return p;
}

SurfacePatch SurfacePatch::single_chart(std::string name, Chart chart, int exact_order) const {
  Domain d = domain_;
  return SurfacePatch(std::move(name), d, std::move(chart), exact_order);
}

SurfaceJets surface_jets(const SurfacePatch& patch, Point p) {
  require_order(patch, 2, "surface geometry");
  return surface_jets(patch.jets(p), patch.exact_order(), p);
}

SurfaceJets surface_jets(const JetVec4& psi, int exact_order, Point p) {
  if (exact_order < 2)
    throw GeometryError(ErrorCode::OrderExceeded, "surface geometry needs 2 exact orders");
  SurfaceJets s;
  s.order = exact_order;
  s.psi = psi;
  for (int a = 0; a < 2; ++a) s.dpsi[a] = s.psi.derivative(axis_of(a));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      s.ddpsi[a][b] = a <= b ? s.dpsi[a].derivative(axis_of(b)) : s.ddpsi[b][a];

  s.g = {inner(s.dpsi[0], s.dpsi[0]), inner(s.dpsi[0], s.dpsi[1]), inner(s.dpsi[1], s.dpsi[1])};
  {
    const double E = s.g.E.value(), F = s.g.F.value(), G = s.g.G.value();
    const double scale = std::max(std::abs(E), std::abs(G));
    if (!(E > 0.0) || !(E * G - F * F > 1e-14 * scale * scale)) {
      std::ostringstream os;
      os << "induced metric not positive definite at (" << p.u << "," << p.v << "): E=" << E
         << " F=" << F << " G=" << G;
      throw GeometryError(ErrorCode::NotSpacelike, os.str());
    }
  }
  s.g_inv = s.g.inverse();

  // Normal-plane seed: the normal part of e0 = (1,0,0,0). Its pairing with psi
  // is -psi0, which never vanishes on the future cone.
  const Jet2 d0 = s.psi[0].derivative(Axis::U);
  const Jet2 d1 = s.psi[0].derivative(Axis::V);
  const Jet2 grad0 = s.g_inv[0][0] * d0 + s.g_inv[0][1] * d1;
  const Jet2 grad1 = s.g_inv[1][0] * d0 + s.g_inv[1][1] * d1;
  JetVec4 seed = grad0 * s.dpsi[0] + grad1 * s.dpsi[1];
  seed[0] += 1.0;

  const Jet2 psi_seed = inner(s.psi, seed);
  const double psi_norm = std::abs(s.psi[0].value()) + std::abs(s.psi[1].value()) +
                          std::abs(s.psi[2].value()) + std::abs(s.psi[3].value());
  if (!(std::abs(psi_seed.value()) > 1e-12 * psi_norm))
    throw GeometryError(ErrorCode::DegenerateNormalFrame,
                        "normal plane basis is singular (psi0 ~ 0 or corrupted frame)");
  const Jet2 seed_sq = inner(seed, seed);
  // eta = a psi + b seed with <psi,eta> = 1 and <eta,eta> = 0; <psi,psi> = 0 makes this linear.
  const Jet2 b = reciprocal(psi_seed);
  const Jet2 a = -0.5 * seed_sq * b * b;
  s.eta = a * s.psi + b * seed;
  for (int k = 0; k < 2; ++k) s.deta[k] = s.eta.derivative(axis_of(k));

  JetMat2 pairing;  // pairing[c][a] = <psi_c, eta_a>
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < 2; ++k) pairing[c][k] = inner(s.dpsi[c], s.deta[k]);
  for (int bb = 0; bb < 2; ++bb)
    for (int k = 0; k < 2; ++k)
      s.A[bb][k] = -(s.g_inv[bb][0] * pairing[0][k] + s.g_inv[bb][1] * pairing[1][k]);

  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      s.II[i][j] = -inner(s.eta, s.ddpsi[i][j]);
      s.II[j][i] = s.II[i][j];
    }
  return s;
}

Eigen::Matrix2d first_fundamental_form(const SurfacePatch& patch, Point p) {
  require_order(patch, 1, "first fundamental form");
  const JetVec4 psi = patch.jets(p);
  const MinkowskiVec pu = psi.derivative(Axis::U).value();
  const MinkowskiVec pv = psi.derivative(Axis::V).value();
  Eigen::Matrix2d g;
  g << inner(pu, pu), inner(pu, pv), inner(pu, pv), inner(pv, pv);
  const double scale = std::max(std::abs(g(0, 0)), std::abs(g(1, 1)));
  if (!(g(0, 0) > 0.0) || !(g.determinant() > 1e-14 * scale * scale))
    throw GeometryError(ErrorCode::NotSpacelike, "induced metric not positive definite");
  return g;
}

JetVec4 lightlike_normal(const SurfacePatch& patch, Point p) { return surface_jets(patch, p).eta; }

namespace {

Eigen::Matrix2d closed_form_weingarten(const SurfaceJets& s) {
  const Christoffels gamma = christoffels(s.g);
  const Jet2& psi0 = s.psi[0];
  const double f = psi0.value();
  const std::array<double, 2> d{psi0.partial(1, 0), psi0.partial(0, 1)};
  const Eigen::Matrix2d ginv = values(s.g_inv);

  Eigen::Matrix2d hess;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double second = psi0.partial((a == 0) + (b == 0), (a == 1) + (b == 1));
      hess(a, b) = second - gamma[0][a][b].value() * d[0] - gamma[1][a][b].value() * d[1];
    }
  const Eigen::Vector2d dv(d[0], d[1]);
  const double grad_sq = dv.dot(ginv * dv);
  // (Hess)^b_a = g^{bc} Hess_{ca}
  return -(1.0 + grad_sq) / (2.0 * f * f) * Eigen::Matrix2d::Identity() + (ginv * hess) / f;
}

}  // namespace

Eigen::Matrix2d weingarten_eta(const SurfacePatch& patch, Point p, WeingartenMethod method) {
  const SurfaceJets s = surface_jets(patch, p);
  if (method == WeingartenMethod::Projection) return values(s.A);
  return closed_form_weingarten(s);
}

double verify_A_psi(const SurfacePatch& patch, Point p) {
  const SurfaceJets s = surface_jets(patch, p);
  const Eigen::Matrix2d ginv = values(s.g_inv);
  Eigen::Matrix2d pairing;  // <psi_c, d_a psi>
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a) pairing(c, a) = inner(s.dpsi[c].value(), s.dpsi[a].value());
  const Eigen::Matrix2d a_psi = -ginv * pairing;
  return (a_psi + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
}

double normal_frame_residual(const SurfacePatch& patch, Point p) {
  const SurfaceJets s = surface_jets(patch, p);
  const MinkowskiVec eta = s.eta.value(), psi = s.psi.value();
  double r = std::abs(inner(eta, eta));
  r = std::max(r, std::abs(inner(psi, eta) - 1.0));
  for (int a = 0; a < 2; ++a) r = std::max(r, std::abs(inner(eta, s.dpsi[a].value())));
  return r;
}

double normal_connection_residual(const SurfacePatch& patch, Point p) {
  const SurfaceJets s = surface_jets(patch, p);
  const MinkowskiVec eta = s.eta.value(), psi = s.psi.value();
  double r = 0.0;
  for (int a = 0; a < 2; ++a) {
    const MinkowskiVec de = s.deta[a].value();
    // normal part of d eta in the basis {psi, eta} is <de,eta> psi + <de,psi> eta
    r = std::max({r, std::abs(inner(de, eta)), std::abs(inner(de, psi))});
  }
  return r;
}

PointGeometry point_geometry(const SurfaceJets& s, Point p) {
  PointGeometry pg;
  pg.at = p;
  pg.psi = s.psi.value();
  pg.g = s.g.value();
  pg.g_inv = values(s.g_inv);
  pg.sqrt_det_g = std::sqrt(pg.g.determinant());
  pg.eta = s.eta.value();
  pg.A_eta = values(s.A);
  pg.II_eta = values(s.II);
  pg.K = -pg.A_eta.trace();
  pg.dkr = pg.A_eta.determinant();
  pg.quartic = 2.0 * pg.dkr;
  pg.gap_low = pg.K * pg.K - 4.0 * pg.dkr;
  pg.gap_high = 2.0 * (pg.A_eta * pg.A_eta).trace() - pg.K * pg.K;

  std::array<MinkowskiVec, 2> frame{s.dpsi[0].value(), s.dpsi[1].value()};
  std::array<std::array<MinkowskiVec, 2>, 2> second;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      MinkowskiVec v = s.ddpsi[a][b].value();
      const Eigen::Vector2d t(inner(v, frame[0]), inner(v, frame[1]));
      const Eigen::Vector2d coeff = pg.g_inv * t;
      second[a][b] = v - coeff[0] * frame[0] - coeff[1] * frame[1];
    }
  MinkowskiVec H;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) H += (0.5 * pg.g_inv(a, b)) * second[a][b];
  pg.H = H;
  pg.H_sq = inner(H, H);
  double norm = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          norm += pg.g_inv(a, c) * pg.g_inv(b, d) * inner(second[a][b], second[c][d]);
  pg.second_form_sq = norm;
  return pg;
}

PointGeometry point_geometry(const SurfacePatch& patch, Point p) {
  return point_geometry(surface_jets(patch, p), p);
}

GaussMaps gauss_maps(const SurfacePatch& patch, Point p) {
  const SurfaceJets s = surface_jets(patch, p);
  const double psi0 = s.psi[0].value();
  const double eta0 = s.eta[0].value();
  if (std::abs(eta0) < 1e-14)
    throw GeometryError(ErrorCode::GaussMapUndefined, "eta0 vanishes, G^P undefined");
  GaussMaps m;
  m.GF = (1.0 / psi0) * s.psi.value();
  m.GP = (-1.0 / eta0) * s.eta.value();

  const JetVec4 gp = (-1.0 * reciprocal(s.eta[0])) * s.eta;
  Eigen::Matrix<double, 4, 2> jac;
  for (int a = 0; a < 2; ++a) {
    const MinkowskiVec d = gp.derivative(axis_of(a)).value();
    for (int i = 0; i < 4; ++i) jac(i, a) = d[i];
  }
  const Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(jac);
  const auto sv = svd.singularValues();
  const double tol = 1e-8 * std::max(1.0, jac.cwiseAbs().maxCoeff());
  m.GP_jacobian_rank = static_cast<int>((sv.array() > tol).count());
  return m;
}

NondegeneracyReport is_nondegenerate(const SurfacePatch& patch, std::span<const Point> samples,
                                     double threshold) {
  NondegeneracyReport r;
  for (const Point& p : samples) {
    const PointGeometry pg = point_geometry(patch, p);
    const double ad = std::abs(pg.dkr);
    if (ad < r.min_abs_dkr) {
      r.min_abs_dkr = ad;
      r.worst = p;
    }
    const double det_ii = pg.II_eta.determinant();
    if (!(pg.II_eta(0, 0) > 0.0 && det_ii > 0.0)) r.ii_positive_definite = false;
    if (det_ii < 0.0) r.ii_indefinite_somewhere = true;
  }
  r.nondegenerate = r.min_abs_dkr > threshold;
  return r;
}

}  // namespace lightcone
