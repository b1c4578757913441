#include "lightcone/metric.hpp"

#include <cmath>

#include <Eigen/LU>

#include "lightcone/error.hpp"

namespace lightcone {

Eigen::Matrix2d values(const JetMat2& m) {
  Eigen::Matrix2d r;
  r << m[0][0].value(), m[0][1].value(), m[1][0].value(), m[1][1].value();
  return r;
}

JetMat2 derivative(const JetMat2& m, Axis axis) {
  JetMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = m[i][j].derivative(axis);
  return r;
}

Eigen::Matrix2d MetricField::value() const {
  Eigen::Matrix2d r;
  r << E.value(), F.value(), F.value(), G.value();
  return r;
}

bool MetricField::riemannian() const {
  return E.value() > 0.0 && determinant().value() > 0.0;
}

JetMat2 MetricField::inverse() const {
  const Jet2 det = determinant();
  const double scale = std::max({std::abs(E.value()), std::abs(G.value()), std::abs(F.value())});
  if (!(std::abs(det.value()) > 1e-14 * scale * scale))
    throw GeometryError(ErrorCode::DegenerateMetric, "metric determinant vanishes");
  const Jet2 inv = reciprocal(det);
  JetMat2 r;
  r[0][0] = G * inv;
  r[0][1] = -(F * inv);
  r[1][0] = r[0][1];
  r[1][1] = E * inv;
  return r;
}

Christoffels christoffels(const MetricField& m) {
  const JetMat2 ginv = m.inverse();
  // dg[k][a][b] = d_k g_ab
  std::array<std::array<std::array<Jet2, 2>, 2>, 2> dg;
  for (int k = 0; k < 2; ++k) {
    const Axis ax = k == 0 ? Axis::U : Axis::V;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dg[k][a][b] = m.at(a, b).derivative(ax);
  }
  Christoffels gamma;
  for (int a = 0; a < 2; ++a)
    for (int b = a; b < 2; ++b) {
      // lowered symbol Gamma_{d,ab} = (d_a g_db + d_b g_da - d_d g_ab) / 2
      std::array<Jet2, 2> lowered;
      for (int d = 0; d < 2; ++d) lowered[d] = 0.5 * (dg[a][d][b] + dg[b][d][a] - dg[d][a][b]);
      for (int c = 0; c < 2; ++c) {
        gamma[c][a][b] = ginv[c][0] * lowered[0] + ginv[c][1] * lowered[1];
        gamma[c][b][a] = gamma[c][a][b];
      }
    }
  return gamma;
}

double brioschi_curvature(const MetricField& m) {
  const double E = m.E.value(), F = m.F.value(), G = m.G.value();
  const double det = E * G - F * F;
  const double scale = std::max({std::abs(E), std::abs(G), std::abs(F)});
  if (!(std::abs(det) > 1e-14 * scale * scale))
    throw GeometryError(ErrorCode::DegenerateMetric, "metric determinant vanishes");

  const double Eu = m.E.partial(1, 0), Ev = m.E.partial(0, 1);
  const double Fu = m.F.partial(1, 0), Fv = m.F.partial(0, 1);
  const double Gu = m.G.partial(1, 0), Gv = m.G.partial(0, 1);
  const double Evv = m.E.partial(0, 2), Fuv = m.F.partial(1, 1), Guu = m.G.partial(2, 0);

  Eigen::Matrix3d first;
  first << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
      Fv - 0.5 * Gu, E, F,
      0.5 * Gv, F, G;
  Eigen::Matrix3d second;
  second << 0.0, 0.5 * Ev, 0.5 * Gu,
      0.5 * Ev, E, F,
      0.5 * Gu, F, G;
  return (first.determinant() - second.determinant()) / (det * det);
}

}  // namespace lightcone
