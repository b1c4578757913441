#pragma once

#include <array>

#include <Eigen/Core>

#include "lightcone/jet.hpp"

namespace lightcone {

/// 2x2 matrix of jets, row-major: m[row][col].
using JetMat2 = std::array<std::array<Jet2, 2>, 2>;

Eigen::Matrix2d values(const JetMat2& m);
JetMat2 derivative(const JetMat2& m, Axis axis);

/// A symmetric 2x2 metric in chart coordinates, E = g(du,du), F = g(du,dv), G = g(dv,dv).
struct MetricField {
  Jet2 E, F, G;

  Jet2 determinant() const { return E * G - F * F; }
  const Jet2& at(int a, int b) const { return a == 0 ? (b == 0 ? E : F) : (b == 0 ? F : G); }
  Eigen::Matrix2d value() const;
  bool riemannian() const;

  /// Inverse metric entries as jets; throws DegenerateMetric when det vanishes.
  JetMat2 inverse() const;

  static MetricField from(const JetMat2& m) { return {m[0][0], m[0][1], m[1][1]}; }
};

/// Levi-Civita symbols Gamma^c_{ab} stored as gamma[c][a][b]; one order of
/// exactness is lost relative to the metric jets.
using Christoffels = std::array<std::array<std::array<Jet2, 2>, 2>, 2>;

/// Throws DegenerateMetric when det g vanishes at the base point.
Christoffels christoffels(const MetricField& m);

/// Gauss curvature from E, F, G and their derivatives up to second order
/// (Brioschi). Valid for any non-degenerate metric; throws DegenerateMetric.
double brioschi_curvature(const MetricField& m);

}  // namespace lightcone
