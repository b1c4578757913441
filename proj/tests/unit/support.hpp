#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "lightcone/catalog.hpp"
#include "lightcone/surface.hpp"

namespace lightcone::testing {

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

inline std::vector<Point> interior_sphere_points(std::mt19937_64& rng, int n) {
  // keep away from the chart poles so plain finite differences stay accurate
  std::uniform_real_distribution<double> theta(0.3, 2.8), phi(0.0, 6.2);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back({theta(rng), phi(rng)});
  return out;
}

// Central-difference derivatives of the chart position, independent of the jet machinery.
struct FiniteDifferenceFrame {
  Eigen::Vector4d psi, du, dv;

  FiniteDifferenceFrame(const SurfacePatch& patch, Point p, double h = 1e-5) {
    auto at = [&](double a, double b) { return patch.position({p.u + a, p.v + b}).to_eigen(); };
    psi = at(0, 0);
    du = (at(-2 * h, 0) - 8 * at(-h, 0) + 8 * at(h, 0) - at(2 * h, 0)) / (12 * h);
    dv = (at(0, -2 * h) - 8 * at(0, -h) + 8 * at(0, h) - at(0, 2 * h)) / (12 * h);
  }
};

inline double minkowski(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

/// Fourth-order central differences of a scalar function of the chart point.
struct ScalarDerivatives {
  double f = 0, fu = 0, fv = 0, fuu = 0, fuv = 0, fvv = 0;
};

inline ScalarDerivatives differentiate(const std::function<double(Point)>& f, Point p, double h = 1e-3) {
  auto at = [&](double a, double b) { return f({p.u + a * h, p.v + b * h}); };
  ScalarDerivatives d;
  d.f = at(0, 0);
  d.fu = (at(-2, 0) - 8 * at(-1, 0) + 8 * at(1, 0) - at(2, 0)) / (12 * h);
  d.fv = (at(0, -2) - 8 * at(0, -1) + 8 * at(0, 1) - at(0, 2)) / (12 * h);
  d.fuu = (-at(-2, 0) + 16 * at(-1, 0) - 30 * d.f + 16 * at(1, 0) - at(2, 0)) / (12 * h * h);
  d.fvv = (-at(0, -2) + 16 * at(0, -1) - 30 * d.f + 16 * at(0, 1) - at(0, 2)) / (12 * h * h);
  // Richardson on the 2nd-order mixed stencil at h and 2h
  const double mixed_h = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
  const double mixed_2h = (at(2, 2) - at(2, -2) - at(-2, 2) + at(-2, -2)) / (16 * h * h);
  d.fuv = (4 * mixed_h - mixed_2h) / 3;
  return d;
}

inline HarmonicSpec sample_spec() { return {{{2, 0, 0.05}, {3, 1, -0.03}, {2, -2, 0.02}, {4, 3, 0.01}}}; }

}  // namespace lightcone::testing
