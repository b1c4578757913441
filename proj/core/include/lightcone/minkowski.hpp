#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace lightcone {

/// A vector of L^4 in canonical coordinates (x0 is the time coordinate).
struct MinkowskiVec {
  std::array<double, 4> x{};

  constexpr MinkowskiVec() = default;
  constexpr MinkowskiVec(double x0, double x1, double x2, double x3) : x{x0, x1, x2, x3} {}

  constexpr double& operator[](std::size_t i) { return x[i]; }
  constexpr double operator[](std::size_t i) const { return x[i]; }

  constexpr MinkowskiVec& operator+=(const MinkowskiVec& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] += o.x[i];
    return *this;
  }
  constexpr MinkowskiVec& operator-=(const MinkowskiVec& o) {
    for (std::size_t i = 0; i < 4; ++i) x[i] -= o.x[i];
    return *this;
  }
  constexpr MinkowskiVec& operator*=(double s) {
    for (auto& c : x) c *= s;
    return *this;
  }

  constexpr double max_abs() const {
    double m = 0.0;
    for (double c : x) m = c < 0 ? (-c > m ? -c : m) : (c > m ? c : m);
    return m;
  }

  Eigen::Vector4d to_eigen() const { return {x[0], x[1], x[2], x[3]}; }
  static MinkowskiVec from_eigen(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
};

constexpr MinkowskiVec operator+(MinkowskiVec a, const MinkowskiVec& b) { return a += b; }
constexpr MinkowskiVec operator-(MinkowskiVec a, const MinkowskiVec& b) { return a -= b; }
constexpr MinkowskiVec operator*(double s, MinkowskiVec a) { return a *= s; }
constexpr MinkowskiVec operator*(MinkowskiVec a, double s) { return a *= s; }
constexpr MinkowskiVec operator-(MinkowskiVec a) { return a *= -1.0; }

/// Signature (-,+,+,+).
constexpr double inner(const MinkowskiVec& a, const MinkowskiVec& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

enum class CausalType { Timelike, Spacelike, Lightlike, Zero };

/// The zero vector is reported separately; `tol` is absolute on inner(v,v).
CausalType classify(const MinkowskiVec& v, double tol = 1e-10);

inline constexpr double kLightconeTolerance = 1e-10;

bool in_future_lightcone(const MinkowskiVec& v, double tol = kLightconeTolerance);

using Mat4 = Eigen::Matrix4d;

/// diag(-1, 1, 1, 1)
Mat4 signature_matrix();

/// Lorentz transform B with B * (-1,0,0,0) = u, built by Minkowski Gram-Schmidt.
/// Throws NotUnitTimelike unless <u,u> = -1 (within tol) and u0 < 0.
Mat4 boost_to(const MinkowskiVec& u, double tol = 1e-10);

MinkowskiVec apply(const Mat4& m, const MinkowskiVec& v);

}  // namespace lightcone
