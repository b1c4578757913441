#pragma once

#include <array>
#include <cstddef>

#include "lightcone/minkowski.hpp"

namespace lightcone {

enum class Axis { U, V };

/// Bivariate Taylor jet truncated at total degree 4.
///
/// coeff(i, j) is d^{i+j} f / du^i dv^j divided by i! j!, taken at the base
/// point of the chart. The order is fixed: the curvature of the eta-second
/// fundamental form needs second derivatives of a tensor that is itself
/// second order in the immersion, so four is the smallest order that reaches
/// it and anything higher only costs time.
///
/// Jets obtained by differentiation keep the same storage; the coefficients
/// of the top degree are then zero and the caller is responsible for knowing
/// how many orders remain exact (see SurfacePatch::exact_order()).
class Jet2 {
 public:
  static constexpr int kOrder = 4;
  static constexpr int kSize = (kOrder + 1) * (kOrder + 2) / 2;

  constexpr Jet2() = default;
  constexpr Jet2(double constant) { c_[0] = constant; }  // NOLINT: implicit scalar promotion

  /// Jet of the coordinate function `axis` at a base point where it equals `value`.
  static Jet2 variable(Axis axis, double value);

  static constexpr std::size_t index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }

  double coeff(int i, int j) const;
  double& coeff(int i, int j);
  double value() const { return c_[0]; }

  /// Mixed partial d^{i+j} f / du^i dv^j at the base point. Throws OrderExceeded.
  double partial(int i, int j) const;

  Jet2 derivative(Axis axis) const;

  /// Taylor polynomial evaluated at the displacement (du, dv).
  double evaluate(double du, double dv) const;

  /// Zero every coefficient of total degree above `order`.
  Jet2 truncated(int order) const;

  const std::array<double, kSize>& coefficients() const { return c_; }

  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);
  Jet2& operator*=(double s);
  Jet2& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Jet2& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }

 private:
  std::array<double, kSize> c_{};
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator-(Jet2 a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator-(Jet2 a);
Jet2 operator*(double s, Jet2 a);
Jet2 operator*(Jet2 a, double s);
Jet2 operator/(Jet2 a, double s);
Jet2 operator+(Jet2 a, double s);
Jet2 operator+(double s, Jet2 a);
Jet2 operator-(Jet2 a, double s);
Jet2 operator-(double s, Jet2 a);

/// Throws DivisionByZeroJet when the constant term vanishes.
Jet2 reciprocal(const Jet2& a);

// Composition with analytic functions. log and sqrt throw DomainError for a
// non-positive constant term; pow requires a positive base.
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 pow(const Jet2& a, double p);

enum class AnalyticFn { Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh };
Jet2 apply_analytic(AnalyticFn f, const Jet2& a);

/// Jets of the four components of a map into L^4.
struct JetVec4 {
  std::array<Jet2, 4> x{};

  Jet2& operator[](std::size_t i) { return x[i]; }
  const Jet2& operator[](std::size_t i) const { return x[i]; }

  MinkowskiVec value() const { return {x[0].value(), x[1].value(), x[2].value(), x[3].value()}; }
  JetVec4 derivative(Axis axis) const;
  JetVec4 truncated(int order) const;
  MinkowskiVec evaluate(double du, double dv) const;

  static JetVec4 constant(const MinkowskiVec& v);
};

JetVec4 operator+(const JetVec4& a, const JetVec4& b);
JetVec4 operator-(const JetVec4& a, const JetVec4& b);
JetVec4 operator-(const JetVec4& a);
JetVec4 operator*(const Jet2& s, const JetVec4& a);
JetVec4 operator*(double s, const JetVec4& a);
JetVec4 apply(const Mat4& m, const JetVec4& v);

/// Minkowski inner product evaluated in jet arithmetic.
Jet2 inner(const JetVec4& a, const JetVec4& b);

}  // namespace lightcone
