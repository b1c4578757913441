#include "lightcone/jet.hpp"

#include <cmath>
#include <sstream>

#include "lightcone/error.hpp"

namespace lightcone {
namespace {

struct ProductTerm {
  unsigned char out, lhs, rhs;
};

constexpr int kTermCount = 70;

constexpr std::array<ProductTerm, kTermCount> make_product_table() {
  std::array<ProductTerm, kTermCount> t{};
  int n = 0;
  for (int d = 0; d <= Jet2::kOrder; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      for (int i1 = 0; i1 <= i; ++i1)
        for (int j1 = 0; j1 <= j; ++j1)
          t[n++] = {static_cast<unsigned char>(Jet2::index(i, j)),
                    static_cast<unsigned char>(Jet2::index(i1, j1)),
                    static_cast<unsigned char>(Jet2::index(i - i1, j - j1))};
    }
  return t;
}

constexpr auto kProductTable = make_product_table();

void check_indices(int i, int j) {
  if (i < 0 || j < 0 || i + j > Jet2::kOrder) {
    std::ostringstream os;
    os << "requested (" << i << "," << j << ") beyond order " << Jet2::kOrder;
    throw GeometryError(ErrorCode::OrderExceeded, os.str());
  }
}

constexpr double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

/// f(a0 + t) = sum_k taylor[k] t^k, with t the non-constant part of `a`.
/// t has no constant term, so t^5 vanishes under truncation and the sum is exact.
Jet2 compose(const Jet2& a, const std::array<double, Jet2::kOrder + 1>& taylor) {
  Jet2 t = a;
  t.coeff(0, 0) = 0.0;
  Jet2 r(taylor[Jet2::kOrder]);
  for (int k = Jet2::kOrder - 1; k >= 0; --k) {
    r = r * t;
    r.coeff(0, 0) += taylor[k];
  }
  return r;
}

}  // namespace

Jet2 Jet2::variable(Axis axis, double value) {
  Jet2 j(value);
  if (axis == Axis::U)
    j.c_[index(1, 0)] = 1.0;
  else
    j.c_[index(0, 1)] = 1.0;
  return j;
}

double Jet2::coeff(int i, int j) const {
  check_indices(i, j);
  return c_[index(i, j)];
}

double& Jet2::coeff(int i, int j) {
  check_indices(i, j);
  return c_[index(i, j)];
}

double Jet2::partial(int i, int j) const {
  check_indices(i, j);
  return factorial(i) * factorial(j) * c_[index(i, j)];
}

Jet2 Jet2::derivative(Axis axis) const {
  Jet2 r;
  for (int d = 0; d < kOrder; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      if (axis == Axis::U)
        r.c_[index(i, j)] = (i + 1) * c_[index(i + 1, j)];
      else
        r.c_[index(i, j)] = (j + 1) * c_[index(i, j + 1)];
    }
  return r;
}

double Jet2::evaluate(double du, double dv) const {
  double sum = 0.0;
  for (int d = 0; d <= kOrder; ++d)
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      sum += c_[index(i, j)] * std::pow(du, i) * std::pow(dv, j);
    }
  return sum;
}

Jet2 Jet2::truncated(int order) const {
  Jet2 r = *this;
  for (int d = std::max(order + 1, 0); d <= kOrder; ++d)
    for (int j = 0; j <= d; ++j) r.c_[index(d - j, j)] = 0.0;
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet2& Jet2::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  std::array<double, kSize> r{};
  for (const auto& term : kProductTable) r[term.out] += c_[term.lhs] * o.c_[term.rhs];
  c_ = r;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) { return *this *= reciprocal(o); }

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r = a;
  return r *= b;
}
Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
Jet2 operator-(Jet2 a) { return a *= -1.0; }
Jet2 operator*(double s, Jet2 a) { return a *= s; }
Jet2 operator*(Jet2 a, double s) { return a *= s; }
Jet2 operator/(Jet2 a, double s) { return a *= 1.0 / s; }
Jet2 operator+(Jet2 a, double s) { return a += s; }
Jet2 operator+(double s, Jet2 a) { return a += s; }
Jet2 operator-(Jet2 a, double s) { return a -= s; }
Jet2 operator-(double s, Jet2 a) {
  a *= -1.0;
  return a += s;
}

Jet2 reciprocal(const Jet2& a) {
  const double a0 = a.value();
  if (a0 == 0.0 || !std::isfinite(a0))
    throw GeometryError(ErrorCode::DivisionByZeroJet, "constant term of divisor is zero");
  const double inv = 1.0 / a0;
  // d^k/dx^k (1/x) / k! = (-1)^k / x^{k+1}
  std::array<double, 5> t{};
  double p = inv;
  for (int k = 0; k <= Jet2::kOrder; ++k) {
    t[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p *= inv;
  }
  return compose(a, t);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value());
  std::array<double, 5> t{};
  for (int k = 0; k <= Jet2::kOrder; ++k) t[k] = e / factorial(k);
  return compose(a, t);
}

Jet2 log(const Jet2& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw GeometryError(ErrorCode::DomainError, "log of non-positive jet");
  std::array<double, 5> t{};
  t[0] = std::log(a0);
  double p = 1.0;
  for (int k = 1; k <= Jet2::kOrder; ++k) {
    p /= a0;
    t[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
  }
  return compose(a, t);
}

Jet2 pow(const Jet2& a, double exponent) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw GeometryError(ErrorCode::DomainError, "pow of non-positive jet");
  // binomial series: x^p (1 + t/x)^p
  std::array<double, 5> t{};
  double binom = 1.0;
  for (int k = 0; k <= Jet2::kOrder; ++k) {
    t[k] = binom * std::pow(a0, exponent - k);
    binom *= (exponent - k) / (k + 1);
  }
  return compose(a, t);
}

Jet2 sqrt(const Jet2& a) {
  if (!(a.value() > 0.0)) throw GeometryError(ErrorCode::DomainError, "sqrt of non-positive jet");
  return pow(a, 0.5);
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cyc{s, c, -s, -c};
  std::array<double, 5> t{};
  for (int k = 0; k <= Jet2::kOrder; ++k) t[k] = cyc[k % 4] / factorial(k);
  return compose(a, t);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> cyc{c, -s, -c, s};
  std::array<double, 5> t{};
  for (int k = 0; k <= Jet2::kOrder; ++k) t[k] = cyc[k % 4] / factorial(k);
  return compose(a, t);
}

Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::array<double, 5> t{};
  for (int k = 0; k <= Jet2::kOrder; ++k) t[k] = (k % 2 == 0 ? s : c) / factorial(k);
  return compose(a, t);
}

Jet2 cosh(const Jet2& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  std::array<double, 5> t{};
  for (int k = 0; k <= Jet2::kOrder; ++k) t[k] = (k % 2 == 0 ? c : s) / factorial(k);
  return compose(a, t);
}

Jet2 apply_analytic(AnalyticFn f, const Jet2& a) {
  switch (f) {
    case AnalyticFn::Exp: return exp(a);
    case AnalyticFn::Log: return log(a);
    case AnalyticFn::Sqrt: return sqrt(a);
    case AnalyticFn::Sin: return sin(a);
    case AnalyticFn::Cos: return cos(a);
    case AnalyticFn::Sinh: return sinh(a);
    case AnalyticFn::Cosh: return cosh(a);
  }
  throw GeometryError(ErrorCode::InvalidArgument, "unknown analytic function");
}

JetVec4 JetVec4::derivative(Axis axis) const {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = x[i].derivative(axis);
  return r;
}

JetVec4 JetVec4::truncated(int order) const {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = x[i].truncated(order);
  return r;
}

MinkowskiVec JetVec4::evaluate(double du, double dv) const {
  return {x[0].evaluate(du, dv), x[1].evaluate(du, dv), x[2].evaluate(du, dv),
          x[3].evaluate(du, dv)};
}

JetVec4 JetVec4::constant(const MinkowskiVec& v) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = Jet2(v[i]);
  return r;
}

JetVec4 operator+(const JetVec4& a, const JetVec4& b) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = a.x[i] + b.x[i];
  return r;
}

JetVec4 operator-(const JetVec4& a, const JetVec4& b) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = a.x[i] - b.x[i];
  return r;
}

JetVec4 operator-(const JetVec4& a) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = -a.x[i];
  return r;
}

JetVec4 operator*(const Jet2& s, const JetVec4& a) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = s * a.x[i];
  return r;
}

JetVec4 operator*(double s, const JetVec4& a) {
  JetVec4 r;
  for (std::size_t i = 0; i < 4; ++i) r.x[i] = s * a.x[i];
  return r;
}

JetVec4 apply(const Mat4& m, const JetVec4& v) {
  JetVec4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (m(i, j) != 0.0) r.x[i] += m(i, j) * v.x[j];
  return r;
}

Jet2 inner(const JetVec4& a, const JetVec4& b) {
  Jet2 r = a.x[1] * b.x[1];
  r += a.x[2] * b.x[2];
  r += a.x[3] * b.x[3];
  r -= a.x[0] * b.x[0];
  return r;
}

}  // namespace lightcone
