#include "lightcone/minkowski.hpp"

#include <cmath>
#include <sstream>

#include "lightcone/error.hpp"

namespace lightcone {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotUnitTimelike: return "NotUnitTimelike";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::NonpositiveRadialFunction: return "NonpositiveRadialFunction";
    case ErrorCode::DivisionByZeroJet: return "DivisionByZeroJet";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::OrderExceeded: return "OrderExceeded";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::DegenerateNormalFrame: return "DegenerateNormalFrame";
    case ErrorCode::GaussMapUndefined: return "GaussMapUndefined";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::DegeneracyViolation: return "DegeneracyViolation";
    case ErrorCode::NotRiemannianII: return "NotRiemannianII";
    case ErrorCode::NotCompact: return "NotCompact";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

CausalType classify(const MinkowskiVec& v, double tol) {
  if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0 && v[3] == 0.0) return CausalType::Zero;
  const double q = inner(v, v);
  if (std::abs(q) <= tol) return CausalType::Lightlike;
  return q < 0.0 ? CausalType::Timelike : CausalType::Spacelike;
}

bool in_future_lightcone(const MinkowskiVec& v, double tol) {
  return std::abs(inner(v, v)) <= tol && v[0] > 0.0;
}

Mat4 signature_matrix() {
  Mat4 g = Mat4::Identity();
  g(0, 0) = -1.0;
  return g;
}

MinkowskiVec apply(const Mat4& m, const MinkowskiVec& v) {
  return MinkowskiVec::from_eigen(m * v.to_eigen());
}

Mat4 boost_to(const MinkowskiVec& u, double tol) {
  if (std::abs(inner(u, u) + 1.0) > tol || !(u[0] < 0.0)) {
    std::ostringstream os;
    os << "expected <u,u> = -1 and u0 < 0, got <u,u> = " << inner(u, u) << ", u0 = " << u[0];
    throw GeometryError(ErrorCode::NotUnitTimelike, os.str());
  }

  std::array<MinkowskiVec, 4> columns;
  columns[0] = -u;

  // Seeds e1, e2, e3; at each step take the seed whose residual is largest.
  std::array<bool, 3> used{};
  for (int k = 1; k < 4; ++k) {
    int best = -1;
    double best_norm = -1.0;
    MinkowskiVec best_residual;
    for (int s = 0; s < 3; ++s) {
      if (used[s]) continue;
      MinkowskiVec e;
      e[s + 1] = 1.0;
      MinkowskiVec r = e;
      for (int j = 0; j < k; ++j) {
        const double sign = j == 0 ? -1.0 : 1.0;  // <c_j, c_j>
        r -= (inner(e, columns[j]) / sign) * columns[j];
      }
      const double n2 = inner(r, r);
      if (n2 > best_norm + 1e-14) {
        best = s;
        best_norm = n2;
        best_residual = r;
      }
    }
    used[best] = true;
    columns[k] = best_residual * (1.0 / std::sqrt(best_norm));
  }

  Mat4 b;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) b(i, j) = columns[j][i];
  return b;
}

}  // namespace lightcone
