#pragma once

#include <vector>

namespace lightcone {

struct QuadratureRule {
  std::vector<double> nodes;    // ascending in [-1, 1]
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n);

}  // namespace lightcone
