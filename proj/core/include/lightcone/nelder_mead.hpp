#pragma once

#include <functional>

#include <Eigen/Core>

namespace lightcone {

struct NelderMeadOptions {
  double alpha = 1.0;  // reflection
  double gamma = 2.0;  // expansion
  double rho = 0.5;    // contraction
  double sigma = 0.5;  // shrink
  double initial_step = 0.05;
  int max_evaluations = 2000;
  double f_tolerance = 1e-15;  // spread of simplex values
  double x_tolerance = 1e-12;  // simplex diameter
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Called after every iteration with the current best point and value.
using NelderMeadObserver = std::function<void(int iteration, const Eigen::VectorXd& best, double f)>;

/// Deterministic Nelder-Mead simplex on an axis-aligned initial simplex.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& options = {},
                             const NelderMeadObserver& observer = {});

}  // namespace lightcone
