#include "lightcone/nelder_mead.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace lightcone {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& options,
                             const NelderMeadObserver& observer) {
  const auto n = x0.size();
  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    return f(x);
  };

  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      s[i] = simplex[order[i]];
      v[i] = values[order[i]];
    }
    simplex.swap(s);
    values.swap(v);
  };

  sort_simplex();
  while (result.evaluations < options.max_evaluations) {
    double diameter = 0.0;
    for (Eigen::Index i = 1; i <= n; ++i)
      diameter = std::max(diameter, (simplex[i] - simplex[0]).lpNorm<Eigen::Infinity>());
    if (values[n] - values[0] <= options.f_tolerance && diameter <= options.x_tolerance) {
      result.converged = true;
      break;
    }
    if (diameter <= options.x_tolerance * 1e-3) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd& worst = simplex[n];

    Eigen::VectorXd xr = centroid + options.alpha * (centroid - worst);
    const double fr = eval(xr);
    if (fr < values[0]) {
      Eigen::VectorXd xe = centroid + options.gamma * (xr - centroid);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      const bool outside = fr < values[n];
      Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + options.rho * (xr - centroid))
                                   : Eigen::VectorXd(centroid + options.rho * (worst - centroid));
      const double fc = eval(xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (Eigen::Index i = 1; i <= n; ++i) {
          simplex[i] = simplex[0] + options.sigma * (simplex[i] - simplex[0]);
          values[i] = eval(simplex[i]);
        }
      }
    }
    sort_simplex();
    if (observer) observer(result.iterations, simplex[0], values[0]);
  }
  result.x = simplex[0];
  result.f = values[0];
  return result;
}

}  // namespace lightcone
