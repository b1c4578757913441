#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lightcone/harmonics.hpp"

namespace lightcone {

struct SearchConfig {
  int l_max = 3;
  double box = 0.15;  // |a| <= box for every free coefficient
  int n_theta = 16;
  int n_phi = 32;
  int starts = 20;
  int max_evaluations = 1500;  // per simplex run
  int restarts = 2;
  double initial_step = 0.02;
  double variance_tolerance = 1e-8;
  double umbilic_threshold = 1e-5;  // on sup gap_low
  double candidate_gap = 1e-3;      // sup gap_low at or above this with small variance is a candidate
  double barrier_weight = 1.0;
  double barrier_epsilon = 0.02;
  std::uint64_t seed = 1;
  bool freeze_degree0 = true;
  bool freeze_degree1 = true;
  bool zero_start = false;  // first start at the round sphere instead of a random point

  /// Throws InvalidArgument on non-positive tolerances or out-of-range sizes.
  void validate() const;
  /// Lowest degree the optimizer may move.
  int first_free_degree() const;
  /// Free (l, m) pairs in parameter order.
  std::vector<std::pair<int, int>> free_modes() const;
};

/// Raised for config files that are not valid JSON or do not match the schema.
/// line/column are 1-based; 0 when the problem is not tied to a position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// Unknown keys and wrong types are rejected. Missing keys keep their defaults.
SearchConfig parse_search_config(std::string_view json);
std::string to_json(const SearchConfig& config);

struct KetaStatistics {
  bool valid = false;       // II_eta Riemannian and the surface evaluable at every node
  double variance = 0.0;    // area-weighted
  double mean = 0.0;
  double sup_deviation = 0.0;  // sup |K^eta - mean|
  double sup_gap_low = 0.0;
  double min_dkr = 0.0;
  double barrier = 0.0;
  double objective = 0.0;   // variance + barrier
  std::string failure;      // why valid is false
};

/// Statistics of K^eta over the Gauss-Legendre grid of the perturbed unit sphere.
/// Never throws on geometric failure; the barrier absorbs it.
KetaStatistics keta_statistics(const HarmonicSpec& spec, int n_theta, int n_phi,
                               double barrier_weight = 1.0, double barrier_epsilon = 0.02);

/// Objective of the search: variance of K^eta plus the nondegeneracy barrier.
double keta_variance(const HarmonicSpec& spec, int n_theta, int n_phi,
                     double barrier_weight = 1.0, double barrier_epsilon = 0.02);

enum class Classification { Umbilical, Candidate, Demoted, NotConstant, Indeterminate };

std::string_view to_string(Classification c);

struct TraceRow {
  int start = 0;
  int iteration = 0;
  double objective = 0.0;
  double variance = 0.0;
  double mean = 0.0;
  double sup_gap_low = 0.0;
  std::vector<double> coefficients;
};

struct StartResult {
  int index = 0;
  std::vector<double> initial;
  HarmonicSpec best;
  KetaStatistics stats;
  bool converged = false;
  int evaluations = 0;
  Classification classification = Classification::NotConstant;
  std::string reason;
};

struct SearchReport {
  SearchConfig config;
  std::vector<StartResult> starts;
  std::vector<TraceRow> trace;
  int best_start = -1;  // lowest objective
  bool all_minimizers_umbilical = false;  // among starts with variance below tolerance
  bool floor_consistent = false;    // every trace row with small variance has mean K^eta >= 2 - 1e-3
  bool umbilic_mean_consistent = false;  // small variance and gap imply |mean - 2| < 10 tol
};

/// Multi-start simplex minimisation of keta_variance over the perturbed-sphere family.
/// Results depend only on the config (including the seed).
SearchReport search(const SearchConfig& config);

/// Coefficient vector to spec in the config's free-mode order.
HarmonicSpec spec_from_parameters(const SearchConfig& config, const std::vector<double>& a);

std::string to_json(const SearchReport& report);
void write_trace_csv(std::ostream& out, const SearchReport& report);

}  // namespace lightcone
