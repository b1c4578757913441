#include <cmath>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "lightcone/error.hpp"
#include "lightcone/search.hpp"

using namespace lightcone;

namespace {
SearchConfig tiny_config() {
  SearchConfig c;
  c.l_max = 2;
  c.n_theta = 8;
  c.n_phi = 16;
  c.starts = 2;
  c.max_evaluations = 80;
  c.restarts = 0;
  c.box = 0.05;
  return c;
}
}  // namespace

TEST_CASE("K_eta statistics of round and perturbed spheres") {
  const KetaStatistics round = keta_statistics({}, 16, 32);
  CHECK(round.valid);
  CHECK(round.variance < 1e-20);
  CHECK(round.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(round.sup_gap_low < 1e-12);
  CHECK(round.barrier == 0.0);

  const KetaStatistics bumped = keta_statistics({{{2, 0, 0.05}}}, 16, 32);
  CHECK(bumped.valid);
  CHECK(bumped.variance > 1e-6);
  CHECK(bumped.sup_gap_low > 1e-4);
  CHECK(bumped.objective == bumped.variance);
  CHECK(keta_variance({{{2, 0, 0.05}}}, 16, 32) == bumped.objective);
}

TEST_CASE("barrier activates near degeneracy") {
  const KetaStatistics s = keta_statistics({{{2, 0, 0.05}}}, 16, 32, 1.0, 1.0);
  REQUIRE(s.valid);
  CHECK(s.min_dkr < 1.0);
  CHECK(s.barrier > 0.0);
  CHECK(s.objective >= s.variance + s.barrier - 1e-15);

  const KetaStatistics broken = keta_statistics({{{2, 0, 1.5}}}, 16, 32);
  CHECK_FALSE(broken.valid);
  CHECK_FALSE(broken.failure.empty());
  CHECK(std::isfinite(broken.objective));
  CHECK(broken.objective > 0.0);
}

TEST_CASE("variance is invariant under rotating the perturbation") {
  // Y_20 rotated so its axis lies along x: -Y_20/2 + sqrt(3)/2 Y_22
  const double a = 0.04;
  const KetaStatistics z_axis = keta_statistics({{{2, 0, a}}}, 32, 64);
  const KetaStatistics x_axis = keta_statistics({{{2, 0, -0.5 * a}, {2, 2, 0.5 * std::sqrt(3.0) * a}}}, 32, 64);
  CHECK(std::abs(z_axis.variance - x_axis.variance) < 1e-8 * z_axis.variance + 1e-14);
  CHECK(std::abs(z_axis.mean - x_axis.mean) < 1e-8);
  // a rotation about z permutes Y_22 and Y_2,-2
  const KetaStatistics xy = keta_statistics({{{2, 2, a}}}, 32, 64);
  const KetaStatistics yx = keta_statistics({{{2, -2, a}}}, 32, 64);
  CHECK(std::abs(xy.variance - yx.variance) < 1e-8 * xy.variance);
}

TEST_CASE("free modes and parameter mapping") {
  SearchConfig c;
  c.l_max = 3;
  CHECK(c.first_free_degree() == 2);
  CHECK(c.free_modes().size() == 12);
  c.freeze_degree1 = false;
  CHECK(c.free_modes().size() == 15);
  c.freeze_degree0 = false;
  CHECK(c.free_modes().size() == 16);

  SearchConfig d;
  d.l_max = 2;
  const HarmonicSpec s = spec_from_parameters(d, {0.1, 0, 0, 0, -0.2});
  double sum = 0;
  for (const auto& t : s.terms) sum += std::abs(t.amplitude);
  CHECK(sum == doctest::Approx(0.3));
  CHECK_THROWS_AS(spec_from_parameters(d, {0.1}), GeometryError);
}

TEST_CASE("config parsing") {
  const SearchConfig c = parse_search_config(R"({"l_max": 2, "box": 0.1, "seed": 7, "zero_start": true})");
  CHECK(c.l_max == 2);
  CHECK(c.box == 0.1);
  CHECK(c.seed == 7);
  CHECK(c.zero_start);
  CHECK(c.starts == SearchConfig{}.starts);

  const SearchConfig round_trip = parse_search_config(to_json(c));
  CHECK(round_trip.l_max == c.l_max);
  CHECK(round_trip.seed == c.seed);

  try {
    parse_search_config("{\n  \"l_max\": 2,\n  \"box\": ,\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 10);
  }
  CHECK_THROWS_AS(parse_search_config(R"({"lmax": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_search_config(R"({"l_max": "2"})"), ConfigError);
  CHECK_THROWS_AS(parse_search_config(R"({"l_max": 2.5})"), ConfigError);
  CHECK_THROWS_AS(parse_search_config(R"({"seed": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_search_config("[1, 2]"), ConfigError);
  CHECK_THROWS(parse_search_config(R"({"l_max": 9})"));
}

TEST_CASE("search is deterministic in the seed") {
  const SearchConfig c = tiny_config();
  const SearchReport a = search(c), b = search(c);
  REQUIRE(a.starts.size() == 2);
  CHECK(to_json(a) == to_json(b));
  std::ostringstream ta, tb;
  write_trace_csv(ta, a);
  write_trace_csv(tb, b);
  CHECK(ta.str() == tb.str());
  CHECK(ta.str().rfind("start,iteration,objective,variance,mean_keta,sup_gap_low,a_2_", 0) == 0);

  SearchConfig other = c;
  other.seed = 2;
  CHECK(search(other).starts[0].initial != a.starts[0].initial);

  for (const auto& s : a.starts) {
    CHECK(s.stats.objective <= keta_variance(spec_from_parameters(c, s.initial), c.n_theta, c.n_phi) + 1e-15);
    for (double x : s.initial) CHECK(std::abs(x) <= c.box);
  }
  const auto j = nlohmann::json::parse(to_json(a));
  CHECK(j.contains("starts"));
  CHECK(j.contains("config"));
}

TEST_CASE("zero start sits at the round sphere") {
  SearchConfig c = tiny_config();
  c.starts = 1;
  c.zero_start = true;
  const SearchReport r = search(c);
  for (double x : r.starts[0].initial) CHECK(x == 0.0);
  CHECK(r.starts[0].classification == Classification::Umbilical);
  CHECK(r.all_minimizers_umbilical);
  CHECK(r.floor_consistent);
  CHECK(r.umbilic_mean_consistent);
}
