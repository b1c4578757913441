#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

#include "lightcone/catalog.hpp"
#include "lightcone/error.hpp"
#include "lightcone/global.hpp"

using namespace lightcone;
using namespace lightcone::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("grid quadrature reproduces the sphere area") {
  for (double r : {0.5, 1.0, 2.0}) {
    const SphereGrid grid(round_sphere({-1, 0, 0, 0}, r), 32, 64);
    CHECK(std::abs(surface_area(grid) / (4 * kPi * r * r) - 1) < 1e-8);
    CHECK(std::abs(gauss_bonnet(grid) - 4 * kPi) < 1e-10);
  }
  const SphereGrid boosted(round_sphere({-std::sqrt(2.0), 0.6, 0.8, 0}, 1.3), 32, 64);
  CHECK(std::abs(surface_area(boosted) / (4 * kPi * 1.3 * 1.3) - 1) < 1e-8);
}

TEST_CASE("Gauss-Bonnet on perturbed spheres and quadrature convergence") {
  std::mt19937_64 rng(51);
  const SurfacePatch s = perturbed_sphere(random_harmonic_spec(rng, 2, 4, 0.05));
  const SphereGrid coarse(s, 32, 64), fine(s, 64, 128);
  CHECK(std::abs(gauss_bonnet(fine) / (4 * kPi) - 1) < 1e-6);
  CHECK(std::abs(gauss_bonnet(fine) - gauss_bonnet(coarse)) < 1e-9);
  CHECK(std::abs(gauss_bonnet_eta(fine) - 4 * kPi) < 1e-5);
}

TEST_CASE("II_eta area") {
  for (double r : {0.5, 2.0}) {
    const SecondFormArea a = ii_eta_area(SphereGrid(round_sphere({-1, 0, 0, 0}, r), 32, 64));
    CHECK(std::abs(a.area - 2 * kPi) < 1e-10);
    CHECK(a.within_bound);
  }
  const SecondFormArea p = ii_eta_area(SphereGrid(perturbed_sphere(sample_spec()), 32, 64));
  CHECK(p.area < 2 * kPi);
  CHECK(p.within_bound);
}

TEST_CASE("integration against the II_eta measure needs d > 0") {
  // a large degree-2 perturbation makes d negative near the poles
  const SphereGrid grid(perturbed_sphere({{{2, 0, 1.2}}}), 16, 32);
  double min_d = 1e300;
  for (const auto& n : grid.nodes()) min_d = std::min(min_d, n.geometry.dkr);
  REQUIRE(min_d <= 0.0);
  try {
    ii_eta_area(grid);
    FAIL("expected DegeneracyViolation");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::DegeneracyViolation);
  }
  CHECK_THROWS_AS(keta_floor_check(grid), GeometryError);
}

TEST_CASE("noncompact surfaces are rejected") {
  try {
    SphereGrid(product_cylinder(), 8, 16);
    FAIL("expected NotCompact");
  } catch (const GeometryError& e) {
    CHECK(e.code() == ErrorCode::NotCompact);
  }
  CHECK_THROWS_AS(global_report(paraboloid_graph(), 8, 16), GeometryError);
}

TEST_CASE("first eigenvalue of the round sphere") {
  for (double r : {0.5, 1.0, 2.0}) {
    const double lambda = lambda1_discrete(round_sphere({-1, 0, 0, 0}, r), 64, 128);
    CHECK(std::abs(lambda * r * r / 2 - 1) < 2e-2);
  }
}

TEST_CASE("eigenvalue refinement is Cauchy-like") {
  const SurfacePatch s = perturbed_sphere(sample_spec());
  const double l32 = lambda1_discrete(s, 32, 64), l48 = lambda1_discrete(s, 48, 96), l64 = lambda1_discrete(s, 64, 128);
  CHECK(std::abs(l48 - l64) * 2 <= std::abs(l32 - l48));
  const EigenEstimate e = lambda1_estimate(s, 64, 128);
  CHECK(e.lambda1 == l64);
  CHECK(e.refinement_error > 0);
  CHECK(e.refinement_error < 1e-3);
}

TEST_CASE("eigenvalue bound on perturbed spheres") {
  const SurfacePatch s = perturbed_sphere(sample_spec());
  const GlobalReport r = global_report(s, 48, 96);
  CHECK(r.bound_holds);
  CHECK(r.lambda1.lambda1 <= r.bound_rhs * (1 + kEigenBoundSlack));
  const SphereGrid grid(round_sphere(), 32, 64);
  CHECK(reilly_bound(grid) == doctest::Approx(2.0));
}

TEST_CASE("d-argmax floor and umbilic location") {
  const SphereGrid round(round_sphere({-1, 0, 0, 0}, 0.7), 16, 32);
  const KetaFloor f0 = keta_floor_check(round);
  CHECK(f0.k2_over_d == doctest::Approx(4.0));
  CHECK(f0.floor_holds);

  std::mt19937_64 rng(52);
  const SphereGrid grid(perturbed_sphere(random_harmonic_spec(rng, 2, 3, 0.03)), 32, 64);
  const KetaFloor f = keta_floor_check(grid);
  CHECK(f.floor_holds);
  CHECK(f.reaches_four);
  double grid_max = 0;
  for (const auto& n : grid.nodes()) grid_max = std::max(grid_max, n.geometry.dkr);
  CHECK(f.q0.geometry.dkr >= grid_max);

  const LocatedPoint u = locate_umbilic(grid);
  CHECK(u.geometry.gap_low < 1e-6);
  CHECK(u.geometry.gap_high < 1e-6);
}

TEST_CASE("report and node dump formats") {
  const SurfacePatch s = round_sphere({-1, 0, 0, 0}, 2.0);
  const GlobalReport r = global_report(s, 16, 32);
  const auto j = nlohmann::json::parse(to_json(r));
  for (const char* key : {"surface", "n_theta", "n_phi", "gauss_bonnet", "ii_eta_area", "lambda1", "bound_rhs", "margins"})
    CHECK(j.contains(key));
  CHECK(j["ii_eta_area"].get<double>() == doctest::Approx(2 * kPi));

  const SphereGrid grid(s, 4, 6);
  std::vector<PointGeometry> nodes;
  for (const auto& n : grid.nodes()) nodes.push_back(n.geometry);
  std::ostringstream out;
  write_node_csv(out, nodes);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,phi,K,Keta,d,gap_low,gap_high,psi0");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 24);
}
