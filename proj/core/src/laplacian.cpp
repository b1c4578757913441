#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "lightcone/error.hpp"
#include "lightcone/global.hpp"

namespace lightcone {

namespace {

struct Mesh {
  std::vector<MinkowskiVec> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Lat-long triangulation on the quadrature rings, closed by fans to the poles.
Mesh lat_long_mesh(const SurfacePatch& patch, int n_theta, int n_phi) {
  Mesh mesh;
  const auto points = SphereGrid::node_points(n_theta, n_phi);
  const int north = 0;
  const int south = n_theta * n_phi + 1;
  mesh.vertices.resize(static_cast<std::size_t>(south) + 1);
  if (patch.has_polar_chart()) {
    const SurfacePatch polar = patch.polar_view();
    mesh.vertices[north] = polar.position({std::numbers::pi / 2, std::numbers::pi / 2});
    mesh.vertices[south] = polar.position({std::numbers::pi / 2, 3 * std::numbers::pi / 2});
  } else {
    mesh.vertices[north] = patch.position({0.0, 0.0});
    mesh.vertices[south] = patch.position({std::numbers::pi, 0.0});
  }
  for (std::size_t k = 0; k < points.size(); ++k) mesh.vertices[k + 1] = patch.position(points[k]);

  auto ring = [&](int i, int j) { return 1 + i * n_phi + (j % n_phi); };
  for (int j = 0; j < n_phi; ++j) {
    mesh.triangles.push_back({north, ring(0, j), ring(0, j + 1)});
    mesh.triangles.push_back({south, ring(n_theta - 1, j + 1), ring(n_theta - 1, j)});
  }
  for (int i = 0; i + 1 < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const int a = ring(i, j), b = ring(i, j + 1), c = ring(i + 1, j + 1), d = ring(i + 1, j);
      mesh.triangles.push_back({a, d, c});
      mesh.triangles.push_back({a, c, b});
    }
  return mesh;
}

// Cotangent stiffness and lumped mass, using chords measured with the Minkowski product.
void assemble(const Mesh& mesh, Eigen::SparseMatrix<double>& stiffness, Eigen::VectorXd& mass) {
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.triangles.size() * 12);
  mass = Eigen::VectorXd::Zero(n);
  for (const auto& t : mesh.triangles) {
    const MinkowskiVec& p0 = mesh.vertices[t[0]];
    const MinkowskiVec e1 = mesh.vertices[t[1]] - p0;
    const MinkowskiVec e2 = mesh.vertices[t[2]] - p0;
    const double g11 = inner(e1, e1), g12 = inner(e1, e2), g22 = inner(e2, e2);
    const double gram = g11 * g22 - g12 * g12;
    if (!(gram > 0.0))
      throw GeometryError(ErrorCode::EigenSolverFailure, "mesh triangle is not spacelike");
    const double area = 0.5 * std::sqrt(gram);
    for (int k = 0; k < 3; ++k) {
      const int i = t[k], j = t[(k + 1) % 3], o = t[(k + 2) % 3];
      const MinkowskiVec a = mesh.vertices[i] - mesh.vertices[o];
      const MinkowskiVec b = mesh.vertices[j] - mesh.vertices[o];
      // cot of the angle opposite edge (i, j) is <a,b> / (2 area)
      const double w = 0.5 * inner(a, b) / (2.0 * area);
      entries.emplace_back(i, j, -w);
      entries.emplace_back(j, i, -w);
      entries.emplace_back(i, i, w);
      entries.emplace_back(j, j, w);
      mass[t[k]] += area / 3.0;
    }
  }
  stiffness.resize(n, n);
  stiffness.setFromTriplets(entries.begin(), entries.end());
}

}  // namespace

double lambda1_discrete(const SurfacePatch& patch, int n_theta, int n_phi) {
  const Mesh mesh = lat_long_mesh(patch, n_theta, n_phi);
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd m;
  assemble(mesh, L, m);
  const auto n = L.rows();
  const double total = m.sum();

  // shift of the order of the expected eigenvalue (8 pi / area)
  const double shift = 8.0 * std::numbers::pi / total;
  Eigen::SparseMatrix<double> shifted = L;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += shift * m[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw GeometryError(ErrorCode::EigenSolverFailure, "factorization of the shifted Laplacian failed");

  constexpr int kBlock = 10;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(n, kBlock);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = normal(rng);

  auto deflate = [&](Eigen::MatrixXd& Y) {
    // remove the constant mode, M-orthogonally
    const Eigen::RowVectorXd c = (m.transpose() * Y) / total;
    Y.rowwise() -= c;
  };

  double previous = std::numeric_limits<double>::infinity();
  for (int iteration = 0; iteration < 500; ++iteration) {
    deflate(X);
    Eigen::MatrixXd Y = solver.solve(m.asDiagonal() * X);
    deflate(Y);
    const Eigen::MatrixXd Ls = Y.transpose() * (L * Y);
    const Eigen::MatrixXd Ms = Y.transpose() * m.asDiagonal() * Y;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(
        0.5 * (Ls + Ls.transpose()), 0.5 * (Ms + Ms.transpose()));
    if (ritz.info() != Eigen::Success)
      throw GeometryError(ErrorCode::EigenSolverFailure, "Rayleigh-Ritz step failed");
    X = Y * ritz.eigenvectors();
    const double lambda = ritz.eigenvalues()[0];
    if (std::abs(lambda - previous) <= 1e-13 * std::abs(lambda)) return lambda;
    previous = lambda;
  }
  throw GeometryError(ErrorCode::EigenSolverFailure,
                      "subspace iteration did not converge on " + std::to_string(n_theta) + "x" +
                          std::to_string(n_phi) + " grid");
}

}  // namespace lightcone
