#pragma once

#include <cstdint>
#include <random>

#include "lightcone/harmonics.hpp"
#include "lightcone/minkowski.hpp"
#include "lightcone/surface.hpp"
#include "lightcone/transforms.hpp"

namespace lightcone {

/// S^2(u, r) = { x : <x,x> = 0, <u,x> = r }, charted as B (r, r omega) with B = boost_to(u).
/// Throws NotUnitTimelike, NonpositiveRadius.
SurfacePatch round_sphere(const MinkowskiVec& u = {-1.0, 0.0, 0.0, 0.0}, double r = 1.0);

/// psi(x,y) = (cosh x, sinh x, cos y, sin y); flat, d = -1/4, indefinite II_eta.
SurfacePatch product_cylinder(Domain domain = {-2.0, 2.0, 0.0, 6.283185307179586, false});

/// phi(x,y) = ((x^2+y^2+1)/2, (x^2+y^2-1)/2, x, y); flat with A_eta = 0.
SurfacePatch paraboloid_graph(Domain domain = {-2.0, 2.0, -2.0, 2.0, false});

SphereField harmonic_field(const HarmonicSpec& spec);

/// e^sigma applied to the round sphere of radius r centred at u = (-1,0,0,0).
SurfacePatch perturbed_sphere(const HarmonicSpec& spec, double r = 1.0);

/// psi = f(omega) (1, omega). The chart throws NonpositiveRadialFunction where f <= 0.
SurfacePatch graph_over_sphere(const SphereField& f, std::string name = "graph_over_sphere");

/// Random degree-[l_min, l_max] spec whose coefficient vector has Euclidean
/// norm `norm` (equivalently L^2(S^2) norm of sigma).
HarmonicSpec random_harmonic_spec(std::mt19937_64& rng, int l_min, int l_max, double norm);

}  // namespace lightcone
