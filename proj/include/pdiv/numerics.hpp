#pragma once

// Small numerical kernels: time grids, finite differences, optimisation on the unit sphere.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pdiv/linalg.hpp"

namespace pdiv {

// steps + 1 equally spaced points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t steps);

// Throws std::invalid_argument unless the grid is non-empty, starts at 0 and is strictly increasing.
void validate_grid(std::span<const double> grid);

// Index of the grid point equal to t (within a relative 1e-12), or throws std::invalid_argument.
std::size_t grid_index(std::span<const double> grid, double t);

// First derivative of sampled data at node k from the 5 nearest nodes (Fornberg weights).
// Interior nodes of a uniform grid get the centred 5-point stencil; near the ends the stencil
// becomes one-sided. Falls back to fewer nodes on grids shorter than 5 points.
double derivative_at(std::span<const double> t, std::span<const double> y, std::size_t k);
std::vector<double> derivative(std::span<const double> t, std::span<const double> y);

// Central difference with step h.
template <class F>
auto central_difference(F&& f, double t, double h = 1e-5)
{
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Quasi-uniform points on the unit sphere.
std::vector<Vec3> fibonacci_sphere(std::size_t count);

struct SphereExtremum {
    double value;
    Vec3 point;
};

// Global minimum of x^T Q x + c^T x over the unit sphere (Q symmetric), solved exactly through
// the secular equation of the boundary trust-region problem, including the degenerate case.
SphereExtremum minimize_quadratic_on_sphere(const Mat3& q, const Vec3& c);

// Maximum of a convex function on the unit sphere: best point of a Fibonacci lattice followed by
// projected-gradient refinement (x <- grad f(x) / |grad f(x)|, monotone for convex f).
SphereExtremum maximize_convex_on_sphere(const std::function<double(const Vec3&)>& f,
                                         const std::function<Vec3(const Vec3&)>& grad,
                                         std::size_t lattice_points = 2048,
                                         std::size_t refinement_steps = 100);

} // namespace pdiv
