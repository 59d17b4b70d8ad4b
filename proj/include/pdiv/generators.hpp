#pragma once

// Time-dependent qubit generators in GKSL form, instantaneous divisibility certificates and
// propagation of the dynamical map.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pdiv/channels.hpp"
#include "pdiv/linalg.hpp"

namespace pdiv {

// Bloch-representation generator: d/dt r = matrix r + affine.
struct BlochGenerator {
    Mat3 matrix;
    Vec3 affine;
};

// L_t[rho] = -i[H(t), rho] + (1/2) sum_ij K_ij(t) (s_i rho s_j - (1/2){s_j s_i, rho}),
// with H(t) = (1/2) omega(t) . sigma. Evaluation must be a pure function of t.
class GeneratorSpec {
public:
    using VectorFn = std::function<Vec3(double)>;
    using KossakowskiFn = std::function<Mat3c(double)>;

    GeneratorSpec(VectorFn hamiltonian, KossakowskiFn kossakowski, std::vector<double> breakpoints = {});

    static GeneratorSpec zero();
    static GeneratorSpec hamiltonian(VectorFn omega);
    // Pauli dissipator (1/2) sum_k gamma_k(t) (s_k rho s_k - rho).
    static GeneratorSpec pauli(VectorFn rates);
    // Unique (omega, K) reproducing a given Bloch generator.
    static GeneratorSpec from_bloch(std::function<BlochGenerator(double)> bloch,
                                    std::vector<double> breakpoints = {});

    Vec3 hamiltonian_coeffs(double t) const { return hamiltonian_(t); }
    Mat3c kossakowski(double t) const { return kossakowski_(t); }

    Mat2 apply(double t, const Mat2& x) const;
    BlochGenerator bloch(double t) const;
    // 4x4 Pauli representation (first row zero).
    Mat4 affine(double t) const;

    // Times where the generator may jump; propagators never step across them.
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

private:
    VectorFn hamiltonian_;
    KossakowskiFn kossakowski_;
    std::vector<double> breakpoints_;
};

struct DivisibilityVerdict {
    bool divisible;
    double margin;
};

// Verdict true iff min_{|n|=1} -<n, L(t) n + affine(t)> >= -tol, i.e. Tr(P_{-n} L_t[P_n]) >= 0.
DivisibilityVerdict instantaneous_p_div(const GeneratorSpec& g, double t, double tol = 1e-9);

// Y_t = (1 - P+) (L_t (x) id)[sum_ij E_ij (x) E_ij] (1 - P+).
Mat4c cp_divisibility_operator(const GeneratorSpec& g, double t);

// Verdict true iff Y_t >= -tol on the complement of the maximally entangled vector.
DivisibilityVerdict instantaneous_cp_div(const GeneratorSpec& g, double t, double tol = 1e-9);

struct GridVerdict {
    std::vector<double> margins;
    bool divisible;
    double worst_margin;
    double worst_time;
};

GridVerdict p_div_over_grid(const GeneratorSpec& g, std::span<const double> grid, double tol = 1e-9);
GridVerdict cp_div_over_grid(const GeneratorSpec& g, std::span<const double> grid, double tol = 1e-9);

// Dynamical map sampled on a time grid, Lambda_0 = id.
class Propagator {
public:
    Propagator(std::vector<double> grid, std::vector<QubitChannel> maps);

    // Lambda_t = family(t) sampled on the grid.
    static Propagator from_family(std::vector<double> grid, const std::function<QubitChannel(double)>& family);

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<QubitChannel>& maps() const noexcept { return maps_; }
    std::size_t size() const noexcept { return grid_.size(); }
    const QubitChannel& at(std::size_t index) const { return maps_.at(index); }
    const QubitChannel& at_time(double t) const;

    bool invertible(std::size_t index, double tol = 1e-13) const;

private:
    std::vector<double> grid_;
    std::vector<QubitChannel> maps_;
};

// Product of exp(dt L(t_mid)) over sub-intervals (exponential midpoint rule). Each grid interval is
// split into `substeps` pieces and additionally at generator breakpoints.
Propagator propagate_timesplitting(const GeneratorSpec& g, std::span<const double> grid, std::size_t substeps = 1);

// Classical fixed-step RK4 on the 4x4 representation, same sub-interval layout.
Propagator propagate_ode(const GeneratorSpec& g, std::span<const double> grid, std::size_t substeps = 1);

// exp(t L) for a time-independent generator (evaluated at t = 0).
QubitChannel semigroup_map(const GeneratorSpec& g, double t);

// Lambda_{t,s} = Lambda_t Lambda_s^{-1}; t and s must be grid points with t >= s.
QubitChannel intertwiner(const Propagator& p, double t, double s);

} // namespace pdiv
