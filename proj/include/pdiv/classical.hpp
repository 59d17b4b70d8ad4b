#pragma once

// Classical stochastic processes obtained by sandwiching qubit dynamics between projective
// measurements, and their divisibility.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pdiv/generators.hpp"
#include "pdiv/states.hpp"

namespace pdiv {

// T(t) on a time grid; column-stochastic when the source dynamics is positive.
struct StochasticProcess {
    std::vector<double> grid;
    std::vector<Eigen::MatrixXd> matrices;
    ProjectorBasis basis;
};

// L(t) on a time grid; columns sum to zero.
struct ClassicalGenerator {
    std::vector<double> grid;
    std::vector<Eigen::MatrixXd> matrices;
};

// T_ij(t) = Tr(P_i Lambda_t[P_j]).
StochasticProcess reduce_map(const Propagator& p, const ProjectorBasis& basis);

// L_ij(t) = Tr(P_i L_t[P_j]).
Eigen::MatrixXd reduce_generator_at(const GeneratorSpec& g, const ProjectorBasis& basis, double t);
ClassicalGenerator reduce_generator(const GeneratorSpec& g, const ProjectorBasis& basis, std::span<const double> grid);

// dD/dt = L(t) D(t), D(0) = 1. Each step multiplies by exp(dt (L_k + L_{k+1}) / 2).
StochasticProcess solve_classical_master(const ClassicalGenerator& lg, const ProjectorBasis& basis);

// L(t) = dT/dt T(t)^{-1} with dT/dt from 5-point differences on the grid.
// Throws SingularProcessError at the first t with |det T(t)| < tol.
ClassicalGenerator classical_generator_from_T(const StochasticProcess& sp, double tol = 1e-10);

struct FCriterion {
    std::vector<std::optional<double>> f;   // empty where 2 T00 - 1 is below the singular threshold
    std::vector<double> t00_dot;
    std::vector<double> det;                // 2 T00 - 1
    std::vector<bool> singular;
    std::optional<double> max_f;
    double max_f_time = 0.0;
    bool divisible = true;                  // max f <= tol over non-singular points
    bool invertible = true;                 // no singular point on the grid
};

// f_t = dT00/dt / (2 T00 - 1) for a 2x2 bistochastic process. dT00/dt comes from 5-point
// differences unless supplied.
FCriterion f_criterion(const StochasticProcess& sp, double tol = 1e-9, double singular_tol = 1e-9,
                       std::optional<std::span<const double>> t00_dot = std::nullopt);

struct KolmogorovVerdict {
    bool divisible;
    double worst_off_diagonal;
    double worst_column_sum;
};

// Off-diagonals >= -tol and column sums within tol of zero at every grid point.
KolmogorovVerdict kolmogorov_check(const ClassicalGenerator& lg, double tol = 1e-9);

double kolmogorov_distance(const Eigen::VectorXd& delta);

// T^n for the reduction T of a single step map: the process measured after every step.
Eigen::MatrixXd iterated_reduction(const QubitChannel& step, const ProjectorBasis& basis, std::size_t n);

} // namespace pdiv
