#pragma once

// Distinguishability-based information flow: quantum, classical and coherent internal information,
// the coherence bound on classical revivals, and backflow detection.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pdiv/classical.hpp"
#include "pdiv/generators.hpp"
#include "pdiv/states.hpp"

namespace pdiv {

// || Lambda_t[Delta] ||_1 at grid index `index`.
double quantum_info(const Propagator& p, const HelstromMatrix& delta, std::size_t index);
std::vector<double> quantum_info_series(const Propagator& p, const HelstromMatrix& delta);

struct InfoTrajectory {
    std::vector<double> grid;
    std::vector<double> i_quantum;    // || Lambda_t[Delta] ||_1
    std::vector<double> i_classical;  // || T(t) (mu p - (1 - mu) q) ||_l1
    std::vector<double> coherent;     // || Lambda_t[Delta] ||_1 - || P Lambda_t[Delta] ||_1
    std::vector<double> cl1_p;        // l1 coherence of Lambda_t[rho_p]
    std::vector<double> cl1_q;
    double mu = 0.5;
};

// rho_p, rho_q are the basis-diagonal states with populations p, q.
InfoTrajectory info_trajectory(const Propagator& p, const ProjectorBasis& basis, const Vec2& pvec,
                               const Vec2& qvec, double mu);

struct CoherenceBound {
    double lhs;     // I^cl_t - I^cl_s
    double mid;     // C_s
    double rhs;     // mu C_l1(rho_p(s)) + (1 - mu) C_l1(rho_q(s))
    bool balance;   // I^cl_t + C_t <= I^cl_s + C_s, the precondition of the bound
    bool holds;     // lhs <= mid <= rhs
};

CoherenceBound coherence_bound_check(const InfoTrajectory& traj, std::size_t s, std::size_t t, double tol = 1e-10);

struct BalanceReport {
    bool holds;
    double worst_violation;  // max over s <= t of (I^q_t - I^q_s)
};

// I^cl_t + C_t <= I^cl_s + C_s for every grid pair s <= t.
BalanceReport balance_over_grid(const InfoTrajectory& traj, double tol = 1e-10);

struct Revival {
    double t_begin;
    double t_end;
    std::size_t begin_index;
    std::size_t end_index;
};

// Maximal runs where the 5-point derivative exceeds tol, keeping runs spanning at least min_steps steps.
std::vector<Revival> detect_backflow(std::span<const double> grid, std::span<const double> series,
                                     double tol = 1e-6, std::size_t min_steps = 2);

struct WitnessRow {
    double chi;
    double xi;
    std::optional<double> max_f;
    bool classical_divisible;
    bool invertible;
    std::size_t revivals;  // revivals of I^cl for p = (1,0), q = (0,1), mu = 1/2
};

std::vector<double> default_chi_grid();  // 0, pi/16, ..., pi/2
std::vector<double> default_xi_grid();   // 0, pi/16, ..., pi

// Unital dynamics only (the reduction must be bistochastic).
std::vector<WitnessRow> witness_search(const Propagator& p, std::span<const double> chi_grid,
                                       std::span<const double> xi_grid, double tol = 1e-9);

} // namespace pdiv
