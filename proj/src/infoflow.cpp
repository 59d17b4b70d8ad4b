#include "pdiv/infoflow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <utility>
#include <stdexcept>

#include "pdiv/numerics.hpp"

namespace pdiv {

double quantum_info(const Propagator& p, const HelstromMatrix& delta, std::size_t index)
{
    return trace_norm(apply(p.at(index), delta.entries), 1e-10);
}

std::vector<double> quantum_info_series(const Propagator& p, const HelstromMatrix& delta)
{
    std::vector<double> out(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        out[k] = quantum_info(p, delta, k);
    }
    return out;
}

namespace {

void check_probability(const Vec2& v)
{
    if (v.minCoeff() < 0.0 || std::abs(v.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("population vector is not a probability vector");
    }
}

} // namespace

InfoTrajectory info_trajectory(const Propagator& p, const ProjectorBasis& basis, const Vec2& pvec,
                               const Vec2& qvec, double mu)
{
    check_probability(pvec);
    check_probability(qvec);
    const Mat2 rho_p = basis.diagonal_state(pvec);
    const Mat2 rho_q = basis.diagonal_state(qvec);
    const HelstromMatrix delta = helstrom(rho_p, rho_q, mu);
    const Eigen::VectorXd classical_delta = mu * pvec - (1.0 - mu) * qvec;
    const StochasticProcess sp = reduce_map(p, basis);

    InfoTrajectory traj;
    traj.grid = p.grid();
    traj.mu = mu;
    const std::size_t n = p.size();
    traj.i_quantum.resize(n);
    traj.i_classical.resize(n);
    traj.coherent.resize(n);
    traj.cl1_p.resize(n);
    traj.cl1_q.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const QubitChannel& map = p.at(k);
        const Mat2 evolved = apply(map, delta.entries);
        traj.i_quantum[k] = trace_norm(evolved, 1e-10);
        traj.i_classical[k] = kolmogorov_distance(sp.matrices[k] * classical_delta);
        traj.coherent[k] = traj.i_quantum[k] - trace_norm(decohere(evolved, basis), 1e-10);
        traj.cl1_p[k] = l1_coherence(apply(map, rho_p), basis);
        traj.cl1_q[k] = l1_coherence(apply(map, rho_q), basis);
    }
    return traj;
}

CoherenceBound coherence_bound_check(const InfoTrajectory& traj, std::size_t s, std::size_t t, double tol)
{
    if (t < s) {
        throw std::invalid_argument("coherence bound needs s <= t");
    }
    CoherenceBound b;
    b.lhs = traj.i_classical.at(t) - traj.i_classical.at(s);
    b.mid = traj.coherent.at(s);
    b.rhs = traj.mu * traj.cl1_p.at(s) + (1.0 - traj.mu) * traj.cl1_q.at(s);
    b.balance = traj.i_classical[t] + traj.coherent[t] <= traj.i_classical[s] + traj.coherent[s] + tol;
    b.holds = b.lhs <= b.mid + tol && b.mid <= b.rhs + tol;
    return b;
}

BalanceReport balance_over_grid(const InfoTrajectory& traj, double tol)
{
    double best = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        const double total = traj.i_classical[k] + traj.coherent[k];
        best = std::min(best, total);
        worst = std::max(worst, total - best);
    }
    return {worst <= tol, worst};
}

std::vector<Revival> detect_backflow(std::span<const double> grid, std::span<const double> series, double tol,
                                     std::size_t min_steps)
{
    if (grid.size() != series.size()) {
        throw std::invalid_argument("series and grid lengths differ");
    }
    std::vector<Revival> out;
    if (grid.size() < 2) {
        return out;
    }
    const std::vector<double> slope = derivative(grid, series);
    std::size_t k = 0;
    while (k < slope.size()) {
        if (slope[k] <= tol) {
            ++k;
            continue;
        }
        const std::size_t begin = k;
        while (k + 1 < slope.size() && slope[k + 1] > tol) {
            ++k;
        }
        if (k - begin >= min_steps) {
            out.push_back({grid[begin], grid[k], begin, k});
        }
        ++k;
    }
    return out;
}

namespace {

std::vector<double> angle_grid(double top, int count)
{
    std::vector<double> out;
    for (int k = 0; k <= count; ++k) {
        out.push_back(top * k / count);
    }
    return out;
}

WitnessRow witness_row(const Propagator& p, double chi, double xi, double tol)
{
    const ProjectorBasis basis = ProjectorBasis::from_angles(chi, xi);
    const StochasticProcess sp = reduce_map(p, basis);
    const FCriterion fc = f_criterion(sp, tol);
    std::vector<double> icl(sp.grid.size());
    for (std::size_t k = 0; k < icl.size(); ++k) {
        icl[k] = std::abs(fc.det[k]);
    }
    const auto revivals = detect_backflow(sp.grid, icl);
    return {chi, xi, fc.max_f, fc.divisible, fc.invertible, revivals.size()};
}

} // namespace

std::vector<double> default_chi_grid()
{
    return angle_grid(kPi / 2.0, 8);
}

std::vector<double> default_xi_grid()
{
    return angle_grid(kPi, 16);
}

std::vector<WitnessRow> witness_search(const Propagator& p, std::span<const double> chi_grid,
                                       std::span<const double> xi_grid, double tol)
{
    std::vector<std::pair<double, double>> bases;
    for (double chi : chi_grid) {
        for (double xi : xi_grid) {
            bases.emplace_back(chi, xi);
        }
    }
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<WitnessRow> rows;
    rows.reserve(bases.size());
    for (std::size_t start = 0; start < bases.size(); start += width) {
        std::vector<std::future<WitnessRow>> jobs;
        for (std::size_t k = start; k < std::min(bases.size(), start + width); ++k) {
            jobs.push_back(std::async(std::launch::async, witness_row, std::cref(p), bases[k].first,
                                      bases[k].second, tol));
        }
        for (auto& job : jobs) {
            rows.push_back(job.get());
        }
    }
    return rows;
}

} // namespace pdiv
