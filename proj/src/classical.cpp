#include "pdiv/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "pdiv/errors.hpp"
#include "pdiv/numerics.hpp"

namespace pdiv {

namespace {

Eigen::MatrixXd sandwich(const ProjectorBasis& basis, const std::function<Mat2(const Mat2&)>& map)
{
    Eigen::MatrixXd t(2, 2);
    for (int j = 0; j < 2; ++j) {
        const Mat2 image = map(basis.projector(j));
        for (int i = 0; i < 2; ++i) {
            t(i, j) = (basis.projector(i) * image).trace().real();
        }
    }
    return t;
}

} // namespace

StochasticProcess reduce_map(const Propagator& p, const ProjectorBasis& basis)
{
    StochasticProcess sp{p.grid(), {}, basis};
    sp.matrices.reserve(p.size());
    for (const QubitChannel& map : p.maps()) {
        sp.matrices.push_back(sandwich(basis, [&](const Mat2& x) { return apply(map, x); }));
    }
    return sp;
}

Eigen::MatrixXd reduce_generator_at(const GeneratorSpec& g, const ProjectorBasis& basis, double t)
{
    return sandwich(basis, [&](const Mat2& x) { return g.apply(t, x); });
}

ClassicalGenerator reduce_generator(const GeneratorSpec& g, const ProjectorBasis& basis, std::span<const double> grid)
{
    validate_grid(grid);
    ClassicalGenerator lg{std::vector<double>(grid.begin(), grid.end()), {}};
    lg.matrices.reserve(grid.size());
    for (double t : grid) {
        lg.matrices.push_back(reduce_generator_at(g, basis, t));
    }
    return lg;
}

StochasticProcess solve_classical_master(const ClassicalGenerator& lg, const ProjectorBasis& basis)
{
    validate_grid(lg.grid);
    if (lg.matrices.size() != lg.grid.size()) {
        throw std::invalid_argument("generator grid and matrix counts differ");
    }
    const auto n = lg.matrices.front().rows();
    StochasticProcess sp{lg.grid, {}, basis};
    sp.matrices.reserve(lg.grid.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n);
    sp.matrices.push_back(d);
    for (std::size_t k = 1; k < lg.grid.size(); ++k) {
        const double dt = lg.grid[k] - lg.grid[k - 1];
        const Eigen::MatrixXd step = (0.5 * dt * (lg.matrices[k - 1] + lg.matrices[k])).exp();
        d = step * d;
        sp.matrices.push_back(d);
    }
    return sp;
}

ClassicalGenerator classical_generator_from_T(const StochasticProcess& sp, double tol)
{
    const std::size_t count = sp.grid.size();
    if (sp.matrices.size() != count || count == 0) {
        throw std::invalid_argument("process grid and matrix counts differ");
    }
    const auto n = sp.matrices.front().rows();
    std::vector<std::vector<double>> dots(static_cast<std::size_t>(n * n));
    std::vector<double> series(count);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < count; ++k) {
                series[k] = sp.matrices[k](i, j);
            }
            dots[static_cast<std::size_t>(i * n + j)] = derivative(sp.grid, series);
        }
    }
    ClassicalGenerator lg{sp.grid, {}};
    lg.matrices.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Eigen::MatrixXd& t = sp.matrices[k];
        if (std::abs(t.determinant()) < tol) {
            throw SingularProcessError("classical process is not invertible", sp.grid[k]);
        }
        Eigen::MatrixXd dt(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                dt(i, j) = dots[static_cast<std::size_t>(i * n + j)][k];
            }
        }
        lg.matrices.push_back(dt * t.inverse());
    }
    return lg;
}

FCriterion f_criterion(const StochasticProcess& sp, double tol, double singular_tol,
                       std::optional<std::span<const double>> t00_dot)
{
    const std::size_t count = sp.grid.size();
    std::vector<double> t00(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Eigen::MatrixXd& t = sp.matrices.at(k);
        if (t.rows() != 2 || t.cols() != 2) {
            throw std::invalid_argument("f criterion needs a 2x2 process");
        }
        if (std::abs(t(0, 0) - t(1, 1)) > 1e-9 || std::abs(t(0, 1) - t(1, 0)) > 1e-9) {
            throw std::invalid_argument("f criterion needs a bistochastic process");
        }
        t00[k] = t(0, 0);
    }
    FCriterion out;
    if (t00_dot) {
        if (t00_dot->size() != count) {
            throw std::invalid_argument("derivative series has the wrong length");
        }
        out.t00_dot.assign(t00_dot->begin(), t00_dot->end());
    } else {
        out.t00_dot = derivative(sp.grid, t00);
    }
    out.f.resize(count);
    out.det.resize(count);
    out.singular.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double den = 2.0 * t00[k] - 1.0;
        out.det[k] = den;
        if (std::abs(den) < singular_tol) {
            out.singular[k] = true;
            out.invertible = false;
            continue;
        }
        const double f = out.t00_dot[k] / den;
        out.f[k] = f;
        if (!out.max_f || f > *out.max_f) {
            out.max_f = f;
            out.max_f_time = sp.grid[k];
        }
    }
    out.divisible = !out.max_f || *out.max_f <= tol;
    return out;
}

KolmogorovVerdict kolmogorov_check(const ClassicalGenerator& lg, double tol)
{
    KolmogorovVerdict v{true, std::numeric_limits<double>::infinity(), 0.0};
    for (const Eigen::MatrixXd& l : lg.matrices) {
        for (Eigen::Index j = 0; j < l.cols(); ++j) {
            for (Eigen::Index i = 0; i < l.rows(); ++i) {
                if (i != j) {
                    v.worst_off_diagonal = std::min(v.worst_off_diagonal, l(i, j));
                }
            }
            v.worst_column_sum = std::max(v.worst_column_sum, std::abs(l.col(j).sum()));
        }
    }
    v.divisible = v.worst_off_diagonal >= -tol && v.worst_column_sum <= tol;
    return v;
}

double kolmogorov_distance(const Eigen::VectorXd& delta)
{
    return delta.lpNorm<1>();
}

Eigen::MatrixXd iterated_reduction(const QubitChannel& step, const ProjectorBasis& basis, std::size_t n)
{
    const Eigen::MatrixXd t = sandwich(basis, [&](const Mat2& x) { return apply(step, x); });
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2, 2);
    for (std::size_t k = 0; k < n; ++k) {
        out = t * out;
    }
    return out;
}

} // namespace pdiv
