#include "pdiv/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdiv {

std::vector<double> uniform_grid(double t_max, std::size_t steps)
{
    if (!(t_max > 0.0) || steps == 0) {
        throw std::invalid_argument("uniform_grid needs t_max > 0 and at least one step");
    }
    std::vector<double> grid(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        grid[k] = t_max * static_cast<double>(k) / static_cast<double>(steps);
    }
    return grid;
}

void validate_grid(std::span<const double> grid)
{
    if (grid.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    if (grid.front() != 0.0) {
        throw std::invalid_argument("time grid must start at t = 0");
    }
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!(grid[k] > grid[k - 1])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
}

std::size_t grid_index(std::span<const double> grid, double t)
{
    const auto it = std::lower_bound(grid.begin(), grid.end(), t);
    const double scale = std::max(1.0, std::abs(t));
    auto close = [&](double x) { return std::abs(x - t) <= 1e-12 * scale; };
    if (it != grid.end() && close(*it)) {
        return static_cast<std::size_t>(it - grid.begin());
    }
    if (it != grid.begin() && close(*(it - 1))) {
        return static_cast<std::size_t>(it - grid.begin() - 1);
    }
    throw std::invalid_argument("time " + std::to_string(t) + " is not a grid point");
}

namespace {

// Fornberg's recursion restricted to derivative orders 0 and 1.
std::vector<double> first_derivative_weights(double x0, std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = c[i][1];
    }
    return w;
}

} // namespace

double derivative_at(std::span<const double> t, std::span<const double> y, std::size_t k)
{
    if (t.size() != y.size() || t.size() < 2 || k >= t.size()) {
        throw std::invalid_argument("derivative_at: inconsistent sample sizes");
    }
    const std::size_t width = std::min<std::size_t>(5, t.size());
    std::size_t first = k >= width / 2 ? k - width / 2 : 0;
    first = std::min(first, t.size() - width);
    const auto nodes = t.subspan(first, width);
    const auto w = first_derivative_weights(t[k], nodes);
    double d = 0.0;
    for (std::size_t i = 0; i < width; ++i) {
        d += w[i] * y[first + i];
    }
    return d;
}

std::vector<double> derivative(std::span<const double> t, std::span<const double> y)
{
    std::vector<double> d(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        d[k] = derivative_at(t, y, k);
    }
    return d;
}

std::vector<Vec3> fibonacci_sphere(std::size_t count)
{
    std::vector<Vec3> points;
    points.reserve(count);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        points.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return points;
}

SphereExtremum minimize_quadratic_on_sphere(const Mat3& q, const Vec3& c)
{
    const Mat3 sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> solver(sym);
    const Vec3 eig = solver.eigenvalues();
    const Mat3 basis = solver.eigenvectors();
    const Vec3 d = basis.transpose() * c;

    auto objective = [&](const Vec3& x) { return x.dot(sym * x) + c.dot(x); };

    const double scale = std::max({1.0, eig.cwiseAbs().maxCoeff(), c.norm()});
    const double degenerate = 1e-12 * scale;

    // Stationary points satisfy (Q - s) x = -c/2; the global minimiser has s <= eig(0).
    auto secular = [&](double s) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double gap = eig(i) - s;
            sum += d(i) * d(i) / (4.0 * gap * gap);
        }
        return sum;
    };
    auto point_for = [&](double s) {
        Vec3 y;
        for (int i = 0; i < 3; ++i) {
            y(i) = -d(i) / (2.0 * (eig(i) - s));
        }
        return y;
    };

    Vec3 y;
    bool hard_case = std::abs(d(0)) <= degenerate;
    if (hard_case) {
        // The smallest eigenspace decouples; check whether the shift can sit at eig(0).
        Vec3 partial = Vec3::Zero();
        for (int i = 0; i < 3; ++i) {
            const double gap = eig(i) - eig(0);
            if (gap > degenerate) {
                partial(i) = -d(i) / (2.0 * gap);
            }
        }
        const double norm2 = partial.squaredNorm();
        if (norm2 <= 1.0) {
            y = partial;
            y(0) = std::sqrt(1.0 - norm2);
        } else {
            hard_case = false;
        }
    }
    if (!hard_case) {
        // secular(lo) < 1 <= secular(hi^-): bisect the monotone branch.
        double lo = eig(0) - 0.5 * c.norm() - 1.0;
        double hi = std::nextafter(eig(0), -std::numeric_limits<double>::infinity());
        for (int it = 0; it < 200 && hi > lo; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            if (secular(mid) < 1.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        y = point_for(0.5 * (lo + hi));
        if (!std::isfinite(y.squaredNorm()) || y.norm() == 0.0) {
            y = point_for(lo);
        }
    }
    Vec3 x = basis * y;
    x.normalize();

    // Guard against round-off in the root location: compare with the eigenvector candidates.
    SphereExtremum best{objective(x), x};
    for (int i = 0; i < 3; ++i) {
        for (double sign : {1.0, -1.0}) {
            const Vec3 v = sign * basis.col(i);
            const double value = objective(v);
            if (value < best.value) {
                best = {value, v};
            }
        }
    }
    return best;
}

SphereExtremum maximize_convex_on_sphere(const std::function<double(const Vec3&)>& f,
                                         const std::function<Vec3(const Vec3&)>& grad,
                                         std::size_t lattice_points,
                                         std::size_t refinement_steps)
{
    SphereExtremum best{-std::numeric_limits<double>::infinity(), Vec3::UnitZ()};
    for (const Vec3& p : fibonacci_sphere(lattice_points)) {
        const double value = f(p);
        if (value > best.value) {
            best = {value, p};
        }
    }
    for (std::size_t step = 0; step < refinement_steps; ++step) {
        const Vec3 g = grad(best.point);
        const double norm = g.norm();
        if (norm == 0.0) {
            break;
        }
        const Vec3 next = g / norm;
        const double value = f(next);
        if (!(value > best.value)) {
            break;
        }
        const double change = (next - best.point).norm();
        best = {value, next};
        if (change < 1e-15) {
            break;
        }
    }
    return best;
}

} // namespace pdiv
