#include "pdiv/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "pdiv/errors.hpp"
#include "pdiv/numerics.hpp"

namespace pdiv {

GeneratorSpec::GeneratorSpec(VectorFn hamiltonian, KossakowskiFn kossakowski, std::vector<double> breakpoints)
    : hamiltonian_(std::move(hamiltonian)), kossakowski_(std::move(kossakowski)), breakpoints_(std::move(breakpoints))
{
    if (!hamiltonian_ || !kossakowski_) {
        throw std::invalid_argument("generator needs both a Hamiltonian and a Kossakowski function");
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
}

GeneratorSpec GeneratorSpec::zero()
{
    return GeneratorSpec([](double) { return Vec3::Zero().eval(); }, [](double) { return Mat3c::Zero().eval(); });
}

GeneratorSpec GeneratorSpec::hamiltonian(VectorFn omega)
{
    return GeneratorSpec(std::move(omega), [](double) { return Mat3c::Zero().eval(); });
}

GeneratorSpec GeneratorSpec::pauli(VectorFn rates)
{
    return GeneratorSpec([](double) { return Vec3::Zero().eval(); },
                         [rates = std::move(rates)](double t) {
                             return rates(t).cast<cplx>().asDiagonal().toDenseMatrix().eval();
                         });
}

GeneratorSpec GeneratorSpec::from_bloch(std::function<BlochGenerator(double)> bloch, std::vector<double> breakpoints)
{
    // L = Re K - tr(Re K) 1 + [omega]_x ; affine_k = -eps_ijk Im K_ij.
    auto omega = [bloch](double t) {
        const Mat3 m = bloch(t).matrix;
        const Mat3 anti = 0.5 * (m - m.transpose());
        return Vec3(anti(2, 1), anti(0, 2), anti(1, 0));
    };
    auto kossakowski = [bloch](double t) {
        const BlochGenerator b = bloch(t);
        const Mat3 sym = 0.5 * (b.matrix + b.matrix.transpose());
        const Mat3 re = sym - 0.5 * sym.trace() * Mat3::Identity();
        Mat3 im = Mat3::Zero();
        im(1, 2) = -0.5 * b.affine(0);
        im(2, 0) = -0.5 * b.affine(1);
        im(0, 1) = -0.5 * b.affine(2);
        im(2, 1) = -im(1, 2);
        im(0, 2) = -im(2, 0);
        im(1, 0) = -im(0, 1);
        Mat3c k = re.cast<cplx>();
        k += cplx(0.0, 1.0) * im.cast<cplx>();
        return k;
    };
    return GeneratorSpec(omega, kossakowski, std::move(breakpoints));
}

Mat2 GeneratorSpec::apply(double t, const Mat2& x) const
{
    const Mat2 h = 0.5 * pauli_combination(hamiltonian_(t));
    const cplx i{0.0, 1.0};
    Mat2 out = -i * (h * x - x * h);
    const Mat3c k = kossakowski_(t);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (k(a, b) == cplx(0.0, 0.0)) {
                continue;
            }
            const Mat2& sa = sigma(a + 1);
            const Mat2& sb = sigma(b + 1);
            const Mat2 anti = sb * sa * x + x * sb * sa;
            out += 0.5 * k(a, b) * (sa * x * sb - 0.5 * anti);
        }
    }
    return out;
}

Mat4 GeneratorSpec::affine(double t) const
{
    Mat4 m = PauliMap::from_linear_map([&](const Mat2& x) { return apply(t, x); }).matrix();
    m.row(0).setZero();
    return m;
}

BlochGenerator GeneratorSpec::bloch(double t) const
{
    const Mat4 m = affine(t);
    return {m.block<3, 3>(1, 1), m.block<3, 1>(1, 0)};
}

DivisibilityVerdict instantaneous_p_div(const GeneratorSpec& g, double t, double tol)
{
    const BlochGenerator b = g.bloch(t);
    double margin;
    if (b.affine.cwiseAbs().maxCoeff() == 0.0) {
        const Mat3 sym = -0.5 * (b.matrix + b.matrix.transpose());
        Eigen::SelfAdjointEigenSolver<Mat3> solver(sym, Eigen::EigenvaluesOnly);
        margin = solver.eigenvalues().minCoeff();
    } else {
        margin = minimize_quadratic_on_sphere(-b.matrix, -b.affine).value;
    }
    return {margin >= -tol, margin};
}

namespace {

Eigen::Vector4cd max_entangled()
{
    Eigen::Vector4cd omega = Eigen::Vector4cd::Zero();
    omega(0) = omega(3) = 1.0 / std::sqrt(2.0);
    return omega;
}

// Orthonormal basis of the complement of the maximally entangled vector.
Eigen::Matrix<cplx, 4, 3> entangled_complement()
{
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix<cplx, 4, 3> basis = Eigen::Matrix<cplx, 4, 3>::Zero();
    basis(0, 0) = r;
    basis(3, 0) = -r;
    basis(1, 1) = r;
    basis(2, 1) = r;
    basis(1, 2) = r;
    basis(2, 2) = -r;
    return basis;
}

} // namespace

Mat4c cp_divisibility_operator(const GeneratorSpec& g, double t)
{
    const PauliMap map(g.affine(t));
    const Mat4c image = choi(map).entries;
    const Eigen::Vector4cd omega = max_entangled();
    const Mat4c complement = Mat4c::Identity() - omega * omega.adjoint();
    return complement * image * complement;
}

DivisibilityVerdict instantaneous_cp_div(const GeneratorSpec& g, double t, double tol)
{
    const Mat4c y = cp_divisibility_operator(g, t);
    const auto basis = entangled_complement();
    const Eigen::Matrix3cd compressed = basis.adjoint() * y * basis;
    const double margin = min_hermitian_eigenvalue(0.5 * (compressed + compressed.adjoint()));
    return {margin >= -tol, margin};
}

namespace {

template <class Certificate>
GridVerdict over_grid(Certificate&& certificate, std::span<const double> grid)
{
    GridVerdict out{{}, true, std::numeric_limits<double>::infinity(), 0.0};
    out.margins.reserve(grid.size());
    for (double t : grid) {
        const DivisibilityVerdict v = certificate(t);
        out.margins.push_back(v.margin);
        out.divisible = out.divisible && v.divisible;
        if (v.margin < out.worst_margin) {
            out.worst_margin = v.margin;
            out.worst_time = t;
        }
    }
    return out;
}

} // namespace

GridVerdict p_div_over_grid(const GeneratorSpec& g, std::span<const double> grid, double tol)
{
    return over_grid([&](double t) { return instantaneous_p_div(g, t, tol); }, grid);
}

GridVerdict cp_div_over_grid(const GeneratorSpec& g, std::span<const double> grid, double tol)
{
    return over_grid([&](double t) { return instantaneous_cp_div(g, t, tol); }, grid);
}

Propagator::Propagator(std::vector<double> grid, std::vector<QubitChannel> maps)
    : grid_(std::move(grid)), maps_(std::move(maps))
{
    validate_grid(grid_);
    if (grid_.size() != maps_.size()) {
        throw std::invalid_argument("propagator grid and map counts differ");
    }
}

Propagator Propagator::from_family(std::vector<double> grid, const std::function<QubitChannel(double)>& family)
{
    std::vector<QubitChannel> maps;
    maps.reserve(grid.size());
    for (double t : grid) {
        maps.push_back(family(t));
    }
    return Propagator(std::move(grid), std::move(maps));
}

const QubitChannel& Propagator::at_time(double t) const
{
    return maps_.at(grid_index(grid_, t));
}

bool Propagator::invertible(std::size_t index, double tol) const
{
    return std::abs(maps_.at(index).determinant()) > tol;
}

namespace {

QubitChannel to_channel(const Mat4& m)
{
    return QubitChannel(m.block<3, 3>(1, 1), m.block<3, 1>(1, 0));
}

// Sub-interval end points of [a, b]: `substeps` equal pieces, also cut at breakpoints.
std::vector<double> pieces(double a, double b, std::size_t substeps, const std::vector<double>& breakpoints)
{
    std::vector<double> cuts{a};
    auto bp = std::upper_bound(breakpoints.begin(), breakpoints.end(), a);
    for (std::size_t k = 1; k <= substeps; ++k) {
        const double end = k == substeps ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(substeps);
        while (bp != breakpoints.end() && *bp < end) {
            if (*bp > cuts.back()) {
                cuts.push_back(*bp);
            }
            ++bp;
        }
        if (end > cuts.back()) {
            cuts.push_back(end);
        }
    }
    return cuts;
}

template <class Step>
Propagator propagate(const GeneratorSpec& g, std::span<const double> grid, std::size_t substeps, Step&& step)
{
    validate_grid(grid);
    if (substeps == 0) {
        throw std::invalid_argument("substeps must be positive");
    }
    std::vector<QubitChannel> maps;
    maps.reserve(grid.size());
    Mat4 current = Mat4::Identity();
    maps.push_back(QubitChannel::identity());
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const auto cuts = pieces(grid[k - 1], grid[k], substeps, g.breakpoints());
        for (std::size_t j = 1; j < cuts.size(); ++j) {
            current = step(cuts[j - 1], cuts[j], current);
        }
        current.row(0) << 1.0, 0.0, 0.0, 0.0;
        maps.push_back(to_channel(current));
    }
    return Propagator(std::vector<double>(grid.begin(), grid.end()), std::move(maps));
}

} // namespace

Propagator propagate_timesplitting(const GeneratorSpec& g, std::span<const double> grid, std::size_t substeps)
{
    return propagate(g, grid, substeps, [&](double a, double b, const Mat4& m) -> Mat4 {
        const Mat4 gen = g.affine(0.5 * (a + b));
        return Mat4((b - a) * gen).exp() * m;
    });
}

Propagator propagate_ode(const GeneratorSpec& g, std::span<const double> grid, std::size_t substeps)
{
    return propagate(g, grid, substeps, [&](double a, double b, const Mat4& m) -> Mat4 {
        const double h = b - a;
        // End-point evaluations stay inside (a, b) so one-sided limits are used at breakpoints.
        const Mat4 g0 = g.affine(std::nextafter(a, b));
        const Mat4 gm = g.affine(0.5 * (a + b));
        const Mat4 g1 = g.affine(std::nextafter(b, a));
        const Mat4 k1 = g0 * m;
        const Mat4 k2 = gm * (m + 0.5 * h * k1);
        const Mat4 k3 = gm * (m + 0.5 * h * k2);
        const Mat4 k4 = g1 * (m + h * k3);
        return m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    });
}

QubitChannel semigroup_map(const GeneratorSpec& g, double t)
{
    Mat4 m = Mat4(t * g.affine(0.0)).exp();
    return to_channel(m);
}

QubitChannel intertwiner(const Propagator& p, double t, double s)
{
    if (t < s) {
        throw std::invalid_argument("intertwiner needs t >= s");
    }
    const QubitChannel& lt = p.at_time(t);
    const QubitChannel& ls = p.at_time(s);
    return compose(lt, inverse(ls));
}

} // namespace pdiv
