#include "pdiv/channels.hpp"

#include <cmath>

#include "pdiv/errors.hpp"
#include "pdiv/numerics.hpp"

namespace pdiv {

PauliMap PauliMap::from_linear_map(const std::function<Mat2(const Mat2&)>& map)
{
    Mat4 m;
    for (int b = 0; b < 4; ++b) {
        const Mat2 image = map(sigma(b));
        for (int a = 0; a < 4; ++a) {
            m(a, b) = 0.5 * (sigma(a) * image).trace().real();
        }
    }
    return PauliMap(m);
}

Mat2 PauliMap::operator()(const Mat2& x) const
{
    const Eigen::Vector4cd c = pauli_coefficients(x);
    return from_pauli_coefficients(m_.cast<cplx>() * c);
}

bool PauliMap::is_trace_preserving(double tol) const
{
    return std::abs(m_(0, 0) - 1.0) <= tol && m_.block<1, 3>(0, 1).cwiseAbs().maxCoeff() <= tol;
}

bool PauliMap::is_unital(double tol) const
{
    return std::abs(m_(0, 0) - 1.0) <= tol && m_.block<3, 1>(1, 0).cwiseAbs().maxCoeff() <= tol;
}

PauliMap compose(const PauliMap& outer, const PauliMap& inner)
{
    return PauliMap(outer.matrix() * inner.matrix());
}

QubitChannel QubitChannel::from_pauli_map(const PauliMap& map, double tol)
{
    if (!map.is_trace_preserving(tol)) {
        throw DomainError("map is not trace preserving");
    }
    const Mat4& m = map.matrix();
    return QubitChannel(m.block<3, 3>(1, 1), m.block<3, 1>(1, 0));
}

QubitChannel QubitChannel::rotation(const Vec3& axis, double angle)
{
    const Vec3 r = axis.normalized();
    const Mat3 k = cross_matrix(r);
    return QubitChannel(Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k);
}

QubitChannel QubitChannel::pauli(double l1, double l2, double l3)
{
    return QubitChannel(Vec3(l1, l2, l3).asDiagonal().toDenseMatrix());
}

Mat4 QubitChannel::affine() const
{
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1.0;
    m.block<3, 1>(1, 0) = translation_;
    m.block<3, 3>(1, 1) = bloch_;
    return m;
}

Mat2 apply(const QubitChannel& phi, const Mat2& x)
{
    return phi.pauli_map()(x);
}

Mat2 apply(const QubitChannel& phi, const DensityMatrix& rho)
{
    return apply(phi, rho.matrix());
}

QubitChannel compose(const QubitChannel& phi, const QubitChannel& psi)
{
    return QubitChannel(phi.bloch_matrix() * psi.bloch_matrix(),
                        phi.bloch_matrix() * psi.translation() + phi.translation());
}

QubitChannel inverse(const QubitChannel& phi, double tol)
{
    if (std::abs(phi.determinant()) <= tol) {
        throw SingularMapError("channel is not invertible");
    }
    const Mat3 inv = phi.bloch_matrix().inverse();
    return QubitChannel(inv, -inv * phi.translation());
}

ChoiMatrix choi(const PauliMap& phi)
{
    Mat4c c = Mat4c::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Mat2 image = phi(matrix_unit(i, j));
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    c(2 * a + i, 2 * b + j) += image(a, b);
                }
            }
        }
    }
    return {c};
}

ChoiMatrix choi(const QubitChannel& phi)
{
    return choi(phi.pauli_map());
}

double choi_min_eigenvalue(const ChoiMatrix& c)
{
    return min_hermitian_eigenvalue(c.entries);
}

bool is_completely_positive(const QubitChannel& phi, double tol)
{
    return choi_min_eigenvalue(choi(phi)) >= -tol;
}

PositivityVerdict is_positive(const QubitChannel& phi, double tol)
{
    const Mat3& a = phi.bloch_matrix();
    const Vec3& v = phi.translation();
    if (phi.is_unital(0.0)) {
        Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullV);
        const double top = svd.singularValues()(0);
        return {top <= 1.0 + tol, 1.0 - top, svd.matrixV().col(0)};
    }
    auto f = [&](const Vec3& m) { return (a * m + v).squaredNorm(); };
    auto grad = [&](const Vec3& m) -> Vec3 { return 2.0 * a.transpose() * (a * m + v); };
    const SphereExtremum best = maximize_convex_on_sphere(f, grad);
    const double top = std::sqrt(best.value);
    return {top <= 1.0 + tol, 1.0 - top, best.point};
}

double ell_functional(const QubitChannel& phi)
{
    if (!phi.is_unital()) {
        throw DomainError("ell functional is defined for unital maps");
    }
    const Mat3 sym = 0.5 * (phi.bloch_matrix() + phi.bloch_matrix().transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PauliMap dual(const QubitChannel& phi)
{
    return PauliMap(phi.affine().transpose());
}

bool is_self_dual(const QubitChannel& phi, double tol)
{
    const Mat3& a = phi.bloch_matrix();
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol && phi.is_unital(tol);
}

ClassicalReduction classical_reduction_matrix(const QubitChannel& phi, const ProjectorBasis& basis,
                                              double tol)
{
    ClassicalReduction out{Mat2r::Zero(), true};
    const PauliMap map = phi.pauli_map();
    for (int j = 0; j < 2; ++j) {
        const Mat2 image = map(basis.projector(j));
        for (int i = 0; i < 2; ++i) {
            out.matrix(i, j) = (basis.projector(i) * image).trace().real();
        }
    }
    out.stochastic = out.matrix.minCoeff() >= -tol;
    return out;
}

QubitChannel scaled_planar_rotation(double lambda, double alpha, double eta)
{
    Mat3 m;
    m << lambda * std::cos(alpha), -lambda * std::sin(alpha), 0,
         lambda * std::sin(alpha), lambda * std::cos(alpha), 0,
         0, 0, eta;
    return QubitChannel(m);
}

} // namespace pdiv
