#include "pdiv/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace pdiv {

namespace {

std::array<Mat2, 4> make_sigmas()
{
    const cplx i{0.0, 1.0};
    std::array<Mat2, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    return s;
}

} // namespace

const Mat2& sigma(int k)
{
    static const std::array<Mat2, 4> sigmas = make_sigmas();
    if (k < 0 || k > 3) {
        throw std::out_of_range("Pauli index must be in 0..3");
    }
    return sigmas[static_cast<std::size_t>(k)];
}

Mat2 matrix_unit(int i, int j)
{
    Mat2 e = Mat2::Zero();
    e(i, j) = 1.0;
    return e;
}

Mat2 pauli_combination(const Vec3& r)
{
    return r(0) * sigma(1) + r(1) * sigma(2) + r(2) * sigma(3);
}

Eigen::Vector4cd pauli_coefficients(const Mat2& x)
{
    Eigen::Vector4cd c;
    for (int k = 0; k < 4; ++k) {
        c(k) = (sigma(k) * x).trace();
    }
    return c;
}

Mat2 from_pauli_coefficients(const Eigen::Vector4cd& c)
{
    Mat2 x = Mat2::Zero();
    for (int k = 0; k < 4; ++k) {
        x += 0.5 * c(k) * sigma(k);
    }
    return x;
}

bool is_hermitian(const Mat2& x, double tol)
{
    return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::array<double, 2> hermitian_eigenvalues(const Mat2& h)
{
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double b2 = std::norm(h(0, 1));
    const double mean = 0.5 * (a + d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + b2);
    return {mean - half_gap, mean + half_gap};
}

Mat3 cross_matrix(const Vec3& w)
{
    Mat3 m;
    m << 0, -w(2), w(1),
         w(2), 0, -w(0),
         -w(1), w(0), 0;
    return m;
}

double min_hermitian_eigenvalue(const Eigen::MatrixXcd& h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace pdiv
