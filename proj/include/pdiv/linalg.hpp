#pragma once

// Fixed-size types and Pauli algebra shared by every module.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace pdiv {

using cplx = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2cd;
using Mat2r = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;

inline constexpr double kPi = 3.14159265358979323846;

// sigma(0) is the identity, sigma(1..3) the Pauli matrices.
const Mat2& sigma(int k);

// E_ij = |i><j| in the sigma_3 eigenbasis.
Mat2 matrix_unit(int i, int j);

// r . sigma
Mat2 pauli_combination(const Vec3& r);

// Coefficients c_alpha = Tr(sigma_alpha X), so that X = (1/2) sum_alpha c_alpha sigma_alpha.
Eigen::Vector4cd pauli_coefficients(const Mat2& x);
Mat2 from_pauli_coefficients(const Eigen::Vector4cd& c);

bool is_hermitian(const Mat2& x, double tol);

// Closed-form eigenvalues of a 2x2 Hermitian matrix, ascending.
std::array<double, 2> hermitian_eigenvalues(const Mat2& h);

// Antisymmetric matrix [w]_x with [w]_x v = w x v.
Mat3 cross_matrix(const Vec3& w);

// Smallest eigenvalue of a Hermitian matrix (dense, any size).
double min_hermitian_eigenvalue(const Eigen::MatrixXcd& h);

} // namespace pdiv
