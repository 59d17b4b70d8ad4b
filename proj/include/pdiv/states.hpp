#pragma once

// Qubit state algebra: density matrices, Bloch vectors, projective bases, Helstrom matrices.

#include "pdiv/linalg.hpp"

namespace pdiv {

struct Tolerances {
    double hermitian = 1e-12;
    double trace = 1e-12;
    double positivity = 1e-12;
    double bloch_norm = 1e-12;
};

class BlochVector {
public:
    BlochVector() : r_(Vec3::Zero()) {}
    explicit BlochVector(const Vec3& r) : r_(r) {}
    BlochVector(double x, double y, double z) : r_(x, y, z) {}

    const Vec3& vec() const noexcept { return r_; }
    double norm() const { return r_.norm(); }

private:
    Vec3 r_;
};

// 2x2 density matrix; the constructor enforces Hermiticity, unit trace and positivity.
class DensityMatrix {
public:
    explicit DensityMatrix(const Mat2& entries, const Tolerances& tol = {});

    static DensityMatrix maximally_mixed();

    const Mat2& matrix() const noexcept { return entries_; }

private:
    Mat2 entries_;
};

// Orthogonal rank-1 projectors P_n = (1 + n.sigma)/2 and P_{-n} = 1 - P_n.
//
// The eigenvector gauge follows the spherical angles of n = (sin chi cos xi, sin chi sin xi, cos chi):
// |+n> = (cos(chi/2), e^{i xi} sin(chi/2)), |-n> = (-e^{-i xi} sin(chi/2), cos(chi/2)).
class ProjectorBasis {
public:
    // n must have unit norm (within 1e-9); it is renormalised exactly.
    explicit ProjectorBasis(const Vec3& n);

    static ProjectorBasis from_angles(double chi, double xi);
    static ProjectorBasis computational() { return ProjectorBasis(Vec3::UnitZ()); }

    const Vec3& direction() const noexcept { return n_; }
    double chi() const noexcept { return chi_; }
    double xi() const noexcept { return xi_; }

    // projector(0) = P_n, projector(1) = P_{-n}.
    const Mat2& projector(int i) const;

    // Unitary whose columns are |+n>, |-n>.
    const Mat2& rotation() const noexcept { return rotation_; }

    // Incoherent state sum_i p_i P_i.
    Mat2 diagonal_state(const Vec2& p) const;

private:
    Vec3 n_;
    double chi_;
    double xi_;
    Mat2 rotation_;
    Mat2 projectors_[2];
};

struct HelstromMatrix {
    Mat2 entries;
    double mu;
};

DensityMatrix bloch_to_density(const BlochVector& r, const Tolerances& tol = {});
BlochVector density_to_bloch(const DensityMatrix& rho);

// Sum of absolute eigenvalues of a Hermitian matrix; throws DomainError otherwise.
double trace_norm(const Mat2& h, double hermitian_tol = 1e-12);

// mu rho - (1 - mu) sigma
HelstromMatrix helstrom(const DensityMatrix& rho, const DensityMatrix& sigma, double mu);
HelstromMatrix helstrom(const Mat2& rho, const Mat2& sigma, double mu);

// Sum of absolute off-diagonal entries in the eigenbasis of the projector basis.
double l1_coherence(const Mat2& x, const ProjectorBasis& basis);
double l1_coherence(const DensityMatrix& rho, const ProjectorBasis& basis);

// P_n X P_n + P_{-n} X P_{-n}
Mat2 decohere(const Mat2& x, const ProjectorBasis& basis);
DensityMatrix decohere(const DensityMatrix& rho, const ProjectorBasis& basis);

} // namespace pdiv
