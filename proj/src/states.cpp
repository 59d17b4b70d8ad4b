#include "pdiv/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pdiv/errors.hpp"

namespace pdiv {

DensityMatrix::DensityMatrix(const Mat2& entries, const Tolerances& tol) : entries_(entries)
{
    if (!is_hermitian(entries, tol.hermitian)) {
        throw InvalidStateError("density matrix is not Hermitian");
    }
    if (std::abs(entries.trace() - 1.0) > tol.trace) {
        throw InvalidStateError("density matrix does not have unit trace");
    }
    if (hermitian_eigenvalues(entries)[0] < -tol.positivity) {
        throw InvalidStateError("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::maximally_mixed()
{
    return DensityMatrix(0.5 * sigma(0));
}

ProjectorBasis::ProjectorBasis(const Vec3& n)
{
    const double norm = n.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw DomainError("projector basis direction must be a unit vector");
    }
    n_ = n / norm;
    chi_ = std::acos(std::clamp(n_(2), -1.0, 1.0));
    xi_ = std::atan2(n_(1), n_(0));

    const cplx phase = std::polar(1.0, xi_);
    const double c = std::cos(0.5 * chi_);
    const double s = std::sin(0.5 * chi_);
    rotation_ << c, -std::conj(phase) * s,
                 phase * s, c;
    projectors_[0] = 0.5 * (sigma(0) + pauli_combination(n_));
    projectors_[1] = sigma(0) - projectors_[0];
}

ProjectorBasis ProjectorBasis::from_angles(double chi, double xi)
{
    return ProjectorBasis(Vec3(std::sin(chi) * std::cos(xi), std::sin(chi) * std::sin(xi), std::cos(chi)));
}

const Mat2& ProjectorBasis::projector(int i) const
{
    if (i != 0 && i != 1) {
        throw std::out_of_range("projector index must be 0 or 1");
    }
    return projectors_[i];
}

Mat2 ProjectorBasis::diagonal_state(const Vec2& p) const
{
    return p(0) * projectors_[0] + p(1) * projectors_[1];
}

DensityMatrix bloch_to_density(const BlochVector& r, const Tolerances& tol)
{
    if (r.norm() > 1.0 + tol.bloch_norm) {
        throw InvalidStateError("Bloch vector outside the unit ball (norm " + std::to_string(r.norm()) + ")");
    }
    // Positivity is implied by the norm bound; relax the eigenvalue check accordingly.
    Tolerances relaxed = tol;
    relaxed.positivity = std::max(tol.positivity, tol.bloch_norm);
    return DensityMatrix(0.5 * (sigma(0) + pauli_combination(r.vec())), relaxed);
}

BlochVector density_to_bloch(const DensityMatrix& rho)
{
    const auto c = pauli_coefficients(rho.matrix());
    return BlochVector(c(1).real(), c(2).real(), c(3).real());
}

double trace_norm(const Mat2& h, double hermitian_tol)
{
    if (!is_hermitian(h, hermitian_tol)) {
        throw DomainError("trace_norm requires a Hermitian matrix");
    }
    const auto ev = hermitian_eigenvalues(h);
    return std::abs(ev[0]) + std::abs(ev[1]);
}

HelstromMatrix helstrom(const Mat2& rho, const Mat2& sigma_, double mu)
{
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw DomainError("Helstrom prior must lie in [0, 1]");
    }
    return {mu * rho - (1.0 - mu) * sigma_, mu};
}

HelstromMatrix helstrom(const DensityMatrix& rho, const DensityMatrix& sigma_, double mu)
{
    return helstrom(rho.matrix(), sigma_.matrix(), mu);
}

double l1_coherence(const Mat2& x, const ProjectorBasis& basis)
{
    const Mat2 rotated = basis.rotation().adjoint() * x * basis.rotation();
    return std::abs(rotated(0, 1)) + std::abs(rotated(1, 0));
}

double l1_coherence(const DensityMatrix& rho, const ProjectorBasis& basis)
{
    return l1_coherence(rho.matrix(), basis);
}

Mat2 decohere(const Mat2& x, const ProjectorBasis& basis)
{
    const Mat2& p = basis.projector(0);
    const Mat2& q = basis.projector(1);
    return p * x * p + q * x * q;
}

DensityMatrix decohere(const DensityMatrix& rho, const ProjectorBasis& basis)
{
    return DensityMatrix(decohere(rho.matrix(), basis));
}

} // namespace pdiv
