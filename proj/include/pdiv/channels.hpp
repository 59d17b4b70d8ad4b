#pragma once

// Static qubit linear maps in the Pauli (affine Bloch) representation.

#include <functional>

#include "pdiv/linalg.hpp"
#include "pdiv/states.hpp"

namespace pdiv {

// Hermiticity-preserving linear map on M_2(C), stored as the real 4x4 matrix
// M_{ab} = (1/2) Tr(sigma_a Phi[sigma_b]). Need not be trace preserving (duals of channels).
class PauliMap {
public:
    PauliMap() : m_(Mat4::Identity()) {}
    explicit PauliMap(const Mat4& m) : m_(m) {}

    static PauliMap from_linear_map(const std::function<Mat2(const Mat2&)>& map);

    const Mat4& matrix() const noexcept { return m_; }
    Mat2 operator()(const Mat2& x) const;

    bool is_trace_preserving(double tol = 1e-12) const;
    bool is_unital(double tol = 1e-12) const;

private:
    Mat4 m_;
};

PauliMap compose(const PauliMap& outer, const PauliMap& inner);

// Trace-preserving qubit map: Bloch action r -> bloch_matrix r + translation. Positivity is a
// queried property, not an invariant.
class QubitChannel {
public:
    QubitChannel() : bloch_(Mat3::Identity()), translation_(Vec3::Zero()) {}
    explicit QubitChannel(const Mat3& bloch_matrix, const Vec3& translation = Vec3::Zero())
        : bloch_(bloch_matrix), translation_(translation) {}

    static QubitChannel identity() { return {}; }
    // Throws DomainError if the map is not trace preserving within tol.
    static QubitChannel from_pauli_map(const PauliMap& map, double tol = 1e-10);
    // Counter-clockwise rotation of the Bloch ball about axis by angle (unitary channel).
    static QubitChannel rotation(const Vec3& axis, double angle);
    static QubitChannel pauli(double l1, double l2, double l3);

    const Mat3& bloch_matrix() const noexcept { return bloch_; }
    const Vec3& translation() const noexcept { return translation_; }
    Mat4 affine() const;
    PauliMap pauli_map() const { return PauliMap(affine()); }

    bool is_unital(double tol = 1e-12) const { return translation_.cwiseAbs().maxCoeff() <= tol; }
    double determinant() const { return bloch_.determinant(); }

private:
    Mat3 bloch_;
    Vec3 translation_;
};

struct ChoiMatrix {
    Mat4c entries;
};

struct PositivityVerdict {
    bool positive;
    double margin;  // 1 - max_{|m|=1} |bloch m + translation|
    Vec3 witness;   // maximising direction
};

Mat2 apply(const QubitChannel& phi, const Mat2& x);
Mat2 apply(const QubitChannel& phi, const DensityMatrix& rho);

// phi o psi (psi acts first).
QubitChannel compose(const QubitChannel& phi, const QubitChannel& psi);

// Throws SingularMapError if the Bloch block is singular within tol.
QubitChannel inverse(const QubitChannel& phi, double tol = 1e-13);

// (Phi (x) id)[sum_ij E_ij (x) E_ij]; row/column index 2a + i for system index a, ancilla index i.
ChoiMatrix choi(const PauliMap& phi);
ChoiMatrix choi(const QubitChannel& phi);
double choi_min_eigenvalue(const ChoiMatrix& c);
bool is_completely_positive(const QubitChannel& phi, double tol = 1e-10);

PositivityVerdict is_positive(const QubitChannel& phi, double tol = 1e-9);

// sup_{|n|=1} |<n|bloch|n>| for unital channels; DomainError otherwise.
double ell_functional(const QubitChannel& phi);

// Heisenberg-picture dual; its Pauli matrix is the transpose.
PauliMap dual(const QubitChannel& phi);
bool is_self_dual(const QubitChannel& phi, double tol = 1e-12);

struct ClassicalReduction {
    Mat2r matrix;   // T_ij = Tr(P_i Phi[P_j])
    bool stochastic;
};

ClassicalReduction classical_reduction_matrix(const QubitChannel& phi, const ProjectorBasis& basis,
                                              double tol = 1e-12);

// Unital map whose Bloch matrix rotates the xy-plane by alpha scaled by lambda and scales z by eta.
QubitChannel scaled_planar_rotation(double lambda, double alpha, double eta);

} // namespace pdiv
