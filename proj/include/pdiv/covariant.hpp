#pragma once

// Qubit maps covariant under diagonal sign flips:
//   Phi[X] = sum_ij A_ij E_ij X E_ji + lambda E00 X E11 + conj(lambda) E11 X E00
//          + mu E00 X^T E11 + conj(mu) E11 X^T E00.
// Generators of dynamics in the class are again in the class with A -> B = dA/dt A^{-1}.

#include <functional>
#include <optional>

#include "pdiv/channels.hpp"
#include "pdiv/generators.hpp"
#include "pdiv/linalg.hpp"

namespace pdiv {

struct CovariantTriple {
    Mat2r A = Mat2r::Identity();
    cplx lambda{1.0, 0.0};
    cplx mu{0.0, 0.0};

    // A = [[a, 1 - b], [1 - a, b]]
    static CovariantTriple from_ab(double a, double b, cplx lambda, cplx mu);
    static CovariantTriple identity() { return {}; }

    double a() const { return A(0, 0); }
    double b() const { return A(1, 1); }
};

Mat2 apply_triple(const CovariantTriple& tr, const Mat2& x);
PauliMap to_pauli_map(const CovariantTriple& tr);
QubitChannel to_channel(const CovariantTriple& tr);

// Inverse of to_pauli_map; DomainError if the map leaves the class (tolerance on the forbidden entries).
CovariantTriple triple_from_pauli_map(const PauliMap& map, double tol = 1e-10);

// outer o inner, by composing the linear maps.
CovariantTriple compose_triples(const CovariantTriple& outer, const CovariantTriple& inner);
// (A A', lambda lambda' + mu conj(mu'), lambda mu' + mu conj(lambda')).
CovariantTriple compose_triples_closed_form(const CovariantTriple& outer, const CovariantTriple& inner);

struct TripleVerdict {
    bool holds;
    double margin;
};

// A_ij >= 0 and |lambda| + |mu| <= sqrt(A00 A11) + sqrt(A01 A10).
TripleVerdict positivity_triple(const CovariantTriple& tr, double tol = 1e-12);
// A_ij >= 0, |lambda| <= sqrt(A00 A11), |mu| <= sqrt(A01 A10).
TripleVerdict cp_triple(const CovariantTriple& tr, double tol = 1e-12);

// (A^T, conj(lambda), mu)
CovariantTriple dual_triple(const CovariantTriple& tr);
bool is_self_dual_triple(const CovariantTriple& tr, double tol = 1e-12);

struct TripleRate {
    double da;
    double db;
    cplx dlambda;
    cplx dmu;
};

struct CovariantFamily {
    std::function<CovariantTriple(double)> triple;
    // Analytic derivative; finite differences (h = 1e-5) are used when absent.
    std::function<TripleRate(double)> rate;

    CovariantTriple operator()(double t) const { return triple(t); }
    TripleRate derivative(double t) const;
};

struct CovariantGenerator {
    double gamma_plus;
    double gamma_minus;
    cplx l;
    cplx m;

    double gamma_t() const { return -l.real(); }
    double omega() const { return -l.imag(); }
    double gamma_l() const { return gamma_plus + gamma_minus; }
    double kappa() const { return -m.real(); }
    double eta() const { return -m.imag(); }
    double delta() const { return 0.5 * (gamma_plus - gamma_minus); }

    // The generator as a (trace-annihilating) member of the class: B = [[-g-, g+], [g-, -g+]].
    CovariantTriple as_triple() const;
};

// Throws SingularGeneratorError when |lambda|^2 = |mu|^2 or a + b = 1 (relative to the moduli).
CovariantGenerator generator_triple(const CovariantFamily& family, double t, double tol = 1e-12);

Mat3c kossakowski_of(const CovariantGenerator& gen);
// Coefficient of sigma_3 in H(t) = (omega/2) sigma_3.
double hamiltonian_of(const CovariantGenerator& gen);
GeneratorSpec to_generator_spec(const CovariantFamily& family, std::vector<double> breakpoints = {});
GeneratorSpec to_generator_spec(std::function<CovariantGenerator(double)> generator,
                                std::vector<double> breakpoints = {});

struct Prop4Verdict {
    bool divisible;
    double margin;       // P: min over projectors of 2 Tr(Q L[P]); CP: smallest eigenvalue of K
    double rate_margin;  // min(gamma_+, gamma_-)
    double condition;    // P: G_T - G_L/2 + sqrt(g+ g-) - |m|; CP: min(g+ g- - |m|^2, G_T - G_L/2)
};

Prop4Verdict prop4_p_div(const CovariantGenerator& gen, double tol = 1e-9);
Prop4Verdict prop4_cp_div(const CovariantGenerator& gen, double tol = 1e-9);

// Tr(Q L[P]) for P = |psi><psi|, psi = (w1, sqrt(1 - w1^2) e^{-i Omega / 2}), in closed form.
double quadratic_form_closed(const CovariantGenerator& gen, double w1, double big_omega);

// Unital self-dual-generator construction from g = |lambda| + |mu|, h = |lambda| - |mu|, the phase
// theta of mu and a = b. The phase of lambda follows from dphi/dt |lambda|^2 = dtheta/dt |mu|^2.
struct SelfDualFamily {
    std::function<double(double)> g;
    std::function<double(double)> h;
    std::function<double(double)> theta;
    std::function<double(double)> a;
    // Optional derivatives; central differences otherwise.
    std::function<double(double)> dg;
    std::function<double(double)> dh;
    std::function<double(double)> dtheta;
    std::function<double(double)> da;
};

// Throws DomainError at evaluation time when h <= 0 or h > g.
CovariantFamily selfdual_build(const SelfDualFamily& f);

// T00 = (1/2)(1 + (2a - 1)cos^2 chi + Re(lambda) sin^2 chi + Re(mu e^{2 i xi}) sin^2 chi), unital triples.
double t00_closed_form(const CovariantTriple& tr, double chi, double xi);

// |lambda| = e^{-2t} cosh t, phi = C tanh^3 t, |mu| = e^{-2t} sinh t, theta = 3C tanh t,
// a = b = e^{-t} cosh t, with analytic rates.
CovariantFamily example4_family(double c);
SelfDualFamily example4_selfdual(double c);
// |m_t| = sqrt(1 + r_t^2)
double example4_r(double c, double t);
// l = -2, gamma_+ = gamma_- = 1, m = e^{i(phi + theta)} (1 + i r_t)
CovariantGenerator example4_generator(double c, double t);

} // namespace pdiv
