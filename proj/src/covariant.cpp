#include "pdiv/covariant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdiv/errors.hpp"

namespace pdiv {

CovariantTriple CovariantTriple::from_ab(double a, double b, cplx lambda, cplx mu)
{
    CovariantTriple tr;
    tr.A << a, 1.0 - b, 1.0 - a, b;
    tr.lambda = lambda;
    tr.mu = mu;
    return tr;
}

Mat2 apply_triple(const CovariantTriple& tr, const Mat2& x)
{
    Mat2 out;
    out(0, 0) = tr.A(0, 0) * x(0, 0) + tr.A(0, 1) * x(1, 1);
    out(1, 1) = tr.A(1, 0) * x(0, 0) + tr.A(1, 1) * x(1, 1);
    out(0, 1) = tr.lambda * x(0, 1) + tr.mu * x(1, 0);
    out(1, 0) = std::conj(tr.lambda) * x(1, 0) + std::conj(tr.mu) * x(0, 1);
    return out;
}

PauliMap to_pauli_map(const CovariantTriple& tr)
{
    return PauliMap::from_linear_map([&](const Mat2& x) { return apply_triple(tr, x); });
}

QubitChannel to_channel(const CovariantTriple& tr)
{
    return QubitChannel::from_pauli_map(to_pauli_map(tr));
}

CovariantTriple triple_from_pauli_map(const PauliMap& map, double tol)
{
    const Mat4& m = map.matrix();
    // Entries coupling the diagonal and off-diagonal sectors must vanish.
    const double leak = std::max({std::abs(m(0, 1)), std::abs(m(0, 2)), std::abs(m(3, 1)), std::abs(m(3, 2)),
                                  std::abs(m(1, 0)), std::abs(m(2, 0)), std::abs(m(1, 3)), std::abs(m(2, 3))});
    if (leak > tol) {
        throw DomainError("map is not in the covariant class");
    }
    const Mat2 e00 = map(matrix_unit(0, 0));
    const Mat2 e11 = map(matrix_unit(1, 1));
    const Mat2 e01 = map(matrix_unit(0, 1));
    CovariantTriple tr;
    tr.A << e00(0, 0).real(), e11(0, 0).real(), e00(1, 1).real(), e11(1, 1).real();
    tr.lambda = e01(0, 1);
    tr.mu = std::conj(e01(1, 0));
    return tr;
}

CovariantTriple compose_triples(const CovariantTriple& outer, const CovariantTriple& inner)
{
    return triple_from_pauli_map(compose(to_pauli_map(outer), to_pauli_map(inner)));
}

CovariantTriple compose_triples_closed_form(const CovariantTriple& outer, const CovariantTriple& inner)
{
    CovariantTriple tr;
    tr.A = outer.A * inner.A;
    tr.lambda = outer.lambda * inner.lambda + outer.mu * std::conj(inner.mu);
    tr.mu = outer.lambda * inner.mu + outer.mu * std::conj(inner.lambda);
    return tr;
}

namespace {

double safe_sqrt(double x)
{
    return std::sqrt(std::max(x, 0.0));
}

} // namespace

TripleVerdict positivity_triple(const CovariantTriple& tr, double tol)
{
    const double entries = tr.A.minCoeff();
    const double bound = safe_sqrt(tr.A(0, 0) * tr.A(1, 1)) + safe_sqrt(tr.A(0, 1) * tr.A(1, 0));
    const double margin = std::min(entries, bound - std::abs(tr.lambda) - std::abs(tr.mu));
    return {margin >= -tol, margin};
}

TripleVerdict cp_triple(const CovariantTriple& tr, double tol)
{
    const double entries = tr.A.minCoeff();
    const double lam = safe_sqrt(tr.A(0, 0) * tr.A(1, 1)) - std::abs(tr.lambda);
    const double mu = safe_sqrt(tr.A(0, 1) * tr.A(1, 0)) - std::abs(tr.mu);
    const double margin = std::min({entries, lam, mu});
    return {margin >= -tol, margin};
}

CovariantTriple dual_triple(const CovariantTriple& tr)
{
    CovariantTriple d;
    d.A = tr.A.transpose();
    d.lambda = std::conj(tr.lambda);
    d.mu = tr.mu;
    return d;
}

bool is_self_dual_triple(const CovariantTriple& tr, double tol)
{
    return std::abs(tr.A(0, 1) - tr.A(1, 0)) <= tol && std::abs(tr.lambda.imag()) <= tol;
}

TripleRate CovariantFamily::derivative(double t) const
{
    if (rate) {
        return rate(t);
    }
    constexpr double h = 1e-5;
    auto diff = [&](auto&& get) {
        if (t >= h) {
            return (get(triple(t + h)) - get(triple(t - h))) / (2.0 * h);
        }
        return (-3.0 * get(triple(t)) + 4.0 * get(triple(t + h)) - get(triple(t + 2.0 * h))) / (2.0 * h);
    };
    return {diff([](const CovariantTriple& x) { return x.a(); }),
            diff([](const CovariantTriple& x) { return x.b(); }),
            diff([](const CovariantTriple& x) { return x.lambda; }),
            diff([](const CovariantTriple& x) { return x.mu; })};
}

CovariantTriple CovariantGenerator::as_triple() const
{
    CovariantTriple tr;
    tr.A << -gamma_minus, gamma_plus, gamma_minus, -gamma_plus;
    tr.lambda = l;
    tr.mu = m;
    return tr;
}

CovariantGenerator generator_triple(const CovariantFamily& family, double t, double tol)
{
    const CovariantTriple tr = family(t);
    const TripleRate d = family.derivative(t);
    const double det = std::norm(tr.lambda) - std::norm(tr.mu);
    const double det_a = tr.a() + tr.b() - 1.0;
    const double scale = std::norm(tr.lambda) + std::norm(tr.mu);
    if (std::abs(det) <= tol * scale || std::abs(det_a) <= tol * (std::abs(tr.a()) + std::abs(tr.b()))) {
        throw SingularGeneratorError("covariant family has no generator", t);
    }
    // B = dA/dt A^{-1}
    Mat2r da;
    da << d.da, -d.db, -d.da, d.db;
    const Mat2r b = da * tr.A.inverse();
    CovariantGenerator gen;
    gen.gamma_minus = -b(0, 0);
    gen.gamma_plus = b(0, 1);
    gen.l = (d.dlambda * std::conj(tr.lambda) - d.dmu * std::conj(tr.mu)) / det;
    gen.m = (tr.lambda * d.dmu - tr.mu * d.dlambda) / det;
    return gen;
}

Mat3c kossakowski_of(const CovariantGenerator& gen)
{
    const double gl = gen.gamma_l();
    const cplx off(gen.eta(), -gen.delta());
    Mat3c k = Mat3c::Zero();
    k(0, 0) = 0.5 * gl - gen.kappa();
    k(1, 1) = 0.5 * gl + gen.kappa();
    k(2, 2) = gen.gamma_t() - 0.5 * gl;
    k(0, 1) = off;
    k(1, 0) = std::conj(off);
    return k;
}

double hamiltonian_of(const CovariantGenerator& gen)
{
    return 0.5 * gen.omega();
}

GeneratorSpec to_generator_spec(const CovariantFamily& family, std::vector<double> breakpoints)
{
    return GeneratorSpec([family](double t) { return Vec3(0.0, 0.0, generator_triple(family, t).omega()); },
                         [family](double t) { return kossakowski_of(generator_triple(family, t)); },
                         std::move(breakpoints));
}

GeneratorSpec to_generator_spec(std::function<CovariantGenerator(double)> generator, std::vector<double> breakpoints)
{
    return GeneratorSpec([generator](double t) { return Vec3(0.0, 0.0, generator(t).omega()); },
                         [generator](double t) { return kossakowski_of(generator(t)); }, std::move(breakpoints));
}

Prop4Verdict prop4_p_div(const CovariantGenerator& gen, double tol)
{
    const double gp = gen.gamma_plus;
    const double gm = gen.gamma_minus;
    const double am = std::abs(gen.m);
    const double cross = gen.gamma_t() - 0.5 * gen.gamma_l() - am;
    // Tr(Q L[P]) minimised over the relative phase, as a quadratic in x = |w1|^2.
    auto q = [&](double x) { return gm * x * x + gp * (1.0 - x) * (1.0 - x) + 2.0 * cross * x * (1.0 - x); };
    double best = std::min(q(0.0), q(1.0));
    const double curvature = gm + gp - 2.0 * cross;
    if (curvature > 0.0) {
        const double x = (gp - cross) / curvature;
        if (x > 0.0 && x < 1.0) {
            best = std::min(best, q(x));
        }
    }
    Prop4Verdict v;
    v.margin = 2.0 * best;
    v.rate_margin = std::min(gp, gm);
    v.condition = gen.gamma_t() - 0.5 * gen.gamma_l() + safe_sqrt(gp * gm) - am;
    v.divisible = v.rate_margin >= -tol && v.condition >= -tol;
    return v;
}

Prop4Verdict prop4_cp_div(const CovariantGenerator& gen, double tol)
{
    Prop4Verdict v;
    v.rate_margin = std::min(gen.gamma_plus, gen.gamma_minus);
    v.condition = std::min(gen.gamma_plus * gen.gamma_minus - std::norm(gen.m), gen.gamma_t() - 0.5 * gen.gamma_l());
    v.margin = min_hermitian_eigenvalue(kossakowski_of(gen));
    v.divisible = v.rate_margin >= -tol && v.condition >= -tol;
    return v;
}

double quadratic_form_closed(const CovariantGenerator& gen, double w1, double big_omega)
{
    const double p = w1 * w1;
    const double q = 1.0 - p;
    return gen.gamma_minus * p * p + gen.gamma_plus * q * q + 2.0 * (gen.gamma_t() - 0.5 * gen.gamma_l()) * p * q -
           2.0 * std::abs(gen.m) * p * q * std::cos(std::arg(gen.m) - big_omega);
}

namespace {

double differentiate(const std::function<double(double)>& f, const std::function<double(double)>& df, double t)
{
    if (df) {
        return df(t);
    }
    constexpr double h = 1e-5;
    if (t >= h) {
        return (f(t + h) - f(t - h)) / (2.0 * h);
    }
    return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2.0 * h)) / (2.0 * h);
}

struct Moduli {
    double lambda;
    double mu;
};

Moduli moduli(const SelfDualFamily& f, double t)
{
    const double g = f.g(t);
    const double h = f.h(t);
    if (!(h > 0.0) || h > g) {
        throw DomainError("self-dual family needs 0 < h <= g at t = " + std::to_string(t));
    }
    return {0.5 * (g + h), 0.5 * (g - h)};
}

} // namespace

CovariantFamily selfdual_build(const SelfDualFamily& f)
{
    if (!f.g || !f.h || !f.theta || !f.a) {
        throw std::invalid_argument("self-dual family is missing a function");
    }
    auto phase_rate = [f](double s) {
        const Moduli mod = moduli(f, s);
        const double ratio = mod.mu / mod.lambda;
        return differentiate(f.theta, f.dtheta, s) * ratio * ratio;
    };
    const double quad_tol = f.dtheta && f.dg && f.dh ? 1e-13 : 1e-9;
    auto phase = [phase_rate, quad_tol](double t) {
        if (t == 0.0) {
            return 0.0;
        }
        using boost::math::quadrature::gauss_kronrod;
        const double lo = std::min(0.0, t);
        const double hi = std::max(0.0, t);
        const double value = gauss_kronrod<double, 31>::integrate(phase_rate, lo, hi, 15, quad_tol);
        return t > 0.0 ? value : -value;
    };
    CovariantFamily family;
    family.triple = [f, phase](double t) {
        const Moduli mod = moduli(f, t);
        const double a = f.a(t);
        return CovariantTriple::from_ab(a, a, std::polar(mod.lambda, phase(t)), std::polar(mod.mu, f.theta(t)));
    };
    family.rate = [f, phase, phase_rate](double t) {
        const Moduli mod = moduli(f, t);
        const double dl = 0.5 * (differentiate(f.g, f.dg, t) + differentiate(f.h, f.dh, t));
        const double dm = 0.5 * (differentiate(f.g, f.dg, t) - differentiate(f.h, f.dh, t));
        const double phi = phase(t);
        const double theta = f.theta(t);
        const cplx i(0.0, 1.0);
        const double da = differentiate(f.a, f.da, t);
        return TripleRate{da, da, (dl + i * mod.lambda * phase_rate(t)) * std::polar(1.0, phi),
                          (dm + i * mod.mu * differentiate(f.theta, f.dtheta, t)) * std::polar(1.0, theta)};
    };
    return family;
}

double t00_closed_form(const CovariantTriple& tr, double chi, double xi)
{
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    const cplx mu_rot = tr.mu * std::polar(1.0, 2.0 * xi);
    return 0.5 * (1.0 + (2.0 * tr.a() - 1.0) * c * c + tr.lambda.real() * s * s + mu_rot.real() * s * s);
}

CovariantFamily example4_family(double c)
{
    CovariantFamily family;
    family.triple = [c](double t) {
        const double e2 = std::exp(-2.0 * t);
        const double th = std::tanh(t);
        const double a = std::exp(-t) * std::cosh(t);
        return CovariantTriple::from_ab(a, a, std::polar(e2 * std::cosh(t), c * th * th * th),
                                        std::polar(e2 * std::sinh(t), 3.0 * c * th));
    };
    family.rate = [c](double t) {
        const double e2 = std::exp(-2.0 * t);
        const double ch = std::cosh(t);
        const double sh = std::sinh(t);
        const double th = std::tanh(t);
        const double sech2 = 1.0 / (ch * ch);
        const cplx i(0.0, 1.0);
        const double lam = e2 * ch;
        const double mu = e2 * sh;
        const double phi = c * th * th * th;
        const double theta = 3.0 * c * th;
        const cplx dl = (e2 * (sh - 2.0 * ch) + i * lam * 3.0 * c * th * th * sech2) * std::polar(1.0, phi);
        const cplx dm = (e2 * (ch - 2.0 * sh) + i * mu * 3.0 * c * sech2) * std::polar(1.0, theta);
        return TripleRate{-e2, -e2, dl, dm};
    };
    return family;
}

SelfDualFamily example4_selfdual(double c)
{
    SelfDualFamily f;
    f.g = [](double t) { return std::exp(-t); };
    f.h = [](double t) { return std::exp(-3.0 * t); };
    f.theta = [c](double t) { return 3.0 * c * std::tanh(t); };
    f.a = [](double t) { return std::exp(-t) * std::cosh(t); };
    f.dg = [](double t) { return -std::exp(-t); };
    f.dh = [](double t) { return -3.0 * std::exp(-3.0 * t); };
    f.dtheta = [c](double t) {
        const double ch = std::cosh(t);
        return 3.0 * c / (ch * ch);
    };
    f.da = [](double t) { return -std::exp(-2.0 * t); };
    return f;
}

double example4_r(double c, double t)
{
    const double ch = std::cosh(t);
    return 3.0 * c * std::tanh(t) / (ch * ch);
}

CovariantGenerator example4_generator(double c, double t)
{
    const double th = std::tanh(t);
    CovariantGenerator g;
    g.gamma_plus = 1.0;
    g.gamma_minus = 1.0;
    g.l = -2.0;
    g.m = std::polar(1.0, c * th * th * th + 3.0 * c * th) * cplx(1.0, example4_r(c, t));
    return g;
}

} // namespace pdiv
