#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pdiv/classical.hpp"
#include "pdiv/covariant.hpp"
#include "pdiv/errors.hpp"
#include "pdiv/numerics.hpp"
#include "pdiv/scenario.hpp"

using namespace pdiv;

namespace {

// Measurement direction at angle theta from the z rotation axis.
ProjectorBasis tilted(double theta)
{
    return ProjectorBasis::from_angles(theta, 0.3);
}

double unitary_t00(double omega, double theta, double t)
{
    const double c = std::cos(theta), s = std::sin(theta);
    return 0.5 * (1 + c * c + std::cos(omega * t) * s * s);
}

double unitary_f(double omega, double theta, double t)
{
    const double c = std::cos(theta), s = std::sin(theta);
    return -0.5 * omega * std::sin(omega * t) * s * s / (c * c + std::cos(omega * t) * s * s);
}

Propagator unitary_dynamics(double omega, const std::vector<double>& grid)
{
    return Propagator::from_family(grid, [omega](double t) { return QubitChannel::rotation(Vec3::UnitZ(), omega * t); });
}

} // namespace

TEST(ReduceMap, IdentityDynamics)
{
    const auto grid = uniform_grid(1.0, 10);
    const StochasticProcess sp =
        reduce_map(Propagator::from_family(grid, [](double) { return QubitChannel::identity(); }),
                   ProjectorBasis::from_angles(0.7, 0.1));
    for (const auto& t : sp.matrices) {
        EXPECT_LT((t - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
    }
}

TEST(ReduceMap, UnitaryClosedForm)
{
    const auto grid = uniform_grid(4 * kPi, 400);
    for (double theta : {kPi / 6, kPi / 3, 1.0}) {
        const StochasticProcess sp = reduce_map(unitary_dynamics(1.3, grid), tilted(theta));
        for (std::size_t k = 0; k < grid.size(); ++k) {
            EXPECT_NEAR(sp.matrices[k](0, 0), unitary_t00(1.3, theta, grid[k]), 1e-14);
            EXPECT_NEAR(sp.matrices[k](0, 1), sp.matrices[k](1, 0), 1e-14);
        }
    }
}

TEST(ReduceMap, CovariantClosedForm)
{
    const double c = 1.5;
    const CovariantFamily family = example4_family(c);
    const auto grid = uniform_grid(10.0, 1000);
    const StochasticProcess sp =
        reduce_map(Propagator::from_family(grid, [&](double t) { return to_channel(family(t)); }),
                   ProjectorBasis::from_angles(kPi / 2, kPi / 4));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const double th = std::tanh(t);
        const double expected =
            std::exp(-2 * t) * (std::cosh(t) * std::cos(c * th * th * th) - std::sinh(t) * std::sin(3 * c * th));
        EXPECT_NEAR(2 * sp.matrices[k](0, 0) - 1, expected, 1e-14);
    }
}

TEST(ReduceMap, StochasticForCptpDynamics)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GeneratorSpec g([](double t) { return Vec3(0.3, 0.0, 1.0 + t); },
                          [](double) {
                              Mat3c k = Mat3c::Identity();
                              k(0, 1) = cplx(0.0, -0.8);
                              k(1, 0) = cplx(0.0, 0.8);
                              return k;
                          });
    const Propagator p = propagate_ode(g, uniform_grid(3.0, 300));
    for (int k = 0; k < 30; ++k) {
        const StochasticProcess sp = reduce_map(p, ProjectorBasis::from_angles(kPi * u(rng), 2 * kPi * u(rng)));
        for (const auto& t : sp.matrices) {
            EXPECT_LT((t.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
            EXPECT_GE(t.minCoeff(), -1e-12);
        }
    }
}

TEST(ReduceGenerator, HamiltonianVanishes)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GeneratorSpec g = GeneratorSpec::hamiltonian([](double) { return Vec3(0.5, -1.0, 2.0); });
    for (int k = 0; k < 20; ++k) {
        const auto l = reduce_generator_at(g, ProjectorBasis::from_angles(kPi * u(rng), 2 * kPi * u(rng)), 0.0);
        EXPECT_LT(l.norm(), 1e-15);
    }
}

TEST(ReduceGenerator, PauliComputationalBasis)
{
    const Vec3 gammas(0.4, 0.9, 2.0);
    const auto l = reduce_generator_at(GeneratorSpec::pauli([gammas](double) { return gammas; }),
                                       ProjectorBasis::computational(), 0.0);
    const double half = 0.5 * (gammas(0) + gammas(1));
    Eigen::MatrixXd expected(2, 2);
    expected << -half, half, half, -half;
    EXPECT_LT((l - expected).norm(), 1e-15);
    EXPECT_LT(reduce_generator_at(GeneratorSpec::zero(), ProjectorBasis::computational(), 0.0).norm(), 1e-15);
}

TEST(ReduceGenerator, PDivisibleDynamicsIsKolmogorovInEveryBasis)
{
    const GeneratorSpec g([](double t) { return Vec3(1.0, 0.0, std::sin(t)); },
                          [](double t) {
                              Mat3c k = Mat3c::Zero();
                              k(0, 0) = 1.0 + 0.5 * std::cos(t);
                              k(1, 1) = 1.0;
                              k(2, 2) = -0.3;
                              return k;
                          });
    const auto grid = uniform_grid(5.0, 200);
    ASSERT_TRUE(p_div_over_grid(g, grid).divisible);
    for (const Vec3& n : fibonacci_sphere(300)) {
        const ClassicalGenerator lg = reduce_generator(g, ProjectorBasis(n), grid);
        EXPECT_TRUE(kolmogorov_check(lg).divisible);
    }
}

TEST(SolveClassicalMaster, ConstantGeneratorIsExponential)
{
    Eigen::MatrixXd l(2, 2);
    l << -0.7, 0.3, 0.7, -0.3;
    const auto grid = uniform_grid(4.0, 40);
    const ClassicalGenerator lg{grid, std::vector<Eigen::MatrixXd>(grid.size(), l)};
    const StochasticProcess d = solve_classical_master(lg, ProjectorBasis::computational());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        EXPECT_LT((d.matrices[k] - Eigen::MatrixXd(grid[k] * l).exp()).norm(), 1e-13);
        EXPECT_GE(d.matrices[k].minCoeff(), 0.0);
    }
    const ClassicalGenerator zero{grid, std::vector<Eigen::MatrixXd>(grid.size(), Eigen::MatrixXd::Zero(2, 2))};
    const StochasticProcess id = solve_classical_master(zero, ProjectorBasis::computational());
    EXPECT_LT((id.matrices.back() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
}

TEST(SolveClassicalMaster, IteratedMeasurementsApproachMaster)
{
    const GeneratorSpec g = GeneratorSpec([](double) { return Vec3(0, 0, 1.0); },
                                          [](double) { return Vec3(0.2, 0.5, 0.3).cast<cplx>().asDiagonal().toDenseMatrix().eval(); });
    const ProjectorBasis basis = ProjectorBasis::from_angles(kPi / 3, kPi / 5);
    const Eigen::MatrixXd l = reduce_generator_at(g, basis, 0.0);
    const Eigen::MatrixXd d = l.exp();
    double previous = 1e300;
    for (std::size_t n = 2; n <= 256; n *= 2) {
        const double err = (iterated_reduction(semigroup_map(g, 1.0 / n), basis, n) - d).cwiseAbs().maxCoeff();
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-2);
    // Without intermediate measurements the process differs from D(t).
    const Eigen::MatrixXd t1 = iterated_reduction(semigroup_map(g, 1.0), basis, 1);
    EXPECT_GT((t1 - d).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(ClassicalGeneratorFromT, RecoversConstantGenerator)
{
    Eigen::MatrixXd l(2, 2);
    l << -1.0, 0.25, 1.0, -0.25;
    const auto grid = uniform_grid(2.0, 2000);
    StochasticProcess sp{grid, {}, ProjectorBasis::computational()};
    for (double t : grid) {
        sp.matrices.push_back(Eigen::MatrixXd(t * l).exp());
    }
    const ClassicalGenerator lg = classical_generator_from_T(sp);
    for (const auto& m : lg.matrices) {
        EXPECT_LT((m - l).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_TRUE(kolmogorov_check(lg).divisible);
}

TEST(ClassicalGeneratorFromT, SymmetricFormIsFTimesFixedMatrix)
{
    const auto grid = uniform_grid(1.0, 1000);
    const StochasticProcess sp = reduce_map(unitary_dynamics(1.0, grid), tilted(kPi / 6));
    const ClassicalGenerator lg = classical_generator_from_T(sp);
    for (std::size_t k = 0; k < grid.size(); k += 50) {
        const double f = unitary_f(1.0, kPi / 6, grid[k]);
        Eigen::MatrixXd expected(2, 2);
        expected << f, -f, -f, f;
        EXPECT_LT((lg.matrices[k] - expected).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(ClassicalGeneratorFromT, SingularProcessReportsTime)
{
    const auto grid = uniform_grid(kPi, 100);
    const StochasticProcess sp = reduce_map(unitary_dynamics(1.0, grid), tilted(kPi / 2));
    try {
        classical_generator_from_T(sp);
        FAIL() << "expected a singular process";
    } catch (const SingularProcessError& e) {
        EXPECT_NEAR(e.time(), kPi / 2, 1e-12);
    }
}

TEST(FCriterion, UnitaryClosedForm)
{
    const auto grid = uniform_grid(4 * kPi, 4000);
    for (double theta : {kPi / 6, kPi / 8}) {
        const FCriterion fc = f_criterion(reduce_map(unitary_dynamics(1.0, grid), tilted(theta)));
        EXPECT_TRUE(fc.invertible);
        EXPECT_FALSE(fc.divisible);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            ASSERT_TRUE(fc.f[k].has_value());
            EXPECT_NEAR(*fc.f[k], unitary_f(1.0, theta, grid[k]), 1e-7);
        }
    }
}

TEST(FCriterion, BasisOnRotationAxis)
{
    const auto grid = uniform_grid(4 * kPi, 400);
    const FCriterion fc = f_criterion(reduce_map(unitary_dynamics(1.0, grid), ProjectorBasis::computational()));
    for (const auto& f : fc.f) {
        EXPECT_NEAR(*f, 0.0, 1e-12);
    }
    EXPECT_TRUE(fc.divisible);
}

TEST(FCriterion, ConstantPauliIsMinusOneInEveryBasis)
{
    const auto grid = uniform_grid(2.0, 400);
    const Propagator p = Propagator::from_family(
        grid, [](double t) { return pauli_closed_form(Vec3(1, 1, 1), RatePreset::constant, t); });
    for (const Vec3& n : fibonacci_sphere(20)) {
        const FCriterion fc = f_criterion(reduce_map(p, ProjectorBasis(n)));
        for (const auto& f : fc.f) {
            EXPECT_NEAR(*f, -1.0, 1e-8);
        }
        EXPECT_TRUE(fc.divisible);
    }
}

TEST(FCriterion, SingularPointsAreFlagged)
{
    const auto grid = uniform_grid(2 * kPi, 2000);
    const FCriterion fc = f_criterion(reduce_map(unitary_dynamics(1.0, grid), tilted(kPi / 2)));
    EXPECT_FALSE(fc.invertible);
    std::size_t flagged = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (fc.singular[k]) {
            ++flagged;
            EXPECT_FALSE(fc.f[k].has_value());
            EXPECT_NEAR(std::cos(grid[k]), 0.0, 1e-8);
        }
    }
    EXPECT_EQ(flagged, 2u);
}

TEST(FCriterion, CovariantTiltedBasisMaximum)
{
    const CovariantFamily family = example4_family(1.64);
    const auto grid = uniform_grid(10.0, 10000);
    const Propagator p = Propagator::from_family(grid, [&](double t) { return to_channel(family(t)); });
    const FCriterion fc = f_criterion(reduce_map(p, ProjectorBasis::from_angles(kPi / 2, kPi / 8)));
    ASSERT_TRUE(fc.max_f.has_value());
    EXPECT_NEAR(*fc.max_f, -0.005557, 2e-5);
    EXPECT_NEAR(fc.max_f_time, 0.898, 1e-2);
    EXPECT_TRUE(fc.divisible);
    EXPECT_TRUE(fc.invertible);
}

TEST(FCriterion, AgreesWithKolmogorovOnInvertibleProcesses)
{
    const auto grid = uniform_grid(1.2, 1200);
    for (double theta : {0.2, 0.5, 0.7}) {
        const StochasticProcess sp = reduce_map(unitary_dynamics(1.0, grid), tilted(theta));
        const FCriterion fc = f_criterion(sp);
        ASSERT_TRUE(fc.invertible);
        EXPECT_EQ(fc.divisible, kolmogorov_check(classical_generator_from_T(sp)).divisible);
    }
    const Propagator p = Propagator::from_family(
        grid, [](double t) { return pauli_closed_form(Vec3(0.3, 0.2, 1.0), RatePreset::exponential, t); });
    const StochasticProcess sp = reduce_map(p, ProjectorBasis::from_angles(1.0, 2.0));
    EXPECT_TRUE(f_criterion(sp).divisible);
    EXPECT_TRUE(kolmogorov_check(classical_generator_from_T(sp)).divisible);
}

TEST(FCriterion, RejectsNonBistochasticProcesses)
{
    StochasticProcess sp{{0.0}, {Eigen::MatrixXd::Identity(2, 2)}, ProjectorBasis::computational()};
    sp.grid.push_back(1.0);
    Eigen::MatrixXd t(2, 2);
    t << 0.9, 0.3, 0.1, 0.7;
    sp.matrices.push_back(t);
    EXPECT_THROW(f_criterion(sp), std::invalid_argument);
}

TEST(Kolmogorov, Examples)
{
    Eigen::MatrixXd good(2, 2), bad(2, 2);
    good << -1, 1, 1, -1;
    bad << 1, -1, -1, 1;
    EXPECT_TRUE(kolmogorov_check({{0.0}, {good}}).divisible);
    EXPECT_FALSE(kolmogorov_check({{0.0}, {bad}}).divisible);
    Eigen::MatrixXd leaky(2, 2);
    leaky << -1, 1, 0.5, -1;
    EXPECT_FALSE(kolmogorov_check({{0.0}, {leaky}}).divisible);
}

TEST(KolmogorovDistance, Examples)
{
    EXPECT_DOUBLE_EQ(kolmogorov_distance(Eigen::Vector2d(0.5, -0.5)), 1.0);
    EXPECT_DOUBLE_EQ(kolmogorov_distance(Eigen::Vector2d::Zero()), 0.0);
}
