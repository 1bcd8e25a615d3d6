#include <doctest.h>

#include <cmath>
#include <numbers>

#include <qdecoh/measures.hpp>

using namespace qdecoh;

TEST_SUITE("measures") {

TEST_CASE("lambda norm")
{
    QubitOperator d = QubitOperator::Zero();
    d(0, 0) = 0.3;
    d(1, 1) = -0.7;
    CHECK(lambda_norm(d) == doctest::Approx(0.7));
    QubitOperator off = QubitOperator::Zero();
    off(0, 1) = cplx(3e-7, -4e-7);
    off(1, 0) = std::conj(off(0, 1));
    CHECK(lambda_norm(off) == doctest::Approx(5e-7).epsilon(1e-14));
    // unitary invariance
    const QubitOperator u = herm_exp(from_bloch(0.1, RealVec3(0.3, 0.9, -0.2)), 1.3);
    CHECK(lambda_norm(u * off * u.adjoint()) == doctest::Approx(5e-7).epsilon(1e-12));
    CHECK(lambda_norm(QubitOperator::Zero()) == 0.0);
}

TEST_CASE("deviation reports")
{
    const QubitOperator a = from_bloch(0.5, RealVec3(0.1, 0.2, 0.3));
    const QubitOperator b = from_bloch(0.5, RealVec3(0.1, 0.2, 0.25));
    const DeviationReport r = deviation(a, b);
    CHECK(max_abs_diff(r.chi, a - b) == 0.0);
    CHECK(r.norm == doctest::Approx(0.05));
    CHECK(r.population_deviation == doctest::Approx(0.05));
    CHECK(deviation_from_chi(r.chi).norm == r.norm);
}

TEST_CASE("maximization over initial states")
{
    const auto f = [](const BlochPoint& p) {
        return std::cos(p.theta - 1.0) + 0.5 * std::cos(p.phi - 2.0);
    };
    const MaximizedMeasure m = maximize_over_initial_states(f);
    CHECK(m.value == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(m.argmax.theta == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(m.argmax.phi == doctest::Approx(2.0).epsilon(1e-3));

    // pure dephasing deviation: chi = (e^D - 1) rho_01 on the off-diagonal, largest on the equator
    const double decay = std::expm1(-0.01);
    SuperOperator sup = SuperOperator::Zero();
    sup(1, 1) = decay;
    sup(2, 2) = decay;
    const MaximizedMeasure e = maximize_over_initial_states(QubitChannel(sup));
    CHECK(e.value == doctest::Approx(std::abs(decay) / 2).epsilon(1e-10));
    CHECK(e.argmax.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-3));
}

}
