#include <doctest.h>

#include <cmath>

#include <qdecoh/magnus.hpp>
#include <qdecoh/oracles.hpp>

using namespace qdecoh;

namespace {

// f and ft from their definitions by adaptive quadrature
SpinKernel spin_by_quadrature(const GateModel& m, const CouplingOperator& s, double w, double t)
{
    const VectorIntegrand g = [&](double u, std::span<double> out) {
        const RealVec3 v = interaction_coupling_vector(m, s, u);
        for (int i = 0; i < 3; ++i) {
            out[static_cast<std::size_t>(i)] = v(i) * std::cos(w * (u - t));
            out[static_cast<std::size_t>(i + 3)] = v(i) * std::sin(w * (u - t));
        }
    };
    const AdaptiveResult r = adaptive_gauss_kronrod(g, 6, 0.0, t, 0.05, 1e-13, 1e-300, 100000);
    SpinKernel k;
    for (int i = 0; i < 3; ++i) {
        k.f(i) = r.value[static_cast<std::size_t>(i)];
        k.f_tilde(i) = r.value[static_cast<std::size_t>(i + 3)];
    }
    return k;
}

}  // namespace

TEST_SUITE("magnus") {

TEST_CASE("spin kernels")
{
    // s = z fixed: f_z = sin(wt)/w, ft_z = (cos(wt) - 1)/w
    const GateModel ad = GateModel::adiabatic(1.0);
    const CouplingOperator sz = CouplingOperator::along(Axis::z);
    const double w = 2.3, t = 1.4;
    const SpinKernel k = spin_kernels(ad, sz, w, t);
    CHECK(k.f.z() == doctest::Approx(std::sin(w * t) / w).epsilon(1e-12));
    CHECK(k.f_tilde.z() == doctest::Approx((std::cos(w * t) - 1.0) / w).epsilon(1e-12));
    CHECK(k.f.head<2>().norm() == 0.0);

    const GateModel rw = GateModel::rotating_wave(1.0, 4.0);
    for (const Axis ax : {Axis::x, Axis::y, Axis::z}) {
        const CouplingOperator s = CouplingOperator::along(ax);
        const SpinKernel a = spin_kernels(rw, s, w, 2.5);
        const SpinKernel b = spin_by_quadrature(rw, s, w, 2.5);
        CHECK((a.f - b.f).norm() < 1e-10);
        CHECK((a.f_tilde - b.f_tilde).norm() < 1e-10);
    }
}

TEST_CASE("Y kernel vanishes for a fixed coupling direction")
{
    const MagnusKernels k = magnus_kernels(GateModel::adiabatic(1.0), CouplingOperator::along(Axis::z), 1.7, 2.0);
    CHECK(k.Y.norm() < 1e-14);
    CHECK(k.F.norm() < 1e-14);
}

TEST_CASE("evaluation routes agree")
{
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    for (const auto& [m, env, t] :
         {std::tuple{GateModel::rotating_wave(1.0, 1.0), Environment{BathSpectrum{1e-4, 1.0, 30.0, 0.0}}, 1.0},
          std::tuple{GateModel::rotating_wave(1.0, 15.0), Environment{BathSpectrum{1e-4, 2.0, 30.0, 0.5}}, 0.7},
          std::tuple{GateModel::rotating_wave(0.8, 2.0), Environment{DiscreteModes{{{0.7, 1e-3}, {1.6, 1e-3}}, 0.3}},
                     2.0}}) {
        const BathMoments a = bath_moments(m, s, env, t, {}, MagnusRoute::frequency_resolved);
        const BathMoments b = bath_moments(m, s, env, t, {}, MagnusRoute::time_domain);
        const double scale = a.R.cwiseAbs().maxCoeff();
        CHECK((a.R - b.R).cwiseAbs().maxCoeff() < 1e-8 * scale);
        CHECK((a.Q - b.Q).cwiseAbs().maxCoeff() < 1e-8 * scale);
        CHECK((a.Yc - b.Yc).cwiseAbs().maxCoeff() < 1e-8 * scale);
        CHECK((a.R - a.R.transpose()).cwiseAbs().maxCoeff() < 1e-14 * scale);
    }
}

TEST_CASE("projector chain")
{
    const auto& chain = projector_chain();
    QubitOperator sum = QubitOperator::Zero();
    QubitOperator plain = QubitOperator::Zero();
    for (int i = 0; i < 8; ++i) {
        CHECK(chain_index(chain_signs(i)) == i);
        sum += chain[static_cast<std::size_t>(i)].adjoint() * chain[static_cast<std::size_t>(i)];
        plain += chain[static_cast<std::size_t>(i)];
    }
    CHECK(max_abs_diff(sum, identity2()) < 1e-15);
    CHECK(max_abs_diff(plain, identity2()) < 1e-15);
    CHECK(chain_signs(0) == SignTriple{1, 1, 1});
    CHECK(chain_signs(5) == SignTriple{-1, 1, -1});
    CHECK(chain_label(5) == "-+-");
    const Ket x = spin_up_along(RealVec3(1, 0, 0)), y = spin_up_along(RealVec3(0, 1, 0)),
              z = spin_up_along(RealVec3(0, 0, 1));
    CHECK(max_abs_diff(chain[0], outer(x, x) * outer(y, y) * outer(z, z)) < 1e-15);
}

TEST_CASE("decoherence table structure")
{
    const MagnusDecoherenceTable d = magnus_decoherence_table(
        GateModel::rotating_wave(1.0, 3.0), CouplingOperator::along(Axis::x), BathSpectrum{1e-4, 1.0, 30.0, 0.4}, 1.5);
    for (int i = 0; i < 8; ++i) {
        CHECK(d.D(i, i) == cplx{});
        for (int j = 0; j < 8; ++j) {
            CHECK(std::abs(d.D(j, i) - std::conj(d.D(i, j))) < 1e-18);
            CHECK(d.D(i, j).real() <= 0.0);
        }
    }
}

TEST_CASE("channels")
{
    const GateModel m = GateModel::rotating_wave(1.0, 1.0);
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    const InitialState rho0 = InitialState::pure(0.9, 0.3);
    const QubitOperator u = ideal_propagator(m, 1.2);
    const MagnusDecoherenceTable none = magnus_decoherence_table(m, s, BathSpectrum{0.0, 1, 30, 0}, 1.2);
    CHECK(max_abs_diff(magnus_channel(u, none).apply(rho0.density()), ideal_density(m, rho0, 1.2)) < 1e-15);

    const MagnusDecoherenceTable d = magnus_decoherence_table(m, s, BathSpectrum{1e-3, 1, 30, 0}, 1.2);
    const QubitOperator full = magnus_channel(u, d).apply(rho0.density());
    const QubitOperator dev = magnus_deviation_channel(u, d).apply(rho0.density());
    CHECK(max_abs_diff(full - ideal_density(m, rho0, 1.2), dev) < 1e-15);

    const MagnusEvolution e = evolve_magnus(m, s, BathSpectrum{1e-3, 1, 30, 0}, rho0, 1.2);
    CHECK(is_density(e.rho));
    CHECK(std::abs(e.trace_defect) < 1e-12);
}

TEST_CASE("exact for the pure-dephasing model")
{
    const GateModel m = GateModel::adiabatic(0.6);
    const CouplingOperator s = CouplingOperator::along(Axis::z);
    const InitialState rho0 = InitialState::pure(1.3, 0.2);
    for (const Environment& env :
         {Environment{BathSpectrum{1e-3, 1.0, 30.0, 0.0}}, Environment{BathSpectrum{1e-3, 3.0, 10.0, 0.8}}})
        CHECK(max_abs_diff(evolve_magnus(m, s, env, rho0, 2.0).rho, adiabatic_exact(env, m, s, rho0, 2.0)) < 1e-11);
}

TEST_CASE("second-order accuracy against the few-mode oracle")
{
    DiscreteBath bath;
    bath.modes = {{0.7, 1e-6}, {1.0, 1e-6}, {1.6, 1e-6}};
    bath.fock_cutoff = 3;
    const GateModel m = GateModel::rotating_wave(1.0, 1.0);
    const CouplingOperator s = CouplingOperator::along(Axis::x);
    const InitialState rho0 = InitialState::pure(1.1, 0.4);
    FewModeOptions opt;
    opt.step_factor = 0.01;
    const FewModeResult ex = few_mode_exact(bath, m, s, rho0, 0.8, opt);
    const QubitOperator chi = magnus_deviation_channel(ideal_propagator(m, 0.8),
                                                       magnus_decoherence_table(m, s, DiscreteModes{bath.modes, 0.0}, 0.8))
                                  .apply(rho0.density());
    const double size = ex.deviation.cwiseAbs().maxCoeff();
    CHECK(size > 1e-7);
    CHECK((chi - ex.deviation).cwiseAbs().maxCoeff() < 1e-4 * size);
}

}
