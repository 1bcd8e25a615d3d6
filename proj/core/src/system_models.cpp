#include "qdecoh/system_models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdecoh {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_time(double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0, got " + std::to_string(t));
}

QubitOperator step_custom(const CustomDrive& d, const QubitOperator& u, double from, double dt)
{
    return herm_exp(d.hamiltonian(from + 0.5 * dt), dt) * u;
}

QubitOperator custom_propagator(const CustomDrive& d, double t)
{
    QubitOperator u = identity2();
    const auto full = static_cast<long>(std::floor(t / d.step));
    for (long k = 0; k < full; ++k) u = step_custom(d, u, static_cast<double>(k) * d.step, d.step);
    const double done = static_cast<double>(full) * d.step;
    if (t - done > 0.0) u = step_custom(d, u, done, t - done);
    return u;
}

}  // namespace

GateModel GateModel::adiabatic(double a)
{
    if (!(a > 0.0)) throw std::invalid_argument("adiabatic model needs a > 0");
    return GateModel(Adiabatic{a});
}

GateModel GateModel::rotating_wave(double a, double c)
{
    if (!(a > 0.0)) throw std::invalid_argument("rotating-wave model needs a > 0");
    if (!(c >= 0.0)) throw std::invalid_argument("rotating-wave model needs c >= 0");
    return GateModel(RotatingWave{a, c});
}

GateModel GateModel::custom(std::function<QubitOperator(double)> hamiltonian, double step)
{
    if (!hamiltonian) throw std::invalid_argument("custom drive needs a sampler");
    if (!(step > 0.0)) throw std::invalid_argument("custom drive needs step > 0");
    return GateModel(CustomDrive{std::move(hamiltonian), step});
}

QubitOperator GateModel::hamiltonian(double t) const
{
    return std::visit(
        Overloaded{
            [](const Adiabatic& m) -> QubitOperator { return m.a * sigma_z(); },
            [t](const RotatingWave& m) -> QubitOperator {
                const double ph = 2.0 * m.a * t;
                return m.a * sigma_z() + m.c * (std::cos(ph) * sigma_x() + std::sin(ph) * sigma_y());
            },
            [t](const CustomDrive& m) -> QubitOperator { return m.hamiltonian(t); },
        },
        v_);
}

double GateModel::drive_frequency(double horizon) const
{
    return std::visit(
        Overloaded{
            [](const Adiabatic& m) { return 2.0 * m.a; },
            [](const RotatingWave& m) { return 2.0 * (m.a + m.c); },
            [horizon](const CustomDrive& m) {
                const long samples = std::clamp(static_cast<long>(horizon / m.step), 16L, 10000L);
                double top = 0.0;
                for (long k = 0; k <= samples; ++k) {
                    const double t = horizon * static_cast<double>(k) / static_cast<double>(samples);
                    top = std::max(top, pauli_decompose(m.hamiltonian(t)).real_vector().norm());
                }
                return 2.0 * top;
            },
        },
        v_);
}

bool GateModel::commutes_with(const QubitOperator& s, double horizon) const
{
    constexpr int kSamples = 64;
    for (int k = 0; k <= kSamples; ++k) {
        const double t = horizon * k / kSamples;
        const QubitOperator h = hamiltonian(t);
        if ((h * s - s * h).cwiseAbs().maxCoeff() > kAlgebraTol * std::max(1.0, h.norm())) return false;
    }
    return true;
}

CouplingOperator::CouplingOperator(const QubitOperator& s) : s_(s)
{
    if (!is_hermitian(s)) throw std::invalid_argument("coupling operator must be Hermitian");
    if (std::abs(s.trace()) > kAlgebraTol) throw std::invalid_argument("coupling operator must be traceless");
    if (s.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("coupling operator must be nonzero");
    eig_ = herm_eigen(s);
}

CouplingOperator CouplingOperator::along(Axis axis) { return CouplingOperator(sigma(static_cast<int>(axis))); }

QubitOperator CouplingOperator::projector(int j) const
{
    const Ket& e = eig_.vectors[static_cast<std::size_t>(j)];
    return outer(e, e);
}

InitialState InitialState::from_density(const QubitOperator& rho)
{
    if (!is_density(rho)) throw std::invalid_argument("initial state is not a density matrix");
    return InitialState(rho);
}

InitialState InitialState::pure(double theta, double phi)
{
    Ket k;
    k << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
    return InitialState(outer(k, k));
}

QubitOperator ideal_propagator(const GateModel& model, double t)
{
    require_time(t);
    return std::visit(
        Overloaded{
            [t](const Adiabatic& m) -> QubitOperator { return herm_exp(m.a * sigma_z(), t); },
            [t](const RotatingWave& m) -> QubitOperator {
                return herm_exp(m.a * sigma_z(), t) * herm_exp(m.c * sigma_x(), t);
            },
            [t](const CustomDrive& m) -> QubitOperator { return custom_propagator(m, t); },
        },
        model.variant());
}

RealVec3 interaction_coupling_vector(const GateModel& model, const CouplingOperator& s, double t)
{
    const QubitOperator u = ideal_propagator(model, t);
    return pauli_decompose(u.adjoint() * s.matrix() * u).real_vector();
}

QubitOperator ideal_density(const GateModel& model, const InitialState& rho0, double t)
{
    const QubitOperator u = ideal_propagator(model, t);
    return u * rho0.density() * u.adjoint();
}

IdealEvolution::IdealEvolution(GateModel model, double horizon) : model_(std::move(model))
{
    require_time(horizon);
    if (const auto* d = std::get_if<CustomDrive>(&model_.variant())) {
        step_ = d->step;
        const auto count = static_cast<std::size_t>(std::floor(horizon / step_)) + 1;
        checkpoints_.reserve(count + 1);
        checkpoints_.push_back(identity2());
        for (std::size_t k = 1; k <= count; ++k)
            checkpoints_.push_back(step_custom(*d, checkpoints_.back(), static_cast<double>(k - 1) * step_, step_));
    }
}

QubitOperator IdealEvolution::propagator(double t) const
{
    const auto* d = std::get_if<CustomDrive>(&model_.variant());
    if (d == nullptr || checkpoints_.empty()) return ideal_propagator(model_, t);
    require_time(t);
    auto k = static_cast<std::size_t>(std::floor(t / step_));
    if (k >= checkpoints_.size()) return ideal_propagator(model_, t);
    const double done = static_cast<double>(k) * step_;
    if (t - done <= 0.0) return checkpoints_[k];
    return step_custom(*d, checkpoints_[k], done, t - done);
}

RealVec3 IdealEvolution::coupling_vector(const CouplingOperator& s, double t) const
{
    const QubitOperator u = propagator(t);
    return pauli_decompose(u.adjoint() * s.matrix() * u).real_vector();
}

}  // namespace qdecoh
