#include "qdecoh/measures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdecoh {

double lambda_norm(const QubitOperator& chi)
{
    // eigenvalues c0 +- |v|
    const PauliForm p = pauli_decompose(0.5 * (chi + chi.adjoint()));
    return std::abs(p.c0.real()) + p.v.real().norm();
}

DeviationReport deviation_from_chi(const QubitOperator& chi)
{
    DeviationReport r;
    r.chi = chi;
    r.norm = lambda_norm(chi);
    r.population_deviation = chi(0, 0).real();
    return r;
}

DeviationReport deviation(const QubitOperator& rho_s, const QubitOperator& rho_c)
{
    return deviation_from_chi(rho_s - rho_c);
}

namespace {

QubitOperator pure_density(const BlochPoint& b)
{
    Ket k;
    k << std::cos(0.5 * b.theta), std::polar(std::sin(0.5 * b.theta), b.phi);
    return outer(k, k);
}

}  // namespace

MaximizedMeasure maximize_over_initial_states(const std::function<double(const BlochPoint&)>& measure,
                                              const MaximizeOptions& opt)
{
    if (opt.theta_points < 2 || opt.phi_points < 1 || !(opt.angle_tol > 0.0))
        throw std::invalid_argument("invalid Bloch grid");
    constexpr double pi = std::numbers::pi;
    const double dtheta = pi / (opt.theta_points - 1);
    const double dphi = 2.0 * pi / opt.phi_points;

    MaximizedMeasure best;
    best.value = -1.0;
    for (int i = 0; i < opt.theta_points; ++i)
        for (int j = 0; j < opt.phi_points; ++j) {
            const BlochPoint b{dtheta * i, dphi * j};
            const double v = measure(b);
            if (v > best.value) best = {v, b};
        }

    double step_theta = dtheta;
    double step_phi = dphi;
    while (step_theta > opt.angle_tol || step_phi > opt.angle_tol) {
        bool moved = false;
        const BlochPoint at = best.argmax;
        const BlochPoint trial[] = {{at.theta + step_theta, at.phi}, {at.theta - step_theta, at.phi},
                                    {at.theta, at.phi + step_phi},   {at.theta, at.phi - step_phi}};
        for (const BlochPoint& b : trial) {
            if (b.theta < 0.0 || b.theta > pi) continue;
            const double v = measure(b);
            if (v > best.value) {
                best = {v, b};
                moved = true;
            }
        }
        if (!moved) {
            step_theta *= 0.5;
            step_phi *= 0.5;
        }
    }
    best.argmax.phi = std::remainder(best.argmax.phi - pi, 2.0 * pi) + pi;
    return best;
}

MaximizedMeasure maximize_over_initial_states(const QubitChannel& deviation_map, const MaximizeOptions& opt)
{
    return maximize_over_initial_states(
        [&](const BlochPoint& b) { return lambda_norm(deviation_map.apply(pure_density(b))); }, opt);
}

}  // namespace qdecoh
