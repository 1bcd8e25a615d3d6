#include "qdecoh/short_time.hpp"

#include <cmath>
#include <stdexcept>

namespace qdecoh {

double DephasingKernel::operator()(double omega, double t) const
{
    const double s = std::sin(0.5 * omega * t);
    return 2.0 * s * s / (omega * omega) * thermal_factor(omega, kT);
}

double LambShiftKernel::operator()(double omega, double t) const
{
    const double x = omega * t;
    if (x < 0.1) {
        // -(x^3/6 - x^5/120 + x^7/5040 - x^9/362880 + x^11/39916800) / omega^2
        const double x2 = x * x;
        const double series =
            x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 5040.0 - x2 * (1.0 / 362880.0 - x2 / 39916800.0))));
        return -series / (omega * omega);
    }
    return (std::sin(x) - x) / (omega * omega);
}

cplx short_time_decoherence(const Environment& env, double lambda, double lambda_p, double t,
                            const QuadratureSpec& q)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    const double dl = lambda - lambda_p;
    const double dl2 = lambda * lambda - lambda_p * lambda_p;
    double re = 0.0;
    double im = 0.0;
    if (dl != 0.0 && t > 0.0) re = -dl * dl * integrate_over(env, DephasingKernel{temperature(env)}, t, q);
    if (dl2 != 0.0 && t > 0.0) im = -dl2 * integrate_over(env, LambShiftKernel{}, t, q);
    return {re, im};
}

ShortTimeDecoherence short_time_table(const CouplingOperator& s, const Environment& env, double t,
                                      const QuadratureSpec& q)
{
    ShortTimeDecoherence d;
    d.t = t;
    const auto& l = s.eigenvalues();
    d.D[0][1] = short_time_decoherence(env, l[0], l[1], t, q);
    d.D[1][0] = std::conj(d.D[0][1]);
    return d;
}

namespace {

QubitChannel assemble(const QubitOperator& u, const CouplingOperator& s, const ShortTimeDecoherence& d,
                      SqrtBranch branch, bool deviation_only)
{
    const QubitOperator w = unitary_sqrt(u, branch);
    std::array<QubitOperator, 2> left;
    for (int j = 0; j < 2; ++j) left[static_cast<std::size_t>(j)] = w * s.projector(j) * w;
    QubitChannel ch;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (deviation_only && i == j) continue;
            const cplx weight = deviation_only ? cexpm1(d(i, j)) : std::exp(d(i, j));
            ch.add_term(weight, left[static_cast<std::size_t>(i)], left[static_cast<std::size_t>(j)]);
        }
    return ch;
}

}  // namespace

QubitChannel short_time_channel(const QubitOperator& u, const CouplingOperator& s, const ShortTimeDecoherence& d,
                                SqrtBranch branch)
{
    return assemble(u, s, d, branch, false);
}

QubitChannel short_time_deviation_channel(const QubitOperator& u, const CouplingOperator& s,
                                          const ShortTimeDecoherence& d, SqrtBranch branch)
{
    return assemble(u, s, d, branch, true);
}

QubitOperator evolve_short_time(const GateModel& model, const CouplingOperator& s, const Environment& env,
                                const InitialState& rho0, double t, SqrtBranch branch, const QuadratureSpec& q)
{
    const QubitOperator u = ideal_propagator(model, t);
    const ShortTimeDecoherence d = short_time_table(s, env, t, q);
    QubitOperator rho = short_time_channel(u, s, d, branch).apply(rho0.density());
    return 0.5 * (rho + rho.adjoint());
}

}  // namespace qdecoh
