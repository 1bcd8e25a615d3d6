// Short-time factorization of the qubit + bath propagator,
//     U_T(t) ~ W e^{-i(H_B + H_SB) t} W,   W = sqrt(U_S(t)),
// exact through second order in t.  Tracing out the thermal bath leaves
// one complex decoherence function per ordered pair of S eigenvalues.

#pragma once

#include <array>

#include "qdecoh/bath.hpp"
#include "qdecoh/qubit_channel.hpp"
#include "qdecoh/system_models.hpp"

namespace qdecoh {

/// 2 sin^2(omega t / 2) / omega^2 coth(omega / 2kT)
struct DephasingKernel {
    double kT = 0.0;
    double operator()(double omega, double t) const;
};

/// (sin omega t - omega t) / omega^2, series below omega t = 0.1.
struct LambShiftKernel {
    double operator()(double omega, double t) const;
    double at_zero(double) const { return 0.0; }
};

/// D_{l l'}(t) = -(l - l')^2 sum |g|^2 2 sin^2(wt/2)/w^2 coth(w/2kT)
///             - i (l^2 - l'^2) sum |g|^2 (sin wt - wt)/w^2
/// Throws std::invalid_argument for t < 0; propagates QuadratureFailure.
cplx short_time_decoherence(const Environment& env, double lambda, double lambda_p, double t,
                            const QuadratureSpec& q = {});

/// D indexed ((l+, l+), (l+, l-), (l-, l+), (l-, l-)) with l+ > l-.
struct ShortTimeDecoherence {
    std::array<std::array<cplx, 2>, 2> D{};
    double t = 0.0;

    cplx operator()(int i, int j) const { return D[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

ShortTimeDecoherence short_time_table(const CouplingOperator& s, const Environment& env, double t,
                                      const QuadratureSpec& q = {});

/// rho -> sum_{l l'} e^{D_{l l'}} W P_l W rho W^dag P_l' W^dag  for U = ideal propagator.
QubitChannel short_time_channel(const QubitOperator& u, const CouplingOperator& s, const ShortTimeDecoherence& d,
                                SqrtBranch branch = kPrincipalBranch);

/// Same map, but only its deviation from rho -> U rho U^dag (built from
/// e^D - 1, so tiny couplings keep full relative precision).
QubitChannel short_time_deviation_channel(const QubitOperator& u, const CouplingOperator& s,
                                          const ShortTimeDecoherence& d, SqrtBranch branch = kPrincipalBranch);

QubitOperator evolve_short_time(const GateModel& model, const CouplingOperator& s, const Environment& env,
                                const InitialState& rho0, double t, SqrtBranch branch = kPrincipalBranch,
                                const QuadratureSpec& q = {});

}  // namespace qdecoh
