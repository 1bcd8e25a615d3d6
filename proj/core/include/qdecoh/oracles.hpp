// Independent reference solutions.
//
// adiabatic_exact: the pure-dephasing (independent-boson) model in closed
// form.  few_mode_exact: brute-force propagation of the qubit plus a handful
// of truncated oscillators.

#pragma once

#include <stdexcept>
#include <vector>

#include "qdecoh/bath.hpp"
#include "qdecoh/system_models.hpp"

namespace qdecoh {

/// int_0^inf omega^p e^{-u omega} (1 - cos t omega) d omega, for p > -3.
double dephasing_integral(double p, double u, double t);

/// Exact Re D_{+-} / (l+ - l-)^2 = -sum |g|^2 coth (1 - cos wt)/w^2: closed
/// forms for the continuum (image sum over Matsubara-like shifts at kT > 0)
/// and for discrete modes.
double exact_dephasing_exponent(const Environment& env, double t);

/// Requires H_S to commute with S; throws std::invalid_argument otherwise.
QubitOperator adiabatic_exact(const Environment& env, const GateModel& model, const CouplingOperator& s,
                              const InitialState& rho0, double t);

struct DiscreteBath {
    std::vector<BathMode> modes;
    int fock_cutoff = 8;
    double kT = 0.0;

    /// Throws std::invalid_argument on bad modes or a product-space
    /// dimension 2 (cutoff + 1)^K above 65536.
    void validate() const;
    std::size_t bath_dimension() const;
};

struct FewModeOptions {
    /// h (max bath frequency + drive frequency + |H_I|) <= step_factor
    double step_factor = 0.05;
    /// halving the step may change rho_S by at most this much
    double convergence_tol = 1e-8;
    bool check_convergence = true;
};

struct FewModeResult {
    QubitOperator rho;        // rho_S(t)
    QubitOperator deviation;  // rho_S(t) - U_S rho0 U_S^dag, accumulated without cancellation
    double norm_defect = 0.0; // max | |psi(t)|^2 - 1 | over the pure components
    std::size_t steps = 0;
};

class ConvergenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thermal bath states enter as a mixture over number states with
/// probability >= 1e-12 (weights renormalized after truncation); a mixed
/// rho0 is split into its eigenstates.  Throws ConvergenceFailure when
/// step halving changes the result by more than convergence_tol.
FewModeResult few_mode_exact(const DiscreteBath& bath, const GateModel& model, const CouplingOperator& s,
                             const InitialState& rho0, double t, const FewModeOptions& opt = {});

}  // namespace qdecoh
