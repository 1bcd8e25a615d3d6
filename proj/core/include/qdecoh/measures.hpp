// Decoherence measures built on chi = rho_S - rho_C.

#pragma once

#include <functional>

#include "qdecoh/pauli.hpp"
#include "qdecoh/qubit_channel.hpp"

namespace qdecoh {

struct DeviationReport {
    QubitOperator chi;
    /// max_j |zeta_j| over the eigenvalues of chi
    double norm = 0.0;
    /// <+|chi|+>, the shift of the |+> population
    double population_deviation = 0.0;
};

/// Largest eigenvalue modulus of a Hermitian 2x2 operator.
double lambda_norm(const QubitOperator& chi);

DeviationReport deviation(const QubitOperator& rho_s, const QubitOperator& rho_c);
/// For callers that already hold chi (e.g. from a deviation channel).
DeviationReport deviation_from_chi(const QubitOperator& chi);

struct BlochPoint {
    double theta = 0.0;
    double phi = 0.0;
};

struct MaximizedMeasure {
    double value = 0.0;
    BlochPoint argmax;
};

struct MaximizeOptions {
    int theta_points = 64;   // theta_i = pi i / (theta_points - 1)
    int phi_points = 128;    // phi_j = 2 pi j / phi_points
    double angle_tol = 1e-4;
};

/// Grid search over pure states cos(theta/2)|+> + e^{i phi} sin(theta/2)|->,
/// then compass refinement that only accepts strict improvements.  Ties on
/// the grid go to the lowest (theta, phi) index.
MaximizedMeasure maximize_over_initial_states(const std::function<double(const BlochPoint&)>& measure,
                                              const MaximizeOptions& opt = {});

/// Maximizes lambda_norm(dev(rho0)) for a linear deviation map rho0 -> chi.
MaximizedMeasure maximize_over_initial_states(const QubitChannel& deviation_map, const MaximizeOptions& opt = {});

}  // namespace qdecoh
