// Gate models for the driven qubit, its ideal (noiseless) propagator, the
// interaction-picture coupling vector and ideal density evolution.

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "qdecoh/pauli.hpp"

namespace qdecoh {

/// H_S = a sigma_z
struct Adiabatic {
    double a;
};

/// H_S(t) = a sigma_z + c (sigma_x cos 2at + sigma_y sin 2at)
struct RotatingWave {
    double a;
    double c;
};

/// Arbitrary drive sampled on demand, propagated with midpoint steps.
struct CustomDrive {
    std::function<QubitOperator(double)> hamiltonian;
    double step;
};

class GateModel {
public:
    using Variant = std::variant<Adiabatic, RotatingWave, CustomDrive>;

    static GateModel adiabatic(double a);
    static GateModel rotating_wave(double a, double c);
    static GateModel custom(std::function<QubitOperator(double)> hamiltonian, double step);

    QubitOperator hamiltonian(double t) const;

    /// Upper bound on the angular frequencies present in the interaction-
    /// picture coupling s(t) up to `horizon`.
    double drive_frequency(double horizon) const;

    /// True when H_S(t) commutes with `s` (checked at sample times for custom drives).
    bool commutes_with(const QubitOperator& s, double horizon) const;

    const Variant& variant() const { return v_; }

private:
    explicit GateModel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

enum class Axis { x = 0, y = 1, z = 2 };

/// System part S of H_SB = S sum_k X_k.  Hermitian and traceless.
class CouplingOperator {
public:
    explicit CouplingOperator(const QubitOperator& s);
    static CouplingOperator along(Axis axis);

    const QubitOperator& matrix() const { return s_; }
    /// lambda_+ > lambda_- = -lambda_+
    const std::array<double, 2>& eigenvalues() const { return eig_.values; }
    const std::array<Ket, 2>& eigenvectors() const { return eig_.vectors; }
    QubitOperator projector(int j) const;
    RealVec3 pauli_vector() const { return pauli_decompose(s_).real_vector(); }

private:
    QubitOperator s_;
    HermitianEigen eig_;
};

/// Initial qubit state rho_S(0).
class InitialState {
public:
    static InitialState from_density(const QubitOperator& rho);
    /// cos(theta/2)|+> + e^{i phi} sin(theta/2)|->
    static InitialState pure(double theta, double phi);

    const QubitOperator& density() const { return rho_; }

private:
    explicit InitialState(const QubitOperator& rho) : rho_(rho) {}
    QubitOperator rho_;
};

/// U_S(t).  Adiabatic and rotating-wave models use the closed forms
/// e^{-iat sz} and e^{-iat sz} e^{-ict sx}; custom drives use the ordered
/// product of midpoint exponentials.  Throws std::invalid_argument for t < 0.
QubitOperator ideal_propagator(const GateModel& model, double t);

/// Pauli vector of U_S^dag(t) S U_S(t).
RealVec3 interaction_coupling_vector(const GateModel& model, const CouplingOperator& s, double t);

/// rho_C(t) = U_S rho0 U_S^dag
QubitOperator ideal_density(const GateModel& model, const InitialState& rho0, double t);

/// Ideal dynamics over [0, horizon] with checkpointed propagators, so that
/// custom drives are not re-stepped from zero at every query.
class IdealEvolution {
public:
    IdealEvolution(GateModel model, double horizon);

    QubitOperator propagator(double t) const;
    RealVec3 coupling_vector(const CouplingOperator& s, double t) const;
    const GateModel& model() const { return model_; }

private:
    GateModel model_;
    double step_ = 0.0;
    std::vector<QubitOperator> checkpoints_;  // U at multiples of step_
};

}  // namespace qdecoh
