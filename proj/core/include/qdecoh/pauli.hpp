// Exact arithmetic for 2x2 complex operators.
//
// Everything a single qubit needs lives here: Pauli decomposition, the
// closed-form Hermitian exponential and eigen-decomposition, and square
// roots of unitaries with an explicit branch choice.  Energies and times are
// dimensionless (hbar = 1).

#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace qdecoh {

using cplx = std::complex<double>;
using QubitOperator = Eigen::Matrix2cd;
using Ket = Eigen::Vector2cd;
using RealVec3 = Eigen::Vector3d;
using CplxVec3 = Eigen::Vector3cd;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kComposedTol = 1e-10;

const QubitOperator& identity2();
const QubitOperator& sigma_x();
const QubitOperator& sigma_y();
const QubitOperator& sigma_z();
/// sigma_x, sigma_y, sigma_z for index 0, 1, 2.
const QubitOperator& sigma(int axis);

/// M = c0 * I + v . sigma
struct PauliForm {
    cplx c0{0.0, 0.0};
    CplxVec3 v{CplxVec3::Zero()};

    QubitOperator reconstruct() const;
    /// Real parts of the Pauli vector; meaningful for Hermitian sources.
    RealVec3 real_vector() const { return v.real(); }
};

PauliForm pauli_decompose(const QubitOperator& m);
QubitOperator from_pauli(cplx c0, const CplxVec3& v);
QubitOperator from_bloch(double c0, const RealVec3& v);

bool is_hermitian(const QubitOperator& m, double tol = kAlgebraTol);
bool is_unitary(const QubitOperator& m, double tol = kAlgebraTol);
/// Hermitian, unit trace, spectrum >= -eig_tol.
bool is_density(const QubitOperator& m, double tol = kAlgebraTol, double eig_tol = kComposedTol);

/// Largest entrywise modulus of a - b.
double max_abs_diff(const QubitOperator& a, const QubitOperator& b);

/// e^{-iHt} from the closed form e^{-i c0 t}[cos(|v|t) I - i sin(|v|t) v^.sigma].
/// Only the Hermitian part of H is used.
QubitOperator herm_exp(const QubitOperator& h, double t);

struct HermitianEigen {
    std::array<double, 2> values;  // descending
    std::array<Ket, 2> vectors;    // orthonormal, vectors[j] belongs to values[j]
};

/// Closed-form eigenpairs c0 +- |v|.  A degenerate input returns the
/// computational basis.
HermitianEigen herm_eigen(const QubitOperator& m);

/// Eigenket of n.sigma with eigenvalue +1 for a unit vector n.
Ket spin_up_along(const RealVec3& n);

/// Per-eigenvalue branch of a unitary square root: `true` shifts that
/// halved eigenphase by pi.  Index 0 is the eigenvector along the rotation
/// axis, index 1 the opposite one.
using SqrtBranch = std::array<bool, 2>;

inline constexpr SqrtBranch kPrincipalBranch{false, false};

/// W with W*W = U.  The principal branch halves each eigenphase taken in
/// (-pi, pi], so it lands in (-pi/2, pi/2].  A degenerate U = e^{i phi} I
/// yields e^{i phi/2} I (flips act on the computational basis).
QubitOperator unitary_sqrt(const QubitOperator& u, SqrtBranch branch = kPrincipalBranch);

/// e^z - 1 without cancellation for small |z|.
inline cplx cexpm1(cplx z)
{
    const double h = std::sin(0.5 * z.imag());
    const cplx phase_m1(-2.0 * h * h, std::sin(z.imag()));
    return std::expm1(z.real()) * (phase_m1 + 1.0) + phase_m1;
}

/// Outer product |a><b|.
inline QubitOperator outer(const Ket& a, const Ket& b) { return a * b.adjoint(); }

}  // namespace qdecoh
