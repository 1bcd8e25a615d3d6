// Second-order Magnus scheme.
//
// The interaction-picture propagator is truncated at exp(-i(Omega1 + Omega2))
// and the bath is traced out exactly at O(g^2).  Everything the bath sees of
// the qubit is the coupling vector s(t) (Pauli vector of S in the interaction
// picture), condensed into three moments:
//
//   R_ij = sum |g|^2 coth (f_i f_j + ft_i ft_j)       = int int s_i s_j C_sym
//   Q_ij = sum |g|^2 (ft_i f_j - f_i ft_j)             = int int s_i s_j C_anti
//   Yc   = sum |g|^2 coth Y,  Y = int_0^t du int_0^u dv (s(u) x s(v)) cos w(u-v)
//
// with f = int_0^t s(u) cos w(u - t) du and ft the sine counterpart.  The
// reduced state is rho = U_S sum_{x x'} e^{D_{x x'}} M_x rho0 M_x'^dag U_S^dag,
// where M_x = |x><x|y><y|z><z| runs over sign triples (x, y, z).

#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "qdecoh/bath.hpp"
#include "qdecoh/qubit_channel.hpp"
#include "qdecoh/system_models.hpp"

namespace qdecoh {

/// f(omega, t) and ft(omega, t), both in units of 1/omega.
struct SpinKernel {
    RealVec3 f = RealVec3::Zero();
    RealVec3 f_tilde = RealVec3::Zero();
};

/// Per-mode F and Y.  F = (f_y f_z + ft_y ft_z, -(f_x f_z + ft_x ft_z), f_x f_y + ft_x ft_y).
struct MagnusKernels {
    RealVec3 F = RealVec3::Zero();
    RealVec3 Y = RealVec3::Zero();
};

/// Composite Gauss-Legendre sampling of s(t) on [0, t] over equal panels.
/// With `triangle` set, s is also sampled on the Gauss rule mapped onto
/// [panel start, u_a] for every node u_a, for same-panel double integrals.
class CouplingTrack {
public:
    CouplingTrack(const IdealEvolution& ideal, const CouplingOperator& s, double t, std::size_t panels,
                  bool triangle = false);
    CouplingTrack(const GateModel& model, const CouplingOperator& s, double t, std::size_t panels);

    double horizon() const { return t_; }
    std::size_t panels() const { return panels_; }
    double panel_width() const { return h_; }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<RealVec3>& values() const { return s_; }
    /// s at panel p, outer node a, inner node b: index (p * 16 + a) * 16 + b.
    const std::vector<RealVec3>& triangle_values() const { return tri_; }

private:
    double t_;
    std::size_t panels_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<RealVec3> s_;
    std::vector<RealVec3> tri_;
};

SpinKernel spin_kernels(const CouplingTrack& track, double omega);
MagnusKernels magnus_kernels(const CouplingTrack& track, double omega);

/// Adaptive versions: the panel count grows until f, ft (and Y) change by
/// less than q.rel_tol.  Throws QuadratureFailure if that never happens.
SpinKernel spin_kernels(const GateModel& model, const CouplingOperator& s, double omega, double t,
                        const QuadratureSpec& q = {});
MagnusKernels magnus_kernels(const GateModel& model, const CouplingOperator& s, double omega, double t,
                             const QuadratureSpec& q = {});

struct BathMoments {
    Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d Q = Eigen::Matrix3d::Zero();
    RealVec3 Yc = RealVec3::Zero();
};

/// frequency_resolved integrates the per-omega kernels against the
/// spectral weight; time_domain folds s(t) against the closed-form bath
/// correlation function.  automatic picks frequency_resolved for discrete
/// modes and time_domain for the continuum.
enum class MagnusRoute { automatic, frequency_resolved, time_domain };

BathMoments bath_moments(const GateModel& model, const CouplingOperator& s, const Environment& env, double t,
                         const QuadratureSpec& q = {}, MagnusRoute route = MagnusRoute::automatic);

/// Index of the sign triple: bit 2 for x, bit 1 for y, bit 0 for z, set
/// when the sign is -1.  Index 0 is (+, +, +).
using SignTriple = std::array<int, 3>;
SignTriple chain_signs(int index);
int chain_index(const SignTriple& x);
std::string chain_label(int index);

/// M_x for all 8 triples, in index order.
const std::array<QubitOperator, 8>& projector_chain();

struct MagnusDecoherenceTable {
    Eigen::Matrix<cplx, 8, 8> D = Eigen::Matrix<cplx, 8, 8>::Zero();
    double t = 0.0;
};

MagnusDecoherenceTable decoherence_table(const BathMoments& m, double t);
MagnusDecoherenceTable magnus_decoherence_table(const GateModel& model, const CouplingOperator& s,
                                                const Environment& env, double t, const QuadratureSpec& q = {},
                                                MagnusRoute route = MagnusRoute::automatic);

/// rho -> U sum e^{D} M_x rho M_x'^dag U^dag
QubitChannel magnus_channel(const QubitOperator& u, const MagnusDecoherenceTable& d);
/// Deviation from rho -> U rho U^dag, built from e^D - 1.
QubitChannel magnus_deviation_channel(const QubitOperator& u, const MagnusDecoherenceTable& d);

struct MagnusEvolution {
    QubitOperator rho;
    /// Tr(rho) - 1 before renormalization.
    double trace_defect = 0.0;
    bool renormalized = false;
};

/// Renormalizes to unit trace when |Tr - 1| > 1e-12 and reports the defect.
MagnusEvolution evolve_magnus(const GateModel& model, const CouplingOperator& s, const Environment& env,
                              const InitialState& rho0, double t, const QuadratureSpec& q = {},
                              MagnusRoute route = MagnusRoute::automatic);

}  // namespace qdecoh
