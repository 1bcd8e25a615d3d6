#include "qdecoh/pauli.hpp"

#include <cmath>

namespace qdecoh {

namespace {

constexpr cplx kI{0.0, 1.0};

QubitOperator make(cplx a, cplx b, cplx c, cplx d)
{
    QubitOperator m;
    m << a, b, c, d;
    return m;
}

}  // namespace

const QubitOperator& identity2()
{
    static const QubitOperator m = QubitOperator::Identity();
    return m;
}

const QubitOperator& sigma_x()
{
    static const QubitOperator m = make(0.0, 1.0, 1.0, 0.0);
    return m;
}

const QubitOperator& sigma_y()
{
    static const QubitOperator m = make(0.0, -kI, kI, 0.0);
    return m;
}

const QubitOperator& sigma_z()
{
    static const QubitOperator m = make(1.0, 0.0, 0.0, -1.0);
    return m;
}

const QubitOperator& sigma(int axis)
{
    switch (axis) {
        case 0: return sigma_x();
        case 1: return sigma_y();
        default: return sigma_z();
    }
}

QubitOperator PauliForm::reconstruct() const { return from_pauli(c0, v); }

PauliForm pauli_decompose(const QubitOperator& m)
{
    // Tr[M sigma_j]/2 written out entrywise.
    PauliForm p;
    p.c0 = 0.5 * (m(0, 0) + m(1, 1));
    p.v(0) = 0.5 * (m(0, 1) + m(1, 0));
    p.v(1) = 0.5 * kI * (m(0, 1) - m(1, 0));
    p.v(2) = 0.5 * (m(0, 0) - m(1, 1));
    return p;
}

QubitOperator from_pauli(cplx c0, const CplxVec3& v)
{
    return make(c0 + v(2), v(0) - kI * v(1), v(0) + kI * v(1), c0 - v(2));
}

QubitOperator from_bloch(double c0, const RealVec3& v)
{
    return from_pauli(c0, v.cast<cplx>());
}

bool is_hermitian(const QubitOperator& m, double tol)
{
    return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_unitary(const QubitOperator& m, double tol)
{
    return max_abs_diff(m.adjoint() * m, identity2()) <= tol;
}

bool is_density(const QubitOperator& m, double tol, double eig_tol)
{
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace() - 1.0) > tol) return false;
    return herm_eigen(m).values[1] >= -eig_tol;
}

double max_abs_diff(const QubitOperator& a, const QubitOperator& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

QubitOperator herm_exp(const QubitOperator& h, double t)
{
    const PauliForm p = pauli_decompose(h);
    const double c0 = p.c0.real();
    const RealVec3 v = p.v.real();
    const double r = v.norm();
    const cplx phase = std::exp(-kI * (c0 * t));
    if (r == 0.0) return phase * identity2();
    const RealVec3 n = v / r;
    const double c = std::cos(r * t);
    const double s = std::sin(r * t);
    return phase * from_pauli(c, (-kI * s) * n.cast<cplx>());
}

Ket spin_up_along(const RealVec3& n)
{
    Ket k;
    if (n(2) >= 0.0) {
        k << 1.0 + n(2), cplx(n(0), n(1));
        return k / std::sqrt(2.0 * (1.0 + n(2)));
    }
    k << cplx(n(0), -n(1)), 1.0 - n(2);
    return k / std::sqrt(2.0 * (1.0 - n(2)));
}

HermitianEigen herm_eigen(const QubitOperator& m)
{
    const PauliForm p = pauli_decompose(m);
    const double c0 = p.c0.real();
    const RealVec3 v = p.v.real();
    const double r = v.norm();
    HermitianEigen e;
    e.values = {c0 + r, c0 - r};
    if (r == 0.0) {
        e.vectors = {Ket(1.0, 0.0), Ket(0.0, 1.0)};
        return e;
    }
    const RealVec3 n = v / r;
    e.vectors = {spin_up_along(n), spin_up_along(-n)};
    return e;
}

QubitOperator unitary_sqrt(const QubitOperator& u, SqrtBranch branch)
{
    const PauliForm p = pauli_decompose(u);
    const double scale = std::max(1.0, std::abs(p.c0));
    const auto sign = [&](int j) { return branch[static_cast<std::size_t>(j)] ? -1.0 : 1.0; };

    Eigen::Index k = 0;
    const double vmax = p.v.cwiseAbs().maxCoeff(&k);
    if (vmax <= 1e-15 * scale) {
        const cplx root = std::exp(0.5 * kI * std::arg(p.c0));
        QubitOperator w = QubitOperator::Zero();
        w(0, 0) = root * sign(0);
        w(1, 1) = root * sign(1);
        return w;
    }

    // For a unitary the Pauli vector is a complex multiple of a real axis.
    const cplx unit = p.v(k) / std::abs(p.v(k));
    RealVec3 n = (p.v / unit).real();
    n.normalize();

    const std::array<Ket, 2> kets{spin_up_along(n), spin_up_along(-n)};
    QubitOperator w = QubitOperator::Zero();
    for (int j = 0; j < 2; ++j) {
        const Ket& e = kets[static_cast<std::size_t>(j)];
        const cplx lambda = e.dot(u * e);
        const double half_phase = 0.5 * std::arg(lambda);
        w += sign(j) * std::exp(kI * half_phase) * outer(e, e);
    }
    return w;
}

}  // namespace qdecoh
