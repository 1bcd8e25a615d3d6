#include "qdecoh/qubit_channel.hpp"

namespace qdecoh {

namespace {

Eigen::Vector4cd vec(const QubitOperator& m)
{
    return Eigen::Map<const Eigen::Vector4cd>(m.data());
}

}  // namespace

QubitChannel QubitChannel::unitary(const QubitOperator& u)
{
    QubitChannel c;
    c.add_term(1.0, u, u);
    return c;
}

void QubitChannel::add_term(cplx weight, const QubitOperator& left, const QubitOperator& right)
{
    // vec(A X B^dag) = (conj(B) kron A) vec(X)
    const QubitOperator rc = right.conjugate();
    for (int bj = 0; bj < 2; ++bj)
        for (int bi = 0; bi < 2; ++bi)
            m_.block<2, 2>(2 * bi, 2 * bj) += (weight * rc(bi, bj)) * left;
}

QubitOperator QubitChannel::apply(const QubitOperator& rho) const
{
    const Eigen::Vector4cd out = m_ * vec(rho);
    return Eigen::Map<const QubitOperator>(out.data());
}

}  // namespace qdecoh
