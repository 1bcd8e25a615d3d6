// Linear maps on 2x2 operators, stored as 4x4 superoperators acting on the
// column-stacked vec(rho).

#pragma once

#include "qdecoh/pauli.hpp"

namespace qdecoh {

using SuperOperator = Eigen::Matrix4cd;

class QubitChannel {
public:
    QubitChannel() : m_(SuperOperator::Zero()) {}
    explicit QubitChannel(const SuperOperator& m) : m_(m) {}

    static QubitChannel identity() { return QubitChannel(SuperOperator::Identity()); }
    /// rho -> U rho U^dag
    static QubitChannel unitary(const QubitOperator& u);

    /// Adds weight * (rho -> left rho right^dag).
    void add_term(cplx weight, const QubitOperator& left, const QubitOperator& right);

    QubitOperator apply(const QubitOperator& rho) const;

    /// (this after other)(rho) = this(other(rho))
    QubitChannel compose(const QubitChannel& other) const { return QubitChannel(m_ * other.m_); }

    const SuperOperator& matrix() const { return m_; }

private:
    SuperOperator m_;
};

}  // namespace qdecoh
