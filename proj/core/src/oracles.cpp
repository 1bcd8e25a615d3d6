#include "qdecoh/oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace qdecoh {

double dephasing_integral(double p, double u, double t)
{
    if (!(p > -3.0)) throw std::invalid_argument("dephasing_integral needs p > -3");
    if (!(u > 0.0)) throw std::invalid_argument("dephasing_integral needs u > 0");
    if (t == 0.0) return 0.0;
    const double r = t / u;
    if (p == -1.0) return 0.5 * std::log1p(r * r);
    if (p == -2.0) return t * std::atan(r) - 0.5 * u * std::log1p(r * r);
    // Gamma(p+1) [u^{-(p+1)} - Re (u - i t)^{-(p+1)}], continued analytically below p = -1
    const double q = p + 1.0;
    const std::complex<double> z(1.0, -r);
    const double ratio = 1.0 - std::pow(z, -q).real();
    return std::tgamma(q) * std::pow(u, -q) * ratio;
}

double exact_dephasing_exponent(const Environment& env, double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    if (const auto* d = std::get_if<DiscreteModes>(&env)) {
        d->validate();
        double acc = 0.0;
        for (const BathMode& m : d->modes)
            acc += m.coupling_sq * thermal_factor(m.omega, d->kT) * (1.0 - std::cos(m.omega * t)) / (m.omega * m.omega);
        return -acc;
    }
    const BathSpectrum& b = std::get<BathSpectrum>(env);
    b.validate();
    if (b.J == 0.0 || t == 0.0) return 0.0;
    const double p = b.n - 2.0;
    const double s = 1.0 / b.omega_c;
    double acc = dephasing_integral(p, s, t);
    if (b.kT > 0.0) {
        // coth(w/2kT) = 1 + 2 sum_{m>=1} e^{-m w / kT}
        constexpr int kImages = 20000;
        const double beta = 1.0 / b.kT;
        double images = 0.0;
        for (int m = kImages; m >= 1; --m) images += dephasing_integral(p, s + m * beta, t);
        // midpoint tail: sum_{m > M} G(s + m beta) ~ (1/beta) int_{s+(M+1/2)beta}^inf G = G_{p-1}/beta
        images += dephasing_integral(p - 1.0, s + (kImages + 0.5) * beta, t) / beta;
        acc += 2.0 * images;
    }
    return -b.J * acc;
}

QubitOperator adiabatic_exact(const Environment& env, const GateModel& model, const CouplingOperator& s,
                              const InitialState& rho0, double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    if (!model.commutes_with(s.matrix(), std::max(t, 1.0)))
        throw std::invalid_argument("adiabatic_exact needs a system Hamiltonian commuting with S");
    const auto& l = s.eigenvalues();
    const double dl = l[0] - l[1];
    const double decay = std::exp(dl * dl * exact_dephasing_exponent(env, t));
    const QubitOperator p0 = s.projector(0);
    const QubitOperator p1 = s.projector(1);
    const QubitOperator& r = rho0.density();
    const QubitOperator dephased = p0 * r * p0 + p1 * r * p1 + decay * (p0 * r * p1 + p1 * r * p0);
    const QubitOperator u = ideal_propagator(model, t);
    return u * dephased * u.adjoint();
}

// ---------------------------------------------------------------------------

void DiscreteBath::validate() const
{
    if (fock_cutoff < 1) throw std::invalid_argument("fock_cutoff must be >= 1");
    if (!(kT >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    for (const BathMode& m : modes) {
        if (!(m.omega > 0.0)) throw std::invalid_argument("mode frequency must be > 0");
        if (!(m.coupling_sq >= 0.0)) throw std::invalid_argument("mode coupling |g|^2 must be >= 0");
    }
    double dim = 2.0;
    for (std::size_t k = 0; k < modes.size(); ++k) dim *= fock_cutoff + 1;
    if (dim > 65536.0) throw std::invalid_argument("few-mode product space exceeds 65536 states");
}

std::size_t DiscreteBath::bath_dimension() const
{
    std::size_t d = 1;
    for (std::size_t k = 0; k < modes.size(); ++k) d *= static_cast<std::size_t>(fock_cutoff + 1);
    return d;
}

namespace {

using State = Eigen::VectorXcd;  // spin-major: index = spin * dim_B + bath

// H_I(t) = (s(t).sigma) x sum_k g_k (a_k^dag e^{i w_k t} + a_k e^{-i w_k t}),
// the coupling in the interaction picture of H_S + H_B.
class InteractionHamiltonian {
public:
    InteractionHamiltonian(const DiscreteBath& bath, const IdealEvolution& ideal, const CouplingOperator& s)
        : bath_(bath), ideal_(ideal), s_(s), dim_b_(bath.bath_dimension())
    {
        std::size_t stride = 1;
        for (std::size_t k = 0; k < bath.modes.size(); ++k) {
            strides_.push_back(stride);
            g_.push_back(std::sqrt(bath.modes[k].coupling_sq));
            stride *= static_cast<std::size_t>(bath.fock_cutoff + 1);
        }
        occupation_.resize(dim_b_ * bath.modes.size());
        for (std::size_t i = 0; i < dim_b_; ++i)
            for (std::size_t k = 0; k < bath.modes.size(); ++k)
                occupation_[i * bath.modes.size() + k] =
                    static_cast<int>((i / strides_[k]) % static_cast<std::size_t>(bath.fock_cutoff + 1));
    }

    std::size_t dimension() const { return 2 * dim_b_; }
    std::size_t bath_dimension() const { return dim_b_; }
    const std::vector<std::size_t>& strides() const { return strides_; }

    double norm_bound() const
    {
        double b = 0.0;
        for (double g : g_) b += 2.0 * g * std::sqrt(static_cast<double>(bath_.fock_cutoff + 1));
        return b * s_.pauli_vector().norm();
    }

    struct Frame {
        QubitOperator m;                                // s(t).sigma
        std::vector<std::complex<double>> up;           // g_k e^{i w_k t}
    };

    Frame frame(double t) const
    {
        Frame f;
        f.m = from_bloch(0.0, ideal_.coupling_vector(s_, t));
        for (std::size_t k = 0; k < g_.size(); ++k) f.up.push_back(g_[k] * std::polar(1.0, bath_.modes[k].omega * t));
        return f;
    }

    void apply(const Frame& f, const State& in, State& out) const
    {
        const std::size_t K = g_.size();
        const int nc = bath_.fock_cutoff;
        bath_buf_.setZero(2 * dim_b_);
        for (std::size_t spin = 0; spin < 2; ++spin) {
            const std::size_t off = spin * dim_b_;
            for (std::size_t i = 0; i < dim_b_; ++i) {
                const std::complex<double> v = in[static_cast<Eigen::Index>(off + i)];
                if (v == 0.0) continue;
                for (std::size_t k = 0; k < K; ++k) {
                    const int n = occupation_[i * K + k];
                    if (n < nc)  // a^dag |n> = sqrt(n+1) |n+1>
                        bath_buf_[static_cast<Eigen::Index>(off + i + strides_[k])] +=
                            f.up[k] * std::sqrt(static_cast<double>(n + 1)) * v;
                    if (n > 0)  // a |n> = sqrt(n) |n-1>
                        bath_buf_[static_cast<Eigen::Index>(off + i - strides_[k])] +=
                            std::conj(f.up[k]) * std::sqrt(static_cast<double>(n)) * v;
                }
            }
        }
        out.resize(2 * static_cast<Eigen::Index>(dim_b_));
        const auto db = static_cast<Eigen::Index>(dim_b_);
        out.head(db) = f.m(0, 0) * bath_buf_.head(db) + f.m(0, 1) * bath_buf_.tail(db);
        out.tail(db) = f.m(1, 0) * bath_buf_.head(db) + f.m(1, 1) * bath_buf_.tail(db);
    }

private:
    const DiscreteBath& bath_;
    const IdealEvolution& ideal_;
    const CouplingOperator& s_;
    std::size_t dim_b_;
    std::vector<std::size_t> strides_;
    std::vector<double> g_;
    std::vector<int> occupation_;
    mutable State bath_buf_;
};

// (e^{Omega} - 1) v for the fourth-order Magnus generator
// Omega = -i h/2 (H1 + H2) - sqrt(3) h^2 / 12 [H2, H1].
class MagnusStep {
public:
    MagnusStep(const InteractionHamiltonian& h) : h_(h) {}

    void set(double t0, double dt)
    {
        const double c = std::sqrt(3.0) / 6.0;
        f1_ = h_.frame(t0 + (0.5 - c) * dt);
        f2_ = h_.frame(t0 + (0.5 + c) * dt);
        dt_ = dt;
    }

    void omega(const State& v, State& out) const
    {
        h_.apply(f1_, v, a_);
        h_.apply(f2_, v, b_);
        h_.apply(f2_, a_, c_);  // H2 H1 v
        h_.apply(f1_, b_, d_);  // H1 H2 v
        const std::complex<double> mi(0.0, -0.5 * dt_);
        const double k = std::sqrt(3.0) * dt_ * dt_ / 12.0;
        out = mi * (a_ + b_) - k * (c_ - d_);
    }

    State expm1(const State& v) const
    {
        State sum = State::Zero(v.size());
        State term = v;
        State next;
        for (int k = 1; k <= 60; ++k) {
            omega(term, next);
            term = next / static_cast<double>(k);
            sum += term;
            if (term.lpNorm<Eigen::Infinity>() <= 1e-24) break;
        }
        return sum;
    }

private:
    const InteractionHamiltonian& h_;
    InteractionHamiltonian::Frame f1_, f2_;
    double dt_ = 0.0;
    mutable State a_, b_, c_, d_;
};

struct PureRun {
    QubitOperator deviation;  // interaction-picture reduced deviation
    double norm_defect;
};

PureRun propagate(const InteractionHamiltonian& h, const State& psi0, double t, std::size_t steps)
{
    MagnusStep step(h);
    State phi = State::Zero(psi0.size());
    const double dt = t / static_cast<double>(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        step.set(dt * static_cast<double>(n), dt);
        phi += step.expm1(psi0) + step.expm1(phi);
    }
    const auto db = static_cast<Eigen::Index>(h.bath_dimension());
    // Tr_B(psi0 phi^dag + phi psi0^dag + phi phi^dag)
    const auto partial = [&](const State& a, const State& b) {
        QubitOperator r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r(i, j) = b.segment(j * db, db).dot(a.segment(i * db, db));
        return r;
    };
    PureRun out;
    out.deviation = partial(psi0, phi) + partial(phi, psi0) + partial(phi, phi);
    out.norm_defect = std::abs(2.0 * psi0.dot(phi).real() + phi.squaredNorm());
    return out;
}

struct Component {
    double weight;
    State psi0;
};

std::vector<Component> initial_components(const DiscreteBath& bath, const InteractionHamiltonian& h,
                                          const QubitOperator& rho0)
{
    // spin part: eigen-decomposition of rho0
    const HermitianEigen e = herm_eigen(rho0);
    std::vector<std::pair<double, Ket>> spins;
    for (int j = 0; j < 2; ++j)
        if (e.values[static_cast<std::size_t>(j)] > 1e-14) spins.emplace_back(e.values[static_cast<std::size_t>(j)], e.vectors[static_cast<std::size_t>(j)]);

    // bath part: thermal number states
    std::vector<std::pair<double, std::size_t>> bath_states;
    const std::size_t db = h.bath_dimension();
    const std::size_t K = bath.modes.size();
    double total = 0.0;
    for (std::size_t i = 0; i < db; ++i) {
        double p = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
            const int n = static_cast<int>((i / h.strides()[k]) % static_cast<std::size_t>(bath.fock_cutoff + 1));
            if (bath.kT == 0.0) {
                if (n > 0) p = 0.0;
            } else {
                const double x = bath.modes[k].omega / bath.kT;
                p *= -std::expm1(-x) * std::exp(-x * n);
            }
        }
        if (p >= 1e-12) {
            bath_states.emplace_back(p, i);
            total += p;
        }
    }

    std::vector<Component> out;
    for (const auto& [ps, ket] : spins)
        for (const auto& [pb, idx] : bath_states) {
            Component c{ps * pb / total, State::Zero(static_cast<Eigen::Index>(2 * db))};
            c.psi0[static_cast<Eigen::Index>(idx)] = ket[0];
            c.psi0[static_cast<Eigen::Index>(db + idx)] = ket[1];
            out.push_back(std::move(c));
        }
    return out;
}

}  // namespace

FewModeResult few_mode_exact(const DiscreteBath& bath, const GateModel& model, const CouplingOperator& s,
                             const InitialState& rho0, double t, const FewModeOptions& opt)
{
    bath.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
    if (!(opt.step_factor > 0.0)) throw std::invalid_argument("step_factor must be > 0");

    const IdealEvolution ideal(model, t);
    const InteractionHamiltonian h(bath, ideal, s);
    const QubitOperator u = ideal.propagator(t);
    FewModeResult result;
    result.rho = u * rho0.density() * u.adjoint();
    result.deviation = QubitOperator::Zero();
    if (t == 0.0 || bath.modes.empty()) return result;

    double top = 0.0;
    for (const BathMode& m : bath.modes) top = std::max(top, m.omega);
    const double rate = top + model.drive_frequency(t) + h.norm_bound();
    const auto steps = static_cast<std::size_t>(std::ceil(t * rate / opt.step_factor));

    const std::vector<Component> comps = initial_components(bath, h, rho0.density());
    const auto run = [&](std::size_t n) {
        QubitOperator dev = QubitOperator::Zero();
        double defect = 0.0;
        for (const Component& c : comps) {
            const PureRun r = propagate(h, c.psi0, t, n);
            dev += c.weight * r.deviation;
            defect = std::max(defect, r.norm_defect);
        }
        return std::make_pair(dev, defect);
    };

    auto [dev, defect] = run(std::max<std::size_t>(steps, 1));
    result.steps = std::max<std::size_t>(steps, 1);
    if (opt.check_convergence) {
        auto [fine, fine_defect] = run(2 * result.steps);
        if (max_abs_diff(fine, dev) > opt.convergence_tol)
            throw ConvergenceFailure("few-mode propagation did not converge under step halving");
        dev = fine;
        defect = fine_defect;
        result.steps *= 2;
    }
    result.deviation = u * dev * u.adjoint();
    result.rho += result.deviation;
    result.norm_defect = defect;
    return result;
}

}  // namespace qdecoh
