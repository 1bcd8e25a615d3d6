#include "qdecoh/magnus.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace qdecoh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kGL = GaussLegendreRule::kOrder;
constexpr std::size_t kMaxTrackPanels = 1u << 20;

void require_time(double t)
{
    if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
}

std::size_t panels_for(double t, double rate)
{
    if (t <= 0.0 || rate <= 0.0) return 1;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t * rate / kPi)));
}

// Drive-resolved base partition: panels no wider than pi / (2 nu).
std::size_t base_panels(const GateModel& model, double t)
{
    return panels_for(t, 2.0 * model.drive_frequency(t));
}

struct TrackKernels {
    SpinKernel spin;
    RealVec3 Y = RealVec3::Zero();
};

TrackKernels track_kernels(const CouplingTrack& track, double omega, bool with_y)
{
    TrackKernels out;
    const auto& u = track.nodes();
    const auto& w = track.weights();
    const auto& s = track.values();
    const double t = track.horizon();
    const std::size_t n = track.size();

    for (std::size_t a = 0; a < n; ++a) {
        const double ph = omega * (u[a] - t);
        out.spin.f += w[a] * std::cos(ph) * s[a];
        out.spin.f_tilde += w[a] * std::sin(ph) * s[a];
    }
    if (!with_y) return out;

    // Y = int du s(u) x int_0^u dv s(v) cos w(u - v); the inner integral is
    // split about the panel start c as cos w(u-c) A_c + sin w(u-c) A_s.
    const GaussLegendreRule& gl = gauss_legendre();
    const double half = 0.5 * track.panel_width();
    RealVec3 done_c = RealVec3::Zero();  // int_0^c s(v) cos w(c - v) dv
    RealVec3 done_s = RealVec3::Zero();  // int_0^c s(v) sin w(c - v) dv
    for (std::size_t p = 0; p < track.panels(); ++p) {
        const std::size_t base = p * kGL;
        const double c = u[base] - half * (gl.nodes[0] + 1.0);
        std::array<double, kGL> cv{}, sv{};
        for (std::size_t b = 0; b < kGL; ++b) {
            cv[b] = std::cos(omega * (u[base + b] - c));
            sv[b] = std::sin(omega * (u[base + b] - c));
        }
        for (std::size_t a = 0; a < kGL; ++a) {
            // int_c^{u_a} s(v) cos w(u_a - v) dv with the interpolating rule
            RealVec3 inner = RealVec3::Zero();
            for (std::size_t b = 0; b < kGL; ++b) {
                const double cw = cv[a] * cv[b] + sv[a] * sv[b];
                inner += half * gl.integration[a][b] * cw * s[base + b];
            }
            inner += cv[a] * done_c - sv[a] * done_s;
            out.Y += w[base + a] * s[base + a].cross(inner);
        }
        // advance the prefix integrals to the end of this panel
        const double c_next = c + track.panel_width();
        const double cs = std::cos(omega * track.panel_width());
        const double sn = std::sin(omega * track.panel_width());
        RealVec3 next_c = cs * done_c - sn * done_s;
        RealVec3 next_s = sn * done_c + cs * done_s;
        for (std::size_t b = 0; b < kGL; ++b) {
            const double ph = omega * (c_next - u[base + b]);
            next_c += w[base + b] * std::cos(ph) * s[base + b];
            next_s += w[base + b] * std::sin(ph) * s[base + b];
        }
        done_c = next_c;
        done_s = next_s;
    }
    return out;
}

double max_diff(const RealVec3& a, const RealVec3& b)
{
    return (a - b).lpNorm<Eigen::Infinity>();
}

TrackKernels adaptive_kernels(const GateModel& model, const CouplingOperator& s, double omega, double t,
                              const QuadratureSpec& q, bool with_y)
{
    require_time(t);
    q.validate();
    if (t == 0.0) return {};
    const IdealEvolution ideal(model, t);
    std::size_t panels = std::max(base_panels(model, t), panels_for(t, std::abs(omega)));
    TrackKernels prev = track_kernels(CouplingTrack(ideal, s, t, panels), omega, with_y);
    while (2 * panels <= kMaxTrackPanels) {
        panels *= 2;
        TrackKernels next = track_kernels(CouplingTrack(ideal, s, t, panels), omega, with_y);
        const double scale = std::max({next.spin.f.lpNorm<Eigen::Infinity>(),
                                       next.spin.f_tilde.lpNorm<Eigen::Infinity>(), next.Y.lpNorm<Eigen::Infinity>()});
        const double change = std::max({max_diff(next.spin.f, prev.spin.f),
                                        max_diff(next.spin.f_tilde, prev.spin.f_tilde), max_diff(next.Y, prev.Y)});
        if (change <= std::max(q.rel_tol * scale, q.abs_tol)) return next;
        prev = next;
    }
    throw QuadratureFailure("spin kernels did not settle under panel doubling",
                            {prev.spin.f.x(), prev.spin.f.y(), prev.spin.f.z()}, INFINITY);
}

MagnusKernels to_magnus(const TrackKernels& k)
{
    const RealVec3& f = k.spin.f;
    const RealVec3& g = k.spin.f_tilde;
    MagnusKernels m;
    m.F = RealVec3(f.y() * f.z() + g.y() * g.z(), -(f.x() * f.z() + g.x() * g.z()), f.x() * f.y() + g.x() * g.y());
    m.Y = k.Y;
    return m;
}

// ---------------------------------------------------------------------------
// frequency-resolved moments

using MomentVector = std::array<double, 12>;  // R xx yy zz xy xz yz | Q xy xz yz | Yc

MomentVector moment_kernel(const TrackKernels& k, double coth)
{
    const RealVec3& f = k.spin.f;
    const RealVec3& g = k.spin.f_tilde;
    const auto r = [&](int i, int j) { return coth * (f[i] * f[j] + g[i] * g[j]); };
    const auto qq = [&](int i, int j) { return g[i] * f[j] - f[i] * g[j]; };
    return {r(0, 0), r(1, 1), r(2, 2), r(0, 1), r(0, 2), r(1, 2), qq(0, 1), qq(0, 2), qq(1, 2),
            coth * k.Y.x(), coth * k.Y.y(), coth * k.Y.z()};
}

BathMoments unpack(const MomentVector& v)
{
    BathMoments m;
    m.R << v[0], v[3], v[4], v[3], v[1], v[5], v[4], v[5], v[2];
    m.Q << 0.0, v[6], v[7], -v[6], 0.0, v[8], -v[7], -v[8], 0.0;
    m.Yc = RealVec3(v[9], v[10], v[11]);
    return m;
}

// Tracks at power-of-two refinements of the drive-resolved partition,
// built on first use.
class TrackLadder {
public:
    TrackLadder(const GateModel& model, const CouplingOperator& s, double t)
        : ideal_(model, t), s_(s), t_(t), base_(base_panels(model, t))
    {
    }

    const CouplingTrack& for_omega(double omega)
    {
        const std::size_t need = panels_for(t_, omega);
        std::size_t panels = base_;
        while (panels < need) panels *= 2;
        if (panels > kMaxTrackPanels) throw QuadratureFailure("frequency too high for time quadrature", {}, INFINITY);
        auto it = tracks_.find(panels);
        if (it == tracks_.end())
            it = tracks_.emplace(panels, std::make_unique<CouplingTrack>(ideal_, s_, t_, panels)).first;
        return *it->second;
    }

private:
    IdealEvolution ideal_;
    const CouplingOperator& s_;
    double t_;
    std::size_t base_;
    std::map<std::size_t, std::unique_ptr<CouplingTrack>> tracks_;
};

BathMoments frequency_moments(const GateModel& model, const CouplingOperator& s, const Environment& env, double t,
                              const QuadratureSpec& q)
{
    TrackLadder ladder(model, s, t);
    const double kT = temperature(env);
    const auto kernel = [&](double omega, double) {
        return moment_kernel(track_kernels(ladder.for_omega(omega), omega, true), thermal_factor(omega, kT));
    };
    return unpack(integrate_over(env, kernel, t, q));
}

// ---------------------------------------------------------------------------
// time-domain moments

Eigen::Matrix3d accumulate_pairs(const CouplingTrack& track, const Environment& env, Eigen::Matrix3d& anti,
                                 RealVec3& y)
{
    const GaussLegendreRule& gl = gauss_legendre();
    const std::size_t P = track.panels();
    const double h = track.panel_width();
    const auto& w = track.weights();
    const auto& s = track.values();

    // correlation at u_a - v_b depends only on (p - q, alpha, beta)
    using Block = Eigen::Matrix<double, kGL, kGL>;
    std::vector<Block> sym(P), asym(P);
    for (std::size_t d = 0; d < P; ++d)
        for (std::size_t a = 0; a < kGL; ++a)
            for (std::size_t b = 0; b < kGL; ++b) {
                const double tau = (static_cast<double>(d) + 0.5 * (gl.nodes[a] - gl.nodes[b])) * h;
                const BathCorrelation c = bath_correlation(env, tau);
                sym[d](a, b) = c.symmetric;
                asym[d](a, b) = c.antisymmetric;
            }

    // u_a - v_ab and the weights of the mapped rule are panel independent
    const auto& tri = track.triangle_values();
    Block tri_weight, tri_sym;
    for (std::size_t a = 0; a < kGL; ++a)
        for (std::size_t b = 0; b < kGL; ++b) {
            const double len = 0.5 * h * (gl.nodes[a] + 1.0);
            tri_weight(a, b) = 0.5 * len * gl.weights[b];
            tri_sym(a, b) = bath_correlation(env, 0.5 * len * (1.0 - gl.nodes[b])).symmetric;
        }

    using Panel = Eigen::Matrix<double, kGL, 3>;
    std::vector<Panel> sw(P);
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t a = 0; a < kGL; ++a) sw[p].row(a) = w[p * kGL + a] * s[p * kGL + a].transpose();

    Eigen::Matrix3d R = Eigen::Matrix3d::Zero();
    anti.setZero();
    y.setZero();
    Eigen::Matrix3d lower = Eigen::Matrix3d::Zero();  // sum over u-panel > v-panel
    for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t q = 0; q < p; ++q) {
            // (p, q) and its mirror (q, p): C_sym(-tau) = C_sym(tau)^T-indexing, C_anti odd
            const Eigen::Matrix<double, kGL, 3> cs = sym[p - q] * sw[q];
            const Eigen::Matrix<double, kGL, 3> ca = asym[p - q] * sw[q];
            const Eigen::Matrix3d m = sw[p].transpose() * cs;
            const Eigen::Matrix3d n = sw[p].transpose() * ca;
            lower += m;
            R += m + m.transpose();
            anti += n - n.transpose();
        }
        const Eigen::Matrix3d m = sw[p].transpose() * sym[0] * sw[p];
        const Eigen::Matrix3d n = sw[p].transpose() * asym[0] * sw[p];
        R += m;
        anti += n;
        // same panel, v < u: Gauss rule on [panel start, u_a]
        for (std::size_t a = 0; a < kGL; ++a) {
            RealVec3 inner = RealVec3::Zero();
            for (std::size_t b = 0; b < kGL; ++b)
                inner += tri_weight(a, b) * tri_sym(a, b) * tri[(p * kGL + a) * kGL + b];
            y += w[p * kGL + a] * s[p * kGL + a].cross(inner);
        }
    }
    y += RealVec3(lower(1, 2) - lower(2, 1), lower(2, 0) - lower(0, 2), lower(0, 1) - lower(1, 0));
    return R;
}

BathMoments time_domain_moments(const GateModel& model, const CouplingOperator& s, const Environment& env,
                                double t, const QuadratureSpec& q)
{
    const auto* bath = std::get_if<BathSpectrum>(&env);
    if (bath) bath->validate();
    if (bath && bath->J == 0.0) return {};

    // Panels resolve both the drive and the correlation width 1/omega_c
    // (or the fastest mode); a half-resolution pass estimates the error.
    const double corr_rate = bath ? kPi * bath->omega_c : frequency_extent(env, q);
    const std::size_t fine = std::max(base_panels(model, t), panels_for(t, corr_rate));
    const IdealEvolution ideal(model, t);

    const auto evaluate = [&](std::size_t panels) {
        BathMoments m;
        m.R = accumulate_pairs(CouplingTrack(ideal, s, t, panels, true), env, m.Q, m.Yc);
        return m;
    };
    const BathMoments m = evaluate(fine);
    const BathMoments coarse = evaluate(std::max<std::size_t>(1, (fine + 1) / 2));
    const double scale = std::max({m.R.lpNorm<Eigen::Infinity>(), m.Q.lpNorm<Eigen::Infinity>(),
                                   m.Yc.lpNorm<Eigen::Infinity>()});
    const double change = std::max({(m.R - coarse.R).lpNorm<Eigen::Infinity>(),
                                    (m.Q - coarse.Q).lpNorm<Eigen::Infinity>(),
                                    (m.Yc - coarse.Yc).lpNorm<Eigen::Infinity>()});
    if (change > std::max(100.0 * q.rel_tol * scale, q.abs_tol))
        throw QuadratureFailure("time-domain moments unresolved", {m.R(0, 0), m.R(1, 1), m.R(2, 2)}, change);
    return m;
}

}  // namespace

CouplingTrack::CouplingTrack(const IdealEvolution& ideal, const CouplingOperator& s, double t, std::size_t panels,
                             bool triangle)
    : t_(t), panels_(std::max<std::size_t>(panels, 1)), h_(t / static_cast<double>(panels_))
{
    require_time(t);
    const GaussLegendreRule& gl = gauss_legendre();
    nodes_.reserve(panels_ * kGL);
    weights_.reserve(panels_ * kGL);
    s_.reserve(panels_ * kGL);
    for (std::size_t p = 0; p < panels_; ++p) {
        const double a = h_ * static_cast<double>(p);
        for (std::size_t k = 0; k < kGL; ++k) {
            const double u = a + 0.5 * h_ * (gl.nodes[k] + 1.0);
            nodes_.push_back(u);
            weights_.push_back(0.5 * h_ * gl.weights[k]);
            s_.push_back(ideal.coupling_vector(s, u));
            if (!triangle) continue;
            for (std::size_t b = 0; b < kGL; ++b)
                tri_.push_back(ideal.coupling_vector(s, a + 0.5 * (u - a) * (gl.nodes[b] + 1.0)));
        }
    }
}

CouplingTrack::CouplingTrack(const GateModel& model, const CouplingOperator& s, double t, std::size_t panels)
    : CouplingTrack(IdealEvolution(model, t), s, t, panels)
{
}

SpinKernel spin_kernels(const CouplingTrack& track, double omega) { return track_kernels(track, omega, false).spin; }

MagnusKernels magnus_kernels(const CouplingTrack& track, double omega)
{
    return to_magnus(track_kernels(track, omega, true));
}

SpinKernel spin_kernels(const GateModel& model, const CouplingOperator& s, double omega, double t,
                        const QuadratureSpec& q)
{
    return adaptive_kernels(model, s, omega, t, q, false).spin;
}

MagnusKernels magnus_kernels(const GateModel& model, const CouplingOperator& s, double omega, double t,
                             const QuadratureSpec& q)
{
    return to_magnus(adaptive_kernels(model, s, omega, t, q, true));
}

BathMoments bath_moments(const GateModel& model, const CouplingOperator& s, const Environment& env, double t,
                         const QuadratureSpec& q, MagnusRoute route)
{
    require_time(t);
    q.validate();
    if (t == 0.0) return {};
    if (route == MagnusRoute::automatic)
        route = std::holds_alternative<DiscreteModes>(env) ? MagnusRoute::frequency_resolved : MagnusRoute::time_domain;
    if (route == MagnusRoute::frequency_resolved) return frequency_moments(model, s, env, t, q);
    return time_domain_moments(model, s, env, t, q);
}

SignTriple chain_signs(int index)
{
    if (index < 0 || index > 7) throw std::out_of_range("chain index must be in [0, 8)");
    return {(index & 4) ? -1 : 1, (index & 2) ? -1 : 1, (index & 1) ? -1 : 1};
}

int chain_index(const SignTriple& x) { return (x[0] < 0 ? 4 : 0) | (x[1] < 0 ? 2 : 0) | (x[2] < 0 ? 1 : 0); }

std::string chain_label(int index)
{
    std::string out;
    for (int v : chain_signs(index)) out += v > 0 ? '+' : '-';
    return out;
}

const std::array<QubitOperator, 8>& projector_chain()
{
    static const std::array<QubitOperator, 8> chain = [] {
        const double r = 1.0 / std::numbers::sqrt2;
        const cplx i(0.0, 1.0);
        const auto ket = [](cplx a, cplx b) {
            Ket k;
            k << a, b;
            return k;
        };
        const auto proj = [](const Ket& k) { return outer(k, k); };
        std::array<QubitOperator, 8> out;
        for (int idx = 0; idx < 8; ++idx) {
            const SignTriple x = chain_signs(idx);
            const QubitOperator px = proj(ket(r, x[0] * r));
            const QubitOperator py = proj(ket(r, static_cast<double>(x[1]) * r * i));
            const QubitOperator pz = x[2] > 0 ? proj(ket(1.0, 0.0)) : proj(ket(0.0, 1.0));
            out[static_cast<std::size_t>(idx)] = px * py * pz;
        }
        return out;
    }();
    return chain;
}

MagnusDecoherenceTable decoherence_table(const BathMoments& m, double t)
{
    MagnusDecoherenceTable table;
    table.t = t;
    const Eigen::Matrix3d& R = m.R;
    const Eigen::Matrix3d& Q = m.Q;
    const RealVec3 F(R(1, 2), -R(0, 2), R(0, 1));
    const RealVec3 shift = F - m.Yc;
    for (int i = 0; i < 8; ++i) {
        const SignTriple si = chain_signs(i);
        const RealVec3 x(si[0], si[1], si[2]);
        for (int j = 0; j < 8; ++j) {
            if (i == j) continue;
            const SignTriple sj = chain_signs(j);
            const RealVec3 xp(sj[0], sj[1], sj[2]);
            const RealVec3 d = x - xp;
            double im = -xp.dot(Q * x) + d.dot(shift);
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) im += (x[a] * x[b] - xp[a] * xp[b]) * Q(a, b);
            table.D(i, j) = cplx(-0.5 * d.dot(R * d), im);
        }
    }
    return table;
}

MagnusDecoherenceTable magnus_decoherence_table(const GateModel& model, const CouplingOperator& s,
                                                const Environment& env, double t, const QuadratureSpec& q,
                                                MagnusRoute route)
{
    return decoherence_table(bath_moments(model, s, env, t, q, route), t);
}

namespace {

QubitChannel assemble(const QubitOperator& u, const MagnusDecoherenceTable& d, bool deviation_only)
{
    const auto& chain = projector_chain();
    std::array<QubitOperator, 8> left;
    for (std::size_t i = 0; i < 8; ++i) left[i] = u * chain[i];
    QubitChannel ch;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const cplx e = d.D(i, j);
            if (deviation_only && e == cplx(0.0, 0.0)) continue;
            const cplx weight = deviation_only ? cexpm1(e) : std::exp(e);
            ch.add_term(weight, left[static_cast<std::size_t>(i)], left[static_cast<std::size_t>(j)]);
        }
    return ch;
}

}  // namespace

QubitChannel magnus_channel(const QubitOperator& u, const MagnusDecoherenceTable& d) { return assemble(u, d, false); }

QubitChannel magnus_deviation_channel(const QubitOperator& u, const MagnusDecoherenceTable& d)
{
    return assemble(u, d, true);
}

MagnusEvolution evolve_magnus(const GateModel& model, const CouplingOperator& s, const Environment& env,
                              const InitialState& rho0, double t, const QuadratureSpec& q, MagnusRoute route)
{
    const MagnusDecoherenceTable d = magnus_decoherence_table(model, s, env, t, q, route);
    const QubitOperator u = ideal_propagator(model, t);
    // deviation first, so the unitary part is not swamped by rounding
    const QubitOperator ideal = u * rho0.density() * u.adjoint();
    QubitOperator rho = ideal + magnus_deviation_channel(u, d).apply(rho0.density());
    rho = 0.5 * (rho + rho.adjoint());
    MagnusEvolution out;
    out.trace_defect = rho.trace().real() - 1.0;
    if (std::abs(out.trace_defect) > 1e-12) {
        rho /= rho.trace().real();
        out.renormalized = true;
    }
    out.rho = rho;
    return out;
}

}  // namespace qdecoh
