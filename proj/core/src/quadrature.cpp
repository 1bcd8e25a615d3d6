#include "qdecoh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qdecoh {

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && omega_eps > 0.0 && max_panels > 0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (!(tail_cut >= 20.0)) throw std::invalid_argument("tail_cut must be >= 20");
}

QuadratureFailure::QuadratureFailure(const std::string& what, std::vector<double> estimate,
                                     double error_bound)
    : std::runtime_error(what), estimate_(std::move(estimate)), error_bound_(error_bound)
{
}

namespace {

struct KronrodTable {
    // Symmetric halves as tabulated by Boost: index 0 is the centre node,
    // even indices are shared with the 7-point Gauss rule.
    std::array<double, 8> x{};
    std::array<double, 8> wk{};
    std::array<double, 8> wg{};
};

const KronrodTable& kronrod15()
{
    static const KronrodTable table = [] {
        using boost::math::quadrature::gauss;
        using boost::math::quadrature::gauss_kronrod;
        KronrodTable t;
        const auto& x = gauss_kronrod<double, 15>::abscissa();
        const auto& w = gauss_kronrod<double, 15>::weights();
        const auto& gw = gauss<double, 7>::weights();
        for (std::size_t i = 0; i < 8; ++i) {
            t.x[i] = x[i];
            t.wk[i] = w[i];
            t.wg[i] = (i % 2 == 0) ? gw[i / 2] : 0.0;
        }
        return t;
    }();
    return table;
}

struct Panel {
    double a;
    double b;
    double err;
    std::vector<double> value;
};

struct ByError {
    bool operator()(const Panel* l, const Panel* r) const { return l->err < r->err; }
};

void evaluate_panel(const VectorIntegrand& f, std::size_t dim, Panel& p, std::vector<double>& scratch)
{
    const KronrodTable& t = kronrod15();
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    std::vector<double> kron(dim, 0.0);
    std::vector<double> gauss(dim, 0.0);
    std::span<double> out(scratch.data(), dim);

    f(mid, out);
    for (std::size_t d = 0; d < dim; ++d) {
        kron[d] += t.wk[0] * out[d];
        gauss[d] += t.wg[0] * out[d];
    }
    for (std::size_t i = 1; i < 8; ++i) {
        for (const double x : {mid - half * t.x[i], mid + half * t.x[i]}) {
            f(x, out);
            for (std::size_t d = 0; d < dim; ++d) {
                kron[d] += t.wk[i] * out[d];
                gauss[d] += t.wg[i] * out[d];
            }
        }
    }
    p.err = 0.0;
    p.value.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        p.value[d] = half * kron[d];
        p.err = std::max(p.err, std::abs(half * (kron[d] - gauss[d])));
    }
}

}  // namespace

AdaptiveResult adaptive_gauss_kronrod(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                      double max_width, double rel_tol, double abs_tol,
                                      std::size_t max_panels)
{
    AdaptiveResult result;
    result.value.assign(dim, 0.0);
    if (!(b > a)) return result;

    const double width = b - a;
    auto initial = static_cast<std::size_t>(std::ceil(width / std::min(max_width, width)));
    initial = std::max<std::size_t>(initial, 1);
    if (initial > max_panels)
        throw QuadratureFailure("initial partition exceeds the panel budget", result.value, INFINITY);

    std::vector<std::unique_ptr<Panel>> panels;
    panels.reserve(2 * initial);
    std::priority_queue<Panel*, std::vector<Panel*>, ByError> queue;
    std::vector<double> scratch(dim);
    std::vector<double> total(dim, 0.0);
    double err_total = 0.0;

    for (std::size_t k = 0; k < initial; ++k) {
        auto p = std::make_unique<Panel>();
        p->a = a + width * static_cast<double>(k) / static_cast<double>(initial);
        p->b = (k + 1 == initial) ? b : a + width * static_cast<double>(k + 1) / static_cast<double>(initial);
        evaluate_panel(f, dim, *p, scratch);
        for (std::size_t d = 0; d < dim; ++d) total[d] += p->value[d];
        err_total += p->err;
        queue.push(p.get());
        panels.push_back(std::move(p));
    }

    const auto target = [&] {
        double norm = 0.0;
        for (double v : total) norm = std::max(norm, std::abs(v));
        return std::max(rel_tol * norm, abs_tol);
    };

    while (err_total > target()) {
        Panel* worst = queue.top();
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) break;  // cannot split further
        if (panels.size() + 1 > max_panels) {
            std::vector<double> estimate = total;
            throw QuadratureFailure("adaptive quadrature exhausted its panel budget", estimate, err_total);
        }
        queue.pop();
        auto right = std::make_unique<Panel>();
        right->a = mid;
        right->b = worst->b;
        Panel left{worst->a, mid, 0.0, {}};
        evaluate_panel(f, dim, left, scratch);
        evaluate_panel(f, dim, *right, scratch);
        for (std::size_t d = 0; d < dim; ++d)
            total[d] += left.value[d] + right->value[d] - worst->value[d];
        err_total += left.err + right->err - worst->err;
        *worst = std::move(left);
        queue.push(worst);
        queue.push(right.get());
        panels.push_back(std::move(right));
    }

    std::sort(panels.begin(), panels.end(), [](const auto& l, const auto& r) { return l->a < r->a; });
    err_total = 0.0;
    for (const auto& p : panels) {
        for (std::size_t d = 0; d < dim; ++d) result.value[d] += p->value[d];
        err_total += p->err;
    }
    result.error = err_total;
    result.panels = panels.size();
    return result;
}

const GaussLegendreRule& gauss_legendre()
{
    static const GaussLegendreRule rule = [] {
        using boost::math::quadrature::gauss;
        constexpr std::size_t n = GaussLegendreRule::kOrder;
        const auto& x = gauss<double, n>::abscissa();  // non-negative half
        const auto& w = gauss<double, n>::weights();
        GaussLegendreRule r{};
        for (std::size_t i = 0; i < n / 2; ++i) {
            r.nodes[n / 2 - 1 - i] = -x[i];
            r.weights[n / 2 - 1 - i] = w[i];
            r.nodes[n / 2 + i] = x[i];
            r.weights[n / 2 + i] = w[i];
        }
        // int_{-1}^{x_q} l_r(x) dx with the same rule mapped onto [-1, x_q];
        // exact because l_r has degree n - 1.
        for (std::size_t q = 0; q < n; ++q) {
            const double half = 0.5 * (r.nodes[q] + 1.0);
            for (std::size_t rr = 0; rr < n; ++rr) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double y = -1.0 + half * (r.nodes[k] + 1.0);
                    double l = 1.0;
                    for (std::size_t m = 0; m < n; ++m)
                        if (m != rr) l *= (y - r.nodes[m]) / (r.nodes[rr] - r.nodes[m]);
                    acc += r.weights[k] * l;
                }
                r.integration[q][rr] = half * acc;
            }
        }
        return r;
    }();
    return rule;
}

}  // namespace qdecoh
