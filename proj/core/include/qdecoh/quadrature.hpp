// Numerical integration primitives: a globally adaptive Gauss-Kronrod (7/15)
// engine for vector-valued integrands, and a fixed Gauss-Legendre rule with
// its spectral integration matrix for cumulative integrals.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdecoh {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-16;
    /// Upper frequency limit as a multiple of omega_c.
    double tail_cut = 60.0;
    /// Small-omega switch point as a multiple of omega_c.
    double omega_eps = 1e-6;
    std::size_t max_panels = 400000;

    /// Throws std::invalid_argument unless every field is positive and tail_cut >= 20.
    void validate() const;
};

/// Raised when the subdivision budget runs out before the error target is met.
class QuadratureFailure : public std::runtime_error {
public:
    QuadratureFailure(const std::string& what, std::vector<double> estimate, double error_bound);

    const std::vector<double>& estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    std::vector<double> estimate_;
    double error_bound_;
};

using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct AdaptiveResult {
    std::vector<double> value;
    double error = 0.0;
    std::size_t panels = 0;
};

/// Integrates f over [a, b].  The interval is first cut into panels no wider
/// than `max_width`; the panel with the largest error estimate is bisected
/// until sum(err) <= max(rel_tol * |I|_inf, abs_tol).  Panel contributions are
/// summed in position order, so results are reproducible bit for bit.
AdaptiveResult adaptive_gauss_kronrod(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                      double max_width, double rel_tol, double abs_tol,
                                      std::size_t max_panels);

/// 16-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    static constexpr std::size_t kOrder = 16;
    std::array<double, kOrder> nodes;    // ascending
    std::array<double, kOrder> weights;
    /// integration[q][r] = int_{-1}^{nodes[q]} l_r(x) dx for the Lagrange
    /// basis l_r at the nodes; gives cumulative integrals from node values.
    std::array<std::array<double, kOrder>, kOrder> integration;
};

const GaussLegendreRule& gauss_legendre();

}  // namespace qdecoh
