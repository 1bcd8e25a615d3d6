// Thermal bosonic environment.
//
// The continuum is described by the spectral weight
//     Upsilon(omega) |g(omega)|^2 = J omega^n exp(-omega / omega_c),
// a finite set of modes by explicit (omega_k, |g_k|^2) pairs.  Temperature
// enters only as kT.  Every mode sum sum_k |g_k|^2 K(omega_k) becomes
// int_0^{tail_cut omega_c} J omega^n e^{-omega/omega_c} K(omega) d omega.

#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <concepts>
#include <numbers>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "qdecoh/quadrature.hpp"

namespace qdecoh {

struct BathSpectrum {
    double J = 0.0;
    double n = 1.0;
    double omega_c = 1.0;
    double kT = 0.0;

    /// Throws std::invalid_argument unless omega_c > 0, J >= 0, n > 0, kT >= 0.
    void validate() const;
    double weight(double omega) const;
};

struct BathMode {
    double omega;
    double coupling_sq;  // |g_k|^2
};

struct DiscreteModes {
    std::vector<BathMode> modes;
    double kT = 0.0;

    void validate() const;
};

using Environment = std::variant<BathSpectrum, DiscreteModes>;

double temperature(const Environment& env);
/// Environment with every coupling multiplied by `factor` (J or each |g_k|^2).
Environment scaled(const Environment& env, double factor);
/// Largest frequency that carries weight: tail_cut * omega_c, or max omega_k.
double frequency_extent(const Environment& env, const QuadratureSpec& q);

/// coth(omega / 2kT); exactly 1 at kT = 0, series 2kT/omega + omega/(6kT)
/// when omega/2kT < 1e-4.  Throws std::invalid_argument for omega <= 0.
double thermal_factor(double omega, double kT);

namespace detail {

template <class T>
struct Flat;

template <>
struct Flat<double> {
    static constexpr std::size_t dim = 1;
    static void put(const double& v, std::span<double> out) { out[0] = v; }
    static double get(std::span<const double> in) { return in[0]; }
};

template <>
struct Flat<std::complex<double>> {
    static constexpr std::size_t dim = 2;
    static void put(const std::complex<double>& v, std::span<double> out)
    {
        out[0] = v.real();
        out[1] = v.imag();
    }
    static std::complex<double> get(std::span<const double> in) { return {in[0], in[1]}; }
};

template <std::size_t N>
struct Flat<std::array<double, N>> {
    static constexpr std::size_t dim = N;
    static void put(const std::array<double, N>& v, std::span<double> out)
    {
        for (std::size_t i = 0; i < N; ++i) out[i] = v[i];
    }
    static std::array<double, N> get(std::span<const double> in)
    {
        std::array<double, N> v{};
        for (std::size_t i = 0; i < N; ++i) v[i] = in[i];
        return v;
    }
};

template <class K>
concept HasZeroLimit = requires(const K& k, double t) { k.at_zero(t); };

}  // namespace detail

template <class K>
using kernel_result_t = std::remove_cvref_t<std::invoke_result_t<const K&, double, double>>;

/// int_0^{tail_cut omega_c} J omega^n e^{-omega/omega_c} kernel(omega, t) d omega.
///
/// Panels start no wider than pi/t so the oscillation of kernels in omega t
/// is resolved.  Kernels may expose `at_zero(t)`, their omega -> 0 limit,
/// which replaces evaluation below omega_eps * omega_c.  Throws
/// QuadratureFailure when the subdivision budget is exhausted.
template <class K>
kernel_result_t<K> spectral_integral(const BathSpectrum& bath, const K& kernel, double t,
                                     const QuadratureSpec& q = {})
{
    using R = kernel_result_t<K>;
    using F = detail::Flat<R>;
    bath.validate();
    q.validate();
    if (bath.J == 0.0) return F::get(std::vector<double>(F::dim, 0.0));

    const double eps = q.omega_eps * bath.omega_c;
    const VectorIntegrand integrand = [&](double w, std::span<double> out) {
        R value;
        if constexpr (detail::HasZeroLimit<K>) {
            value = (w < eps) ? kernel.at_zero(t) : kernel(w, t);
        } else {
            value = kernel(std::max(w, eps), t);
        }
        F::put(value, out);
        const double weight = bath.weight(w);
        for (double& v : out) v *= weight;
    };
    const double upper = q.tail_cut * bath.omega_c;
    const double width = t > 0.0 ? std::min(upper, std::numbers::pi / t) : upper;
    const AdaptiveResult r =
        adaptive_gauss_kronrod(integrand, F::dim, 0.0, upper, width, q.rel_tol, q.abs_tol, q.max_panels);
    return F::get(r.value);
}

/// sum_k |g_k|^2 kernel(omega_k, t)
template <class K>
kernel_result_t<K> discrete_mode_sum(std::span<const BathMode> modes, const K& kernel, double t)
{
    using R = kernel_result_t<K>;
    using F = detail::Flat<R>;
    std::vector<double> acc(F::dim, 0.0);
    std::vector<double> term(F::dim, 0.0);
    for (const BathMode& m : modes) {
        F::put(kernel(m.omega, t), term);
        for (std::size_t d = 0; d < F::dim; ++d) acc[d] += m.coupling_sq * term[d];
    }
    return F::get(acc);
}

/// Mode sum over either kind of environment.
template <class K>
kernel_result_t<K> integrate_over(const Environment& env, const K& kernel, double t, const QuadratureSpec& q = {})
{
    if (const auto* bath = std::get_if<BathSpectrum>(&env)) return spectral_integral(*bath, kernel, t, q);
    const auto& d = std::get<DiscreteModes>(env);
    d.validate();
    return discrete_mode_sum(std::span<const BathMode>(d.modes), kernel, t);
}

/// Bath correlation pieces at lag tau:
///   symmetric     = sum_k |g_k|^2 coth(omega_k/2kT) cos(omega_k tau)
///   antisymmetric = sum_k |g_k|^2 sin(omega_k tau)
struct BathCorrelation {
    double symmetric = 0.0;
    double antisymmetric = 0.0;
};

/// Closed form for the continuum: J Gamma(n+1) (s - i tau)^{-(n+1)} with
/// s = 1/omega_c at kT = 0; at kT > 0 the coth weight is expanded as
/// 1 + 2 sum_m e^{-m omega/kT} and the image sum is closed with an
/// Euler-Maclaurin tail.  The frequency integral is not truncated here.
BathCorrelation bath_correlation(const BathSpectrum& bath, double tau);
BathCorrelation bath_correlation(const DiscreteModes& modes, double tau);
BathCorrelation bath_correlation(const Environment& env, double tau);

}  // namespace qdecoh
