#include "qdecoh/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace qdecoh {

void BathSpectrum::validate() const
{
    if (!(omega_c > 0.0)) throw std::invalid_argument("omega_c must be > 0");
    if (!(J >= 0.0)) throw std::invalid_argument("J must be >= 0");
    if (!(n > 0.0)) throw std::invalid_argument("ohmicity n must be > 0");
    if (!(kT >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
}

double BathSpectrum::weight(double omega) const
{
    if (omega <= 0.0) return 0.0;
    return J * std::pow(omega, n) * std::exp(-omega / omega_c);
}

void DiscreteModes::validate() const
{
    if (!(kT >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    for (const BathMode& m : modes) {
        if (!(m.omega > 0.0)) throw std::invalid_argument("mode frequency must be > 0");
        if (!(m.coupling_sq >= 0.0)) throw std::invalid_argument("mode coupling |g|^2 must be >= 0");
    }
}

double temperature(const Environment& env)
{
    return std::visit([](const auto& e) { return e.kT; }, env);
}

Environment scaled(const Environment& env, double factor)
{
    if (const auto* bath = std::get_if<BathSpectrum>(&env)) {
        BathSpectrum b = *bath;
        b.J *= factor;
        return b;
    }
    DiscreteModes d = std::get<DiscreteModes>(env);
    for (BathMode& m : d.modes) m.coupling_sq *= factor;
    return d;
}

double frequency_extent(const Environment& env, const QuadratureSpec& q)
{
    if (const auto* bath = std::get_if<BathSpectrum>(&env)) return q.tail_cut * bath->omega_c;
    double top = 0.0;
    for (const BathMode& m : std::get<DiscreteModes>(env).modes) top = std::max(top, m.omega);
    return top;
}

double thermal_factor(double omega, double kT)
{
    if (!(omega > 0.0)) throw std::invalid_argument("thermal_factor needs omega > 0");
    if (kT == 0.0) return 1.0;
    const double x = omega / (2.0 * kT);
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

namespace {

using std::complex;

// sum_{m >= first} (z + m beta)^{-p}
complex<double> image_tail(complex<double> z, double beta, double p, int first)
{
    constexpr int kDirect = 32;
    complex<double> acc = 0.0;
    int m = first;
    for (; m < first + kDirect; ++m) acc += std::pow(z + static_cast<double>(m) * beta, -p);

    // Euler-Maclaurin from m onwards.
    const complex<double> w = z + static_cast<double>(m) * beta;
    acc += std::pow(w, 1.0 - p) / (beta * (p - 1.0));
    acc += 0.5 * std::pow(w, -p);
    // h^{(j)}(m) = (-p)(-p-1)...(-p-j+1) beta^j w^{-p-j}
    const auto derivative = [&](int j) {
        double c = 1.0;
        for (int i = 0; i < j; ++i) c *= -(p + i) * beta;
        return c * std::pow(w, -p - j);
    };
    // -sum_k B_{2k}/(2k)! h^{(2k-1)}
    acc -= (1.0 / 12.0) * derivative(1);
    acc += (1.0 / 720.0) * derivative(3);
    acc -= (1.0 / 30240.0) * derivative(5);
    acc += (1.0 / 1209600.0) * derivative(7);
    return acc;
}

}  // namespace

BathCorrelation bath_correlation(const BathSpectrum& bath, double tau)
{
    bath.validate();
    BathCorrelation c;
    if (bath.J == 0.0) return c;
    const double p = bath.n + 1.0;
    const double prefactor = bath.J * std::tgamma(p);
    const complex<double> z(1.0 / bath.omega_c, -tau);
    const complex<double> vacuum = std::pow(z, -p);
    c.antisymmetric = prefactor * vacuum.imag();
    if (bath.kT == 0.0) {
        c.symmetric = prefactor * vacuum.real();
        return c;
    }
    const double beta = 1.0 / bath.kT;
    c.symmetric = prefactor * (vacuum + 2.0 * image_tail(z, beta, p, 1)).real();
    return c;
}

BathCorrelation bath_correlation(const DiscreteModes& modes, double tau)
{
    BathCorrelation c;
    for (const BathMode& m : modes.modes) {
        c.symmetric += m.coupling_sq * thermal_factor(m.omega, modes.kT) * std::cos(m.omega * tau);
        c.antisymmetric += m.coupling_sq * std::sin(m.omega * tau);
    }
    return c;
}

BathCorrelation bath_correlation(const Environment& env, double tau)
{
    return std::visit([tau](const auto& e) { return bath_correlation(e, tau); }, env);
}

}  // namespace qdecoh
