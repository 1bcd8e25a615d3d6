#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include <qdecoh/measures.hpp>
#include <qdecoh/short_time.hpp>

namespace qdecoh::tools {

namespace {

std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

// Runs body(i) for i in [0, count) on up to `workers` threads; the first
// exception is rethrown after all workers finish.
template <class F>
void parallel_for(std::size_t count, int workers, F&& body)
{
    const auto nthreads = static_cast<std::size_t>(std::max(1, std::min<int>(workers, static_cast<int>(count))));
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nthreads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

CouplingOperator coupling_of(const ScenarioConfig& cfg)
{
    if (cfg.coupling == "sz") return CouplingOperator::along(Axis::z);
    if (cfg.coupling == "sx") return CouplingOperator::along(Axis::x);
    if (cfg.coupling == "sy") return CouplingOperator::along(Axis::y);
    throw ConfigError("coupling must be one of sz, sx, sy");
}

BathSpectrum bath_of(const ScenarioConfig& cfg, double n)
{
    return BathSpectrum{cfg.J, n, cfg.omega_c, cfg.kT};
}

GateModel model_of(const ScenarioConfig& cfg, const std::string& fallback, double c_default)
{
    const std::string name = cfg.model.empty() ? fallback : cfg.model;
    if (name == "adiabatic") return GateModel::adiabatic(cfg.a);
    if (name == "rotating_wave") return GateModel::rotating_wave(cfg.a, cfg.c.value_or(c_default));
    throw ConfigError("model must be adiabatic or rotating_wave");
}

InitialState state_of(const ScenarioConfig& cfg, double theta_default)
{
    if (cfg.random_state) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double theta = std::acos(1.0 - 2.0 * u(rng));
        const double phi = 2.0 * std::numbers::pi * u(rng);
        return InitialState::pure(theta, phi);
    }
    return InitialState::pure(cfg.theta.value_or(theta_default), cfg.phi);
}

std::vector<double> grid_of(const ScenarioConfig& cfg, double start, double end, int points)
{
    return time_grid(cfg.t_start.value_or(start), cfg.t_end.value_or(end), cfg.points.value_or(points));
}

struct Deviations {
    QubitOperator short_time = QubitOperator::Zero();
    QubitOperator magnus = QubitOperator::Zero();
};

// chi = rho_S - rho_C for each requested scheme
Deviations deviations_at(const ScenarioConfig& cfg, const GateModel& model, const CouplingOperator& s,
                         const Environment& env, const InitialState& rho0, double t)
{
    Deviations d;
    const QubitOperator u = ideal_propagator(model, t);
    if (cfg.scheme != Scheme::magnus)
        d.short_time = short_time_deviation_channel(u, s, short_time_table(s, env, t, cfg.quadrature)).apply(rho0.density());
    if (cfg.scheme != Scheme::short_time)
        d.magnus = magnus_deviation_channel(u, magnus_decoherence_table(model, s, env, t, cfg.quadrature))
                       .apply(rho0.density());
    return d;
}

std::vector<SeriesRow> series(const ScenarioConfig& cfg, double c_default, bool population)
{
    const GateModel model = model_of(cfg, "rotating_wave", c_default);
    const CouplingOperator s = coupling_of(cfg);
    const Environment env = bath_of(cfg, cfg.n);
    const InitialState rho0 = state_of(cfg, 0.0);
    const std::vector<double> grid = grid_of(cfg, 0.0, 6.0, 61);
    std::vector<SeriesRow> rows(grid.size());
    parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
        const Deviations d = deviations_at(cfg, model, s, env, rho0, grid[i]);
        const auto value = [&](const QubitOperator& chi) {
            return population ? deviation_from_chi(chi).population_deviation : lambda_norm(chi);
        };
        rows[i] = {grid[i], value(d.short_time), value(d.magnus)};
    });
    return rows;
}

std::vector<double> re_pairs(const MagnusDecoherenceTable& d, const std::vector<std::pair<int, int>>& pairs)
{
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [i, j] : pairs) out.push_back(d.D(i, j).real());
    return out;
}

void echo_config(const std::string& command, const ScenarioConfig& cfg, std::ostream& out)
{
    const auto opt = [](const auto& v) { return v ? fmt(static_cast<double>(*v)) : std::string("default"); };
    out << "# qdecoh " << command << "\n"
        << "# scheme = " << scheme_name(cfg.scheme) << "\n"
        << "# model = " << (cfg.model.empty() ? "default" : cfg.model) << "\n"
        << "# a = " << fmt(cfg.a) << "\n"
        << "# c = " << opt(cfg.c) << "\n"
        << "# J = " << fmt(cfg.J) << "\n"
        << "# n = " << fmt(cfg.n) << "\n"
        << "# omega_c = " << fmt(cfg.omega_c) << "\n"
        << "# kT = " << fmt(cfg.kT) << "\n"
        << "# theta = " << opt(cfg.theta) << "\n"
        << "# phi = " << fmt(cfg.phi) << "\n"
        << "# random_state = " << (cfg.random_state ? "true" : "false") << "\n"
        << "# seed = " << cfg.seed << "\n"
        << "# t_start = " << opt(cfg.t_start) << "\n"
        << "# t_end = " << opt(cfg.t_end) << "\n"
        << "# points = " << (cfg.points ? std::to_string(*cfg.points) : std::string("default")) << "\n"
        << "# coupling = " << cfg.coupling << "\n"
        << "# rel_tol = " << fmt(cfg.quadrature.rel_tol) << "\n"
        << "# c_start = " << fmt(cfg.c_start) << "\n"
        << "# c_end = " << fmt(cfg.c_end) << "\n"
        << "# c_points = " << cfg.c_points << "\n";
    if (command == "sweep")
        out << "# sweep_param = " << cfg.sweep_param << "\n"
            << "# sweep_start = " << fmt(cfg.sweep_start) << "\n"
            << "# sweep_end = " << fmt(cfg.sweep_end) << "\n"
            << "# sweep_points = " << cfg.sweep_points << "\n";
}

void write_series(const std::vector<SeriesRow>& rows, Scheme scheme, const std::string& what, std::ostream& out)
{
    out << "t";
    if (scheme != Scheme::magnus) out << "," << what << "_short_time";
    if (scheme != Scheme::short_time) out << "," << what << "_magnus";
    out << "\n";
    for (const SeriesRow& r : rows) {
        out << fmt(r.x);
        if (scheme != Scheme::magnus) out << "," << fmt(r.short_time);
        if (scheme != Scheme::short_time) out << "," << fmt(r.magnus);
        out << "\n";
    }
}

void write_table(const std::vector<TableRow>& rows, const std::string& axis, bool include_diagonal,
                 std::ostream& out)
{
    out << axis;
    for (const auto& [i, j] : diagnostic_pairs(include_diagonal))
        out << ",ReD[" << chain_label(i) << "|" << chain_label(j) << "]";
    out << ",band_max\n";
    for (const TableRow& r : rows) {
        out << fmt(r.x);
        double band = 0.0;
        for (double v : r.re_d) {
            out << "," << fmt(v);
            band = std::max(band, std::abs(v));
        }
        out << "," << fmt(band) << "\n";
    }
}

}  // namespace

void ScenarioConfig::validate() const
{
    const auto positive = [](double v, const char* what) {
        if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be > 0");
    };
    positive(a, "a");
    if (c && !(*c >= 0.0)) throw ConfigError("c must be >= 0");
    if (!(J >= 0.0)) throw ConfigError("J must be >= 0");
    positive(n, "n");
    positive(omega_c, "omega_c");
    if (!(kT >= 0.0)) throw ConfigError("kT must be >= 0");
    if (points && *points < 1) throw ConfigError("points must be >= 1");
    if (t_start && !(*t_start >= 0.0)) throw ConfigError("t_start must be >= 0");
    if (t_start && t_end && !(*t_end >= *t_start)) throw ConfigError("t_end must be >= t_start");
    if (!(quadrature.rel_tol > 0.0)) throw ConfigError("rel_tol must be > 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (c_points < 1) throw ConfigError("c_points must be >= 1");
    if (!(c_start >= 0.0 && c_end >= c_start)) throw ConfigError("need 0 <= c_start <= c_end");
    if (sweep_points < 1) throw ConfigError("sweep_points must be >= 1");
    if (coupling != "sz" && coupling != "sx" && coupling != "sy") throw ConfigError("coupling must be sz, sx or sy");
    if (!model.empty() && model != "adiabatic" && model != "rotating_wave")
        throw ConfigError("model must be adiabatic or rotating_wave");
}

std::string scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::short_time: return "short_time";
    case Scheme::magnus: return "magnus";
    case Scheme::both: return "both";
    }
    return "both";
}

Scheme parse_scheme(const std::string& s)
{
    if (s == "short_time") return Scheme::short_time;
    if (s == "magnus") return Scheme::magnus;
    if (s == "both") return Scheme::both;
    throw ConfigError("scheme must be short_time, magnus or both");
}

std::vector<double> time_grid(double t_start, double t_end, int points)
{
    if (points < 1) throw ConfigError("points must be >= 1");
    if (!(t_start >= 0.0 && t_end >= t_start)) throw ConfigError("need 0 <= t_start <= t_end");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        g[static_cast<std::size_t>(k)] = points == 1 ? t_start : t_start + (t_end - t_start) * k / (points - 1);
    return g;
}

std::vector<Table1Row> table1_rows(const ScenarioConfig& cfg)
{
    const GateModel model = model_of(cfg, "adiabatic", 0.0);
    if (!model.commutes_with(sigma_z(), 1.0)) throw ConfigError("table1 needs the adiabatic model");
    const CouplingOperator s = coupling_of(cfg);
    const InitialState rho0 = state_of(cfg, std::asin(2.0 * kTable1Coherence));
    const double t = cfg.t_end.value_or(1.0);
    std::vector<Table1Row> rows(3);
    parallel_for(3, cfg.workers, [&](std::size_t i) {
        const int n = static_cast<int>(i) + 1;
        const Deviations d = deviations_at(cfg, model, s, bath_of(cfg, n), rho0, t);
        rows[i] = {n, lambda_norm(d.short_time), lambda_norm(d.magnus), 0.0, 0.0, 0.0};
        rows[i].deviation = std::abs(rows[i].measure_short_time - rows[i].measure_magnus);
    });
    for (Table1Row& r : rows) {
        r.ratio_short_time = r.measure_short_time / rows[0].measure_short_time;
        r.ratio_magnus = r.measure_magnus / rows[0].measure_magnus;
    }
    return rows;
}

std::vector<SeriesRow> fig1_rows(const ScenarioConfig& cfg) { return series(cfg, cfg.a, true); }

std::vector<SeriesRow> fig3_rows(const ScenarioConfig& cfg) { return series(cfg, 15.0 * cfg.a, false); }

std::vector<std::pair<int, int>> diagnostic_pairs(bool include_diagonal)
{
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j)
            if (include_diagonal || i != j) pairs.emplace_back(i, j);
    return pairs;
}

std::vector<TableRow> fig2_rows(const ScenarioConfig& cfg)
{
    const GateModel model = model_of(cfg, "rotating_wave", cfg.a);
    const CouplingOperator s = coupling_of(cfg);
    const Environment env = bath_of(cfg, cfg.n);
    const std::vector<double> grid = grid_of(cfg, 0.0, 10.0, 101);
    const auto pairs = diagnostic_pairs(cfg.include_diagonal);
    std::vector<TableRow> rows(grid.size());
    parallel_for(grid.size(), cfg.workers, [&](std::size_t i) {
        rows[i] = {grid[i], re_pairs(magnus_decoherence_table(model, s, env, grid[i], cfg.quadrature), pairs)};
    });
    return rows;
}

std::vector<TableRow> fig4_rows(const ScenarioConfig& cfg)
{
    const CouplingOperator s = coupling_of(cfg);
    const Environment env = bath_of(cfg, cfg.n);
    const double t = cfg.t_end.value_or(1.0);
    const auto pairs = diagnostic_pairs(cfg.include_diagonal);
    const std::vector<double> amps = time_grid(cfg.c_start, cfg.c_end, cfg.c_points);
    std::vector<TableRow> rows(amps.size());
    parallel_for(amps.size(), cfg.workers, [&](std::size_t i) {
        const double c = amps[i] * cfg.a;
        const GateModel model = GateModel::rotating_wave(cfg.a, c);
        rows[i] = {c, re_pairs(magnus_decoherence_table(model, s, env, t, cfg.quadrature), pairs)};
    });
    return rows;
}

std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg)
{
    static const std::vector<std::string> axes{"J", "n", "omega_c", "kT", "a", "c", "t"};
    if (std::find(axes.begin(), axes.end(), cfg.sweep_param) == axes.end())
        throw ConfigError("sweep parameter must be one of J, n, omega_c, kT, a, c, t");
    // symmetric in (start, end), so a reversed sweep visits bit-identical values
    std::vector<double> values(static_cast<std::size_t>(cfg.sweep_points), cfg.sweep_start);
    for (int k = 1; k < cfg.sweep_points; ++k) {
        const double m = cfg.sweep_points - 1;
        values[static_cast<std::size_t>(k)] = (cfg.sweep_start * (m - k) + cfg.sweep_end * k) / m;
    }
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), cfg.workers, [&](std::size_t i) {
        ScenarioConfig point = cfg;
        double t = cfg.t_end.value_or(1.0);
        const double v = values[i];
        if (cfg.sweep_param == "J") point.J = v;
        else if (cfg.sweep_param == "n") point.n = v;
        else if (cfg.sweep_param == "omega_c") point.omega_c = v;
        else if (cfg.sweep_param == "kT") point.kT = v;
        else if (cfg.sweep_param == "a") point.a = v;
        else if (cfg.sweep_param == "c") point.c = v;
        else t = v;
        point.validate();
        const GateModel model = model_of(point, "rotating_wave", point.a);
        const CouplingOperator s = coupling_of(point);
        const InitialState rho0 = state_of(point, 0.0);
        const Deviations d = deviations_at(point, model, s, bath_of(point, point.n), rho0, t);
        rows[i] = {static_cast<int>(i), v, lambda_norm(d.short_time), lambda_norm(d.magnus),
                   d.short_time(0, 0).real(), d.magnus(0, 0).real()};
    });
    return rows;
}

void run_command(const std::string& command, const ScenarioConfig& cfg, std::ostream& out)
{
    cfg.validate();
    if (command == "table1") {
        const auto rows = table1_rows(cfg);
        echo_config(command, cfg, out);
        out << "n,measure_short_time,measure_magnus,deviation,ratio_short_time,ratio_magnus\n";
        for (const Table1Row& r : rows)
            out << r.n << "," << fmt(r.measure_short_time) << "," << fmt(r.measure_magnus) << "," << fmt(r.deviation)
                << "," << fmt(r.ratio_short_time) << "," << fmt(r.ratio_magnus) << "\n";
    } else if (command == "fig1") {
        const auto rows = fig1_rows(cfg);
        echo_config(command, cfg, out);
        write_series(rows, cfg.scheme, "population_deviation", out);
    } else if (command == "fig3") {
        const auto rows = fig3_rows(cfg);
        echo_config(command, cfg, out);
        write_series(rows, cfg.scheme, "measure", out);
    } else if (command == "fig2") {
        const auto rows = fig2_rows(cfg);
        echo_config(command, cfg, out);
        write_table(rows, "t", cfg.include_diagonal, out);
    } else if (command == "fig4") {
        const auto rows = fig4_rows(cfg);
        echo_config(command, cfg, out);
        write_table(rows, "c", cfg.include_diagonal, out);
    } else if (command == "sweep") {
        const auto rows = sweep_rows(cfg);
        echo_config(command, cfg, out);
        out << "index," << cfg.sweep_param
            << ",measure_short_time,measure_magnus,population_deviation_short_time,population_deviation_magnus\n";
        for (const SweepRow& r : rows)
            out << r.index << "," << fmt(r.value) << "," << fmt(r.measure_short_time) << "," << fmt(r.measure_magnus)
                << "," << fmt(r.population_short_time) << "," << fmt(r.population_magnus) << "\n";
    } else {
        throw ConfigError("unknown command " + command);
    }
}

}  // namespace qdecoh::tools
