// qdecoh: CSV data for the decoherence tables and figures, and sweeps.
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <qdecoh/oracles.hpp>
#include <qdecoh/quadrature.hpp>

#include "runner.hpp"

namespace {

template <class T>
void set_if(std::optional<T>& dst, const std::optional<T>& src)
{
    if (src) dst = src;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace qdecoh::tools;

    CLI::App app{"Qubit decoherence under a bosonic bath: short-time and Magnus schemes"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "key = value settings file; command-line flags take precedence");

    ScenarioConfig cfg;
    std::string scheme = "both";
    std::string out_path;
    std::optional<double> c, theta, t_start, t_end;
    std::optional<int> points;

    app.add_option("--scheme", scheme, "short_time | magnus | both")->check(CLI::IsMember({"short_time", "magnus", "both"}));
    app.add_option("--model", cfg.model, "adiabatic | rotating_wave (default per command)")
        ->check(CLI::IsMember({"adiabatic", "rotating_wave"}));
    app.add_option("--a", cfg.a, "qubit splitting a");
    app.add_option("--c", c, "drive amplitude c (fig1 default a, fig3 default 15a)");
    app.add_option("--J", cfg.J, "spectral strength");
    app.add_option("--n", cfg.n, "spectral exponent");
    app.add_option("--omega-c,--omega_c", cfg.omega_c, "bath cutoff frequency");
    app.add_option("--kT,--kt", cfg.kT, "bath temperature (energy units)");
    app.add_option("--t-start,--t_start", t_start, "first time point");
    app.add_option("--t-end,--t_end", t_end, "last time point (fixed time for table1, fig4)");
    app.add_option("--points", points, "number of time points");
    app.add_option("--theta", theta, "initial-state polar angle");
    app.add_option("--phi", cfg.phi, "initial-state azimuth");
    app.add_flag("--random-state,--random_state", cfg.random_state, "draw the initial state from --seed");
    app.add_option("--seed", cfg.seed, "seed for --random-state");
    app.add_option("--coupling", cfg.coupling, "sz | sx | sy")->check(CLI::IsMember({"sz", "sx", "sy"}));
    app.add_option("--rel-tol,--rel_tol", cfg.quadrature.rel_tol, "quadrature relative tolerance");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--workers", cfg.workers, "worker threads");
    app.add_option("--c-start,--c_start", cfg.c_start, "fig4: first c/a");
    app.add_option("--c-end,--c_end", cfg.c_end, "fig4: last c/a");
    app.add_option("--c-points,--c_points", cfg.c_points, "fig4: number of c values");
    app.add_flag("--include-diagonal,--include_diagonal", cfg.include_diagonal,
                 "fig2/fig4: also emit the identically zero x = x' entries");

    app.add_subcommand("table1", "measure at fixed time for n = 1, 2, 3 (adiabatic)");
    app.add_subcommand("fig1", "population deviation vs t, rotating wave, c = a");
    app.add_subcommand("fig2", "Re D for every index pair vs t");
    app.add_subcommand("fig3", "deviation measure vs t, rotating wave, c = 15a");
    app.add_subcommand("fig4", "Re D at fixed t vs drive amplitude c");
    auto* sweep = app.add_subcommand("sweep", "measures along one parameter axis");
    sweep->add_option("--param", cfg.sweep_param, "J | n | omega_c | kT | a | c | t")
        ->required()
        ->check(CLI::IsMember({"J", "n", "omega_c", "kT", "a", "c", "t"}));
    sweep->add_option("--start", cfg.sweep_start, "first value")->required();
    sweep->add_option("--end", cfg.sweep_end, "last value")->required();
    sweep->add_option("--count", cfg.sweep_points, "number of values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        cfg.scheme = parse_scheme(scheme);
        set_if(cfg.c, c);
        set_if(cfg.theta, theta);
        set_if(cfg.t_start, t_start);
        set_if(cfg.t_end, t_end);
        set_if(cfg.points, points);
        cfg.quadrature.validate();
        cfg.validate();

        const std::string command = app.get_subcommands().front()->get_name();
        if (out_path.empty()) {
            run_command(command, cfg, std::cout);
        } else {
            std::ofstream file(out_path);
            if (!file) throw ConfigError("cannot open " + out_path);
            run_command(command, cfg, file);
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const qdecoh::QuadratureFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const qdecoh::ConvergenceFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
