// Scenario runner behind the qdecoh command-line tool: table and figure
// data as CSV, plus one-parameter sweeps.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <qdecoh/bath.hpp>
#include <qdecoh/magnus.hpp>
#include <qdecoh/system_models.hpp>

namespace qdecoh::tools {

enum class Scheme { short_time, magnus, both };

/// Raised for inconsistent or out-of-range settings (exit status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    Scheme scheme = Scheme::both;
    std::string model;  // adiabatic | rotating_wave; empty picks the command default
    double a = 1.0;
    std::optional<double> c;  // command default: a for fig1, 15a for fig3

    double J = 1e-6;
    double n = 1.0;
    double omega_c = 30.0;
    double kT = 0.0;

    std::optional<double> theta;  // command default state when unset
    double phi = 0.0;
    bool random_state = false;
    unsigned long long seed = 1;

    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<int> points;

    std::string coupling = "sz";
    QuadratureSpec quadrature;
    int workers = 1;

    // fig4 amplitude grid (in units of a) and sweep axis
    double c_start = 1.0;
    double c_end = 30.0;
    int c_points = 30;
    std::string sweep_param;
    double sweep_start = 0.0;
    double sweep_end = 0.0;
    int sweep_points = 1;
    bool include_diagonal = false;

    void validate() const;
};

/// Off-diagonal magnitude of the default table1 state: fitted so the n = 1
/// reference measure 3.48431e-6 is reproduced.
inline constexpr double kTable1Coherence = 0.256069;

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

/// Time grid t_start + k (t_end - t_start)/(points - 1).
std::vector<double> time_grid(double t_start, double t_end, int points);

struct Table1Row {
    int n;
    double measure_short_time;
    double measure_magnus;
    double deviation;  // |short - magnus|
    double ratio_short_time;
    double ratio_magnus;
};
std::vector<Table1Row> table1_rows(const ScenarioConfig& cfg);

/// (t, short, magnus) with population deviation (fig1) or lambda-norm (fig3).
struct SeriesRow {
    double x;
    double short_time;
    double magnus;
};
std::vector<SeriesRow> fig1_rows(const ScenarioConfig& cfg);
std::vector<SeriesRow> fig3_rows(const ScenarioConfig& cfg);

/// Re D_{x x'} for the ordered pairs listed by `pairs`.
struct TableRow {
    double x;
    std::vector<double> re_d;
};
std::vector<std::pair<int, int>> diagnostic_pairs(bool include_diagonal);
std::vector<TableRow> fig2_rows(const ScenarioConfig& cfg);
std::vector<TableRow> fig4_rows(const ScenarioConfig& cfg);

struct SweepRow {
    int index;
    double value;
    double measure_short_time;
    double measure_magnus;
    double population_short_time;
    double population_magnus;
};
std::vector<SweepRow> sweep_rows(const ScenarioConfig& cfg);

/// Runs `command` (table1, fig1, fig2, fig3, fig4, sweep) and writes CSV
/// with a leading comment block echoing the resolved configuration.
void run_command(const std::string& command, const ScenarioConfig& cfg, std::ostream& out);

}  // namespace qdecoh::tools
