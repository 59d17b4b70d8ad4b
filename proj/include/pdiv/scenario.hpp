#pragma once

// Named dynamics, scenario configuration and the trajectory/summary emitter behind the CLI.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdiv/channels.hpp"
#include "pdiv/generators.hpp"

namespace pdiv {

// H = (omega / 2) axis . sigma, axis normalised.
GeneratorSpec unitary_generator(double omega, const Vec3& axis);

enum class RatePreset { constant, exponential };

// gamma_k(t) = gamma_k (constant) or gamma_k e^{-t} (exponential).
Vec3 pauli_rates(const Vec3& gammas, RatePreset preset, double t);
GeneratorSpec pauli_generator(const Vec3& gammas, RatePreset preset);
// exp of the integrated generator (Pauli generators commute at different times).
QubitChannel pauli_closed_form(const Vec3& gammas, RatePreset preset, double t);

// Symmetric piecewise Bloch generator, switching at t = pi, whose integral commutes with it.
BlochGenerator remark_bloch(double t);
GeneratorSpec remark_generator();
// exp(int_0^t L(s) ds)
QubitChannel remark_closed_form(double t);

struct ScenarioConfig {
    std::string scenario = "covariant_example4";
    std::map<std::string, double> params;
    std::string rates = "constant";
    double t_max = 10.0;
    std::size_t steps = 10000;
    double chi = 0.0;
    double xi = 0.0;
    double mu = 0.5;
    double tol = 1e-9;
    double singular_tol = 1e-9;
    double backflow_tol = 1e-6;
    std::string out_dir = ".";
    std::string trajectory_file = "trajectory.csv";
    std::string summary_file = "summary.json";
    std::string method = "auto";  // auto | closed_form | timesplitting | ode
    std::size_t substeps = 4;
};

const std::vector<std::string>& scenario_names();
// Parameter names accepted by a scenario (numeric unless the name is "rates").
const std::vector<std::string>& scenario_params(const std::string& scenario);
// Top-level and nested keys accepted in a configuration document.
const std::map<std::string, std::vector<std::string>>& config_keys();

// Throws ConfigError on unknown keys, wrong types or out-of-range values.
ScenarioConfig parse_config(const nlohmann::json& doc);
void validate(const ScenarioConfig& config);
nlohmann::json to_json(const ScenarioConfig& config);

// Sets a top-level field (t_max, steps, chi, xi, mu, tol) or a scenario parameter.
void apply_override(ScenarioConfig& config, const std::string& key, const std::string& value);

struct TrajectoryRow {
    double t;
    double t00;
    std::optional<double> f;
    double det;
    double iq;
    double icl;
    double ccoh;
    double cl1_p;
    double cl1_q;
    double eigmin_k;
    double p_margin;
    double cp_margin;
};

struct RunResult {
    std::vector<TrajectoryRow> rows;
    nlohmann::json summary;
    bool all_singular = false;
};

RunResult run_scenario(const ScenarioConfig& config);

extern const char* const kTrajectoryHeader;
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

struct SweepSpec {
    std::string key;
    double start;
    double stop;
    std::size_t count;

    std::vector<double> values() const;
};

// key:start:stop:count
SweepSpec parse_sweep(const std::string& text);

struct SweepRow {
    double value;
    nlohmann::json summary;
};

// One run per value, in parallel; rows come back in sweep order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep);
void write_sweep_csv(std::ostream& out, const std::string& key, const std::vector<SweepRow>& rows);

// Runs a configuration and writes its files; returns the process exit code.
int run_to_files(const ScenarioConfig& config, std::ostream& err);
int sweep_to_files(const ScenarioConfig& config, const SweepSpec& sweep, std::ostream& err);

} // namespace pdiv
