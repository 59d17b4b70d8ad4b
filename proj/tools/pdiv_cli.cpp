// Scenario runner: emits a trajectory CSV and a summary JSON, or a sweep CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdiv/errors.hpp"
#include "pdiv/scenario.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Divisibility and information-flow diagnostics for qubit dynamics"};

    std::string config_path;
    std::optional<std::string> scenario;
    std::vector<std::string> params;
    std::optional<double> t_max, chi, xi, mu, tol;
    std::optional<std::size_t> steps;
    std::optional<std::string> out_dir;
    std::optional<std::string> sweep;

    app.add_option("config", config_path, "JSON scenario configuration")->check(CLI::ExistingFile);
    app.add_option("--scenario", scenario, "unitary | pauli | pauli_hamiltonian | remark4 | covariant_example4 | custom");
    app.add_option("--param", params, "scenario parameter key=value (repeatable)");
    app.add_option("--t-max", t_max, "final time");
    app.add_option("--steps", steps, "number of grid steps");
    app.add_option("--chi", chi, "polar angle of the measurement basis");
    app.add_option("--xi", xi, "azimuthal angle of the measurement basis");
    app.add_option("--mu", mu, "prior weight of the first state");
    app.add_option("--tol", tol, "divisibility tolerance");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_option("--sweep", sweep, "key:start:stop:count");

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json doc = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            doc = nlohmann::json::parse(in);
        }
        if (scenario) {
            doc["scenario"] = *scenario;
            if (!config_path.empty() && doc.contains("params")) {
                doc.erase("params");
            }
        }
        pdiv::ScenarioConfig config = pdiv::parse_config(doc);
        for (const std::string& p : params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw pdiv::ConfigError("--param expects key=value, got '" + p + "'");
            }
            pdiv::apply_override(config, p.substr(0, eq), p.substr(eq + 1));
        }
        if (t_max) {
            config.t_max = *t_max;
        }
        if (steps) {
            config.steps = *steps;
        }
        if (chi) {
            config.chi = *chi;
        }
        if (xi) {
            config.xi = *xi;
        }
        if (mu) {
            config.mu = *mu;
        }
        if (tol) {
            config.tol = *tol;
        }
        if (out_dir) {
            config.out_dir = *out_dir;
        }
        pdiv::validate(config);
        if (sweep) {
            return pdiv::sweep_to_files(config, pdiv::parse_sweep(*sweep), std::cerr);
        }
        return pdiv::run_to_files(config, std::cerr);
    } catch (const pdiv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
}
