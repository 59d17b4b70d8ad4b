#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pdiv/errors.hpp"
#include "pdiv/numerics.hpp"
#include "pdiv/scenario.hpp"

using namespace pdiv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("pdiv_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioConfig config_of(const json& doc)
{
    return parse_config(doc);
}

int run_cli(const std::string& args, const fs::path& err_file)
{
    const std::string cmd = std::string(PDIV_CLI_PATH) + " " + args + " 2> " + err_file.string() + " > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::set<std::string> keys_of(const json& object)
{
    std::set<std::string> out;
    for (const auto& item : object.items()) {
        out.insert(item.key());
    }
    return out;
}

} // namespace

TEST(Config, Defaults)
{
    const ScenarioConfig c = config_of(json::object());
    EXPECT_EQ(c.scenario, "covariant_example4");
    EXPECT_EQ(c.steps, 10000u);
    EXPECT_DOUBLE_EQ(c.t_max, 10.0);
    EXPECT_DOUBLE_EQ(c.mu, 0.5);
}

TEST(Config, ParsesNestedSections)
{
    const ScenarioConfig c = config_of(json::parse(R"({
        "scenario": "pauli", "params": {"gamma1": 0.5, "rates": "exponential"},
        "grid": {"t_max": 3, "steps": 30}, "basis": {"chi": 0.25, "xi": 1.5}, "mu": 0.3,
        "tolerances": {"divisibility": 1e-8, "singular": 1e-7, "backflow": 1e-5},
        "output": {"dir": "out", "trajectory": "a.csv", "summary": "b.json"},
        "propagator": {"method": "ode", "substeps": 8}})"));
    EXPECT_EQ(c.scenario, "pauli");
    EXPECT_DOUBLE_EQ(c.params.at("gamma1"), 0.5);
    EXPECT_EQ(c.rates, "exponential");
    EXPECT_EQ(c.steps, 30u);
    EXPECT_DOUBLE_EQ(c.chi, 0.25);
    EXPECT_DOUBLE_EQ(c.singular_tol, 1e-7);
    EXPECT_EQ(c.trajectory_file, "a.csv");
    EXPECT_EQ(c.method, "ode");
    EXPECT_EQ(c.substeps, 8u);
    EXPECT_EQ(to_json(config_of(to_json(c))), to_json(c));
}

TEST(Config, RejectsInvalidDocuments)
{
    for (const char* text : {R"({"foo": 1})", R"({"grid": {"dt": 0.1}})", R"({"params": {"gamma1": 1}})",
                             R"({"scenario": "pauli", "params": {"rates": "linear"}})", R"({"scenario": "nope"})",
                             R"({"grid": {"steps": 0}})", R"({"grid": {"steps": 2.5}})", R"({"mu": 1.5})",
                             R"({"basis": {"chi": "x"}})", R"({"propagator": {"method": "euler"}})",
                             R"({"grid": {"t_max": -1}})", R"([1, 2])"}) {
        EXPECT_THROW(config_of(json::parse(text)), ConfigError) << text;
    }
}

TEST(Config, Overrides)
{
    ScenarioConfig c = config_of(json::object());
    apply_override(c, "C", "1.64");
    apply_override(c, "chi", "0.5");
    apply_override(c, "steps", "20");
    EXPECT_DOUBLE_EQ(c.params.at("C"), 1.64);
    EXPECT_DOUBLE_EQ(c.chi, 0.5);
    EXPECT_EQ(c.steps, 20u);
    apply_override(c, "gamma1", "1");
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_THROW(apply_override(c, "C", "abc"), ConfigError);
}

TEST(Config, SchemaMatchesParser)
{
    std::ifstream in(PDIV_SCHEMA_PATH);
    ASSERT_TRUE(in.good());
    const json schema = json::parse(in);
    const auto& keys = config_keys();
    const json& props = schema.at("properties");
    EXPECT_EQ(keys_of(props), std::set<std::string>(keys.at("").begin(), keys.at("").end()));
    EXPECT_FALSE(schema.at("additionalProperties").get<bool>());
    for (const auto& [section, names] : keys) {
        if (section.empty()) {
            continue;
        }
        EXPECT_EQ(keys_of(props.at(section).at("properties")), std::set<std::string>(names.begin(), names.end()))
            << section;
        EXPECT_FALSE(props.at(section).at("additionalProperties").get<bool>());
    }
    const auto& names = scenario_names();
    EXPECT_EQ(props.at("scenario").at("enum").get<std::vector<std::string>>(), names);
    for (const std::string& s : names) {
        const json& p = schema.at("$defs").at("params_" + s);
        const auto& expected = scenario_params(s);
        EXPECT_EQ(keys_of(p.at("properties")), std::set<std::string>(expected.begin(), expected.end())) << s;
    }
}

TEST(Sweep, ParsesSpec)
{
    const SweepSpec s = parse_sweep("C:0:2:41");
    EXPECT_EQ(s.key, "C");
    const auto v = s.values();
    ASSERT_EQ(v.size(), 41u);
    EXPECT_DOUBLE_EQ(v[30], 1.5);
    EXPECT_DOUBLE_EQ(v.back(), 2.0);
    for (const char* bad : {"C:0:2", ":0:1:3", "C:0:2:0", "C:0:2:2.5", "C:a:2:3"}) {
        EXPECT_THROW(parse_sweep(bad), ConfigError) << bad;
    }
}

TEST(Run, PauliConstantRates)
{
    ScenarioConfig c;
    c.scenario = "pauli";
    c.params = {{"gamma1", 1.0}, {"gamma2", 1.0}, {"gamma3", 1.0}};
    c.t_max = 3.0;
    c.steps = 600;
    c.chi = 0.7;
    c.xi = 0.2;
    const RunResult r = run_scenario(c);
    const json& s = r.summary;
    EXPECT_TRUE(s["quantum_p_div"]["divisible"].get<bool>());
    EXPECT_TRUE(s["quantum_cp_div"]["divisible"].get<bool>());
    EXPECT_TRUE(s["classical_p_div"]["divisible"].get<bool>());
    EXPECT_TRUE(s["classical_p_div"]["invertible"].get<bool>());
    EXPECT_TRUE(s["classical_p_div"]["generator_kolmogorov"].get<bool>());
    EXPECT_NEAR(s["classical_p_div"]["max_f_t"].get<double>(), -1.0, 1e-8);
    EXPECT_TRUE(s["revivals"]["quantum"].empty());
    EXPECT_TRUE(s["revivals"]["classical"].empty());
    for (const TrajectoryRow& row : r.rows) {
        EXPECT_NEAR(*row.f, -1.0, 1e-8);
        EXPECT_NEAR(row.eigmin_k, 1.0, 1e-12);
    }
}

TEST(Run, InvertibleWithoutClassicalDivisibility)
{
    ScenarioConfig c;
    c.params = {{"C", 1.5}};
    c.chi = kPi / 2;
    c.xi = kPi / 4;
    const RunResult r = run_scenario(c);
    const json& s = r.summary;
    EXPECT_TRUE(s["quantum_p_div"]["divisible"].get<bool>());
    EXPECT_FALSE(s["quantum_cp_div"]["divisible"].get<bool>());
    EXPECT_FALSE(s["classical_p_div"]["divisible"].get<bool>());
    EXPECT_TRUE(s["classical_p_div"]["invertible"].get<bool>());
    EXPECT_EQ(s["classical_p_div"]["invertible_intervals"].size(), 1u);
    EXPECT_FALSE(s["revivals"]["classical"].empty());
    EXPECT_TRUE(s["revivals"]["quantum"].empty());
}

TEST(Run, ClassicallyDivisibleWithQuantumBackflow)
{
    ScenarioConfig c;
    c.params = {{"C", 1.64}};
    c.chi = kPi / 2;
    c.xi = kPi / 8;
    const json s = run_scenario(c).summary;
    const double max_f = s["classical_p_div"]["max_f_t"].get<double>();
    EXPECT_GE(max_f, -0.009);
    EXPECT_LE(max_f, -0.003);
    EXPECT_TRUE(s["classical_p_div"]["divisible"].get<bool>());
    EXPECT_FALSE(s["quantum_p_div"]["divisible"].get<bool>());
    EXPECT_FALSE(s["revivals"]["quantum"].empty());
}

TEST(Run, SummaryMatchesLibraryVerdicts)
{
    ScenarioConfig c;
    c.scenario = "pauli";
    c.params = {{"gamma1", 0.2}, {"gamma2", 1.0}, {"gamma3", -0.1}};
    c.t_max = 2.0;
    c.steps = 200;
    const RunResult r = run_scenario(c);
    const GeneratorSpec g = pauli_generator(Vec3(0.2, 1.0, -0.1), RatePreset::constant);
    const GridVerdict p = p_div_over_grid(g, uniform_grid(2.0, 200), c.tol);
    const GridVerdict cp = cp_div_over_grid(g, uniform_grid(2.0, 200), c.tol);
    EXPECT_EQ(r.summary["quantum_p_div"]["divisible"].get<bool>(), p.divisible);
    EXPECT_EQ(r.summary["quantum_cp_div"]["divisible"].get<bool>(), cp.divisible);
    EXPECT_DOUBLE_EQ(r.summary["quantum_cp_div"]["worst_margin"].get<double>(), cp.worst_margin);
    EXPECT_TRUE(p.divisible);
    EXPECT_FALSE(cp.divisible);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        EXPECT_DOUBLE_EQ(r.rows[k].p_margin, p.margins[k]);
    }
}

TEST(Output, CsvFormat)
{
    ScenarioConfig c;
    c.scenario = "unitary";
    c.chi = kPi / 2;
    c.t_max = 2 * kPi;
    c.steps = 400;
    const RunResult r = run_scenario(c);
    std::ostringstream out;
    write_trajectory_csv(out, r.rows);
    const std::string text = out.str();
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "t,T00,f_t,det_T,Iq,Icl,Ccoh,Cl1_p,Cl1_q,eigmin_K,p_div_margin,cp_div_margin");
    std::size_t rows = 0, empty_f = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
        empty_f += line.find(",,") != std::string::npos;
    }
    EXPECT_EQ(rows, 401u);
    EXPECT_GE(empty_f, 2u);
    EXPECT_EQ(text.find("nan"), std::string::npos);
    EXPECT_EQ(text.find("inf"), std::string::npos);
}

TEST(Output, RunsAreByteIdentical)
{
    ScenarioConfig c;
    c.params = {{"C", 1.64}};
    c.chi = 1.1;
    c.xi = 0.3;
    c.steps = 2000;
    c.out_dir = scratch("identical").string();
    std::string csv[2], summary[2];
    for (int k = 0; k < 2; ++k) {
        std::ostringstream err;
        ASSERT_EQ(run_to_files(c, err), 0) << err.str();
        csv[k] = slurp(fs::path(c.out_dir) / "trajectory.csv");
        summary[k] = slurp(fs::path(c.out_dir) / "summary.json");
    }
    EXPECT_GT(csv[0].size(), 1000u);
    EXPECT_TRUE(csv[0] == csv[1]);
    EXPECT_TRUE(summary[0] == summary[1]);
}

TEST(Sweep, CovariantStrengthBoundaries)
{
    ScenarioConfig c;
    const auto rows = run_sweep(c, parse_sweep("C:0:2:41"));
    ASSERT_EQ(rows.size(), 41u);
    for (const SweepRow& row : rows) {
        const bool p = row.summary["quantum_p_div"]["divisible"].get<bool>();
        const bool cp = row.summary["quantum_cp_div"]["divisible"].get<bool>();
        EXPECT_EQ(p, row.value <= 1.5) << row.value;
        EXPECT_EQ(cp, row.value == 0.0) << row.value;
    }
    std::ostringstream out;
    write_sweep_csv(out, "C", rows);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
              "C,quantum_p_div,quantum_cp_div,classical_p_div,max_f_t,invertible,p_div_worst_margin,cp_div_worst_margin");
}

TEST(Sweep, UnitaryAngle)
{
    ScenarioConfig c;
    c.scenario = "unitary";
    c.t_max = 2 * kPi;
    c.steps = 1000;
    const auto rows = run_sweep(c, parse_sweep("chi:0:3.141592653589793:9"));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const json& cl = rows[k].summary["classical_p_div"];
        const double max_f = cl["max_f_t"].get<double>();
        if (k == 0 || k + 1 == rows.size()) {
            EXPECT_NEAR(max_f, 0.0, 1e-12);
            EXPECT_TRUE(cl["divisible"].get<bool>());
        } else {
            EXPECT_GT(max_f, 1e-3) << rows[k].value;
            EXPECT_FALSE(cl["divisible"].get<bool>());
        }
    }
}

TEST(Cli, ExitCodes)
{
    const fs::path dir = scratch("cli");
    const fs::path err = dir / "stderr.txt";
    const std::string out = " --out-dir " + (dir / "out").string();

    EXPECT_EQ(run_cli("--scenario pauli --steps 50 --t-max 1" + out, err), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "trajectory.csv"));
    EXPECT_TRUE(fs::exists(dir / "out" / "summary.json"));

    {
        std::ofstream cfg(dir / "bad.json");
        cfg << R"({"scenario": "pauli", "grids": {}})";
    }
    EXPECT_EQ(run_cli((dir / "bad.json").string() + out, err), 1);
    EXPECT_NE(slurp(err).find("grids"), std::string::npos);

    EXPECT_EQ(run_cli("--param C" + out, err), 1);
    EXPECT_FALSE(slurp(err).empty());
    EXPECT_EQ(run_cli("--scenario pauli --param C=1" + out, err), 1);
    EXPECT_EQ(run_cli("--sweep C:0:1" + out, err), 1);
    EXPECT_EQ(run_cli("--mu 3" + out, err), 1);

    {
        std::ofstream cfg(dir / "singular.json");
        cfg << R"({"grid": {"t_max": 1, "steps": 20}, "tolerances": {"singular": 2}})";
    }
    EXPECT_EQ(run_cli((dir / "singular.json").string() + out, err), 2);
    EXPECT_NE(slurp(err).find("singular"), std::string::npos);
}

TEST(Cli, FlagsOverrideConfig)
{
    const fs::path dir = scratch("cli_override");
    {
        std::ofstream cfg(dir / "run.json");
        cfg << R"({"params": {"C": 1.0}, "grid": {"t_max": 5, "steps": 100}, "basis": {"chi": 0.1}})";
    }
    const std::string args = (dir / "run.json").string() + " --param C=1.64 --steps 50 --chi 1.5707963267948966 --xi 0.39269908169744984 --out-dir " +
                             (dir / "out").string();
    ASSERT_EQ(run_cli(args, dir / "stderr.txt"), 0);
    std::ifstream in(dir / "out" / "summary.json");
    const json s = json::parse(in);
    EXPECT_DOUBLE_EQ(s["config"]["params"]["C"].get<double>(), 1.64);
    EXPECT_EQ(s["config"]["grid"]["steps"].get<int>(), 50);
    EXPECT_DOUBLE_EQ(s["config"]["grid"]["t_max"].get<double>(), 5.0);
    EXPECT_DOUBLE_EQ(s["config"]["basis"]["chi"].get<double>(), kPi / 2);

    ASSERT_EQ(run_cli("--sweep C:0:2:5 --steps 200 --out-dir " + (dir / "sweep").string(), dir / "stderr.txt"), 0);
    const std::string csv = slurp(dir / "sweep" / "sweep.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}
