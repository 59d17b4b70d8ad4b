#include "pdiv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <set>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "pdiv/classical.hpp"
#include "pdiv/covariant.hpp"
#include "pdiv/errors.hpp"
#include "pdiv/infoflow.hpp"
#include "pdiv/numerics.hpp"

namespace pdiv {

using nlohmann::json;

GeneratorSpec unitary_generator(double omega, const Vec3& axis)
{
    if (axis.norm() == 0.0) {
        throw DomainError("rotation axis must be non-zero");
    }
    const Vec3 w = omega * axis.normalized();
    return GeneratorSpec::hamiltonian([w](double) { return w; });
}

Vec3 pauli_rates(const Vec3& gammas, RatePreset preset, double t)
{
    return preset == RatePreset::constant ? gammas : Vec3(gammas * std::exp(-t));
}

GeneratorSpec pauli_generator(const Vec3& gammas, RatePreset preset)
{
    return GeneratorSpec::pauli([gammas, preset](double t) { return pauli_rates(gammas, preset, t); });
}

QubitChannel pauli_closed_form(const Vec3& gammas, RatePreset preset, double t)
{
    const double weight = preset == RatePreset::constant ? t : 1.0 - std::exp(-t);
    const double total = gammas.sum();
    Vec3 lambdas;
    for (int i = 0; i < 3; ++i) {
        lambdas(i) = std::exp(-(total - gammas(i)) * weight);
    }
    return QubitChannel::pauli(lambdas(0), lambdas(1), lambdas(2));
}

BlochGenerator remark_bloch(double t)
{
    Mat3 m = Mat3::Zero();
    if (t <= kPi) {
        m << -1.0, std::cos(t), 0.0, std::cos(t), -1.0, 0.0, 0.0, 0.0, -2.0;
    } else {
        m.diagonal() << -1.0, -2.0, -1.0;
    }
    return {m, Vec3::Zero()};
}

GeneratorSpec remark_generator()
{
    return GeneratorSpec::from_bloch(remark_bloch, {kPi});
}

QubitChannel remark_closed_form(double t)
{
    Mat3 integral = Mat3::Zero();
    if (t <= kPi) {
        integral << -t, std::sin(t), 0.0, std::sin(t), -t, 0.0, 0.0, 0.0, -2.0 * t;
    } else {
        integral.diagonal() << -kPi - (t - kPi), -kPi - 2.0 * (t - kPi), -2.0 * kPi - (t - kPi);
    }
    return QubitChannel(Mat3(integral.exp()));
}

const std::vector<std::string>& scenario_names()
{
    static const std::vector<std::string> names{"unitary", "pauli", "pauli_hamiltonian",
                                                "remark4", "covariant_example4", "custom"};
    return names;
}

const std::vector<std::string>& scenario_params(const std::string& scenario)
{
    static const std::map<std::string, std::vector<std::string>> table{
        {"unitary", {"omega", "r1", "r2", "r3"}},
        {"pauli", {"gamma1", "gamma2", "gamma3", "rates"}},
        {"pauli_hamiltonian", {"gamma1", "gamma2", "gamma3", "rates", "omega"}},
        {"remark4", {}},
        {"covariant_example4", {"C"}},
        {"custom", {"h1", "h2", "h3", "k11", "k22", "k33", "k12", "k13", "k23", "k12_im", "k13_im", "k23_im"}},
    };
    const auto it = table.find(scenario);
    if (it == table.end()) {
        throw ConfigError("unknown scenario '" + scenario + "'");
    }
    return it->second;
}

const std::map<std::string, std::vector<std::string>>& config_keys()
{
    static const std::map<std::string, std::vector<std::string>> keys{
        {"", {"scenario", "params", "grid", "basis", "mu", "tolerances", "output", "propagator"}},
        {"grid", {"t_max", "steps"}},
        {"basis", {"chi", "xi"}},
        {"tolerances", {"divisibility", "singular", "backflow"}},
        {"output", {"dir", "trajectory", "summary"}},
        {"propagator", {"method", "substeps"}},
    };
    return keys;
}

namespace {

void reject_unknown(const json& object, const std::string& section)
{
    if (!object.is_object()) {
        throw ConfigError((section.empty() ? std::string("configuration") : section) + " must be an object");
    }
    const auto& allowed = config_keys().at(section);
    for (const auto& item : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + (section.empty() ? "" : section + ".") + item.key() + "'");
        }
    }
}

double number(const json& value, const std::string& name)
{
    if (!value.is_number()) {
        throw ConfigError(name + " must be a number");
    }
    return value.get<double>();
}

std::string text(const json& value, const std::string& name)
{
    if (!value.is_string()) {
        throw ConfigError(name + " must be a string");
    }
    return value.get<std::string>();
}

double param(const ScenarioConfig& c, const std::string& key, double fallback)
{
    const auto it = c.params.find(key);
    return it == c.params.end() ? fallback : it->second;
}

RatePreset preset_of(const std::string& name)
{
    if (name == "constant") {
        return RatePreset::constant;
    }
    if (name == "exponential") {
        return RatePreset::exponential;
    }
    throw ConfigError("unknown rate preset '" + name + "'");
}

double parse_double(const std::string& value, const std::string& key)
{
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("value for " + key + " is not a number: '" + value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("value for " + key + " is not a number: '" + value + "'");
    }
    return out;
}

} // namespace

ScenarioConfig parse_config(const json& doc)
{
    reject_unknown(doc, "");
    ScenarioConfig c;
    if (doc.contains("scenario")) {
        c.scenario = text(doc["scenario"], "scenario");
    }
    if (doc.contains("params")) {
        const json& params = doc["params"];
        if (!params.is_object()) {
            throw ConfigError("params must be an object");
        }
        for (const auto& item : params.items()) {
            if (item.key() == "rates") {
                c.rates = text(item.value(), "params.rates");
            } else {
                c.params[item.key()] = number(item.value(), "params." + item.key());
            }
        }
    }
    if (doc.contains("grid")) {
        const json& grid = doc["grid"];
        reject_unknown(grid, "grid");
        if (grid.contains("t_max")) {
            c.t_max = number(grid["t_max"], "grid.t_max");
        }
        if (grid.contains("steps")) {
            if (!grid["steps"].is_number_integer() || grid["steps"].get<long long>() < 1) {
                throw ConfigError("grid.steps must be a positive integer");
            }
            c.steps = grid["steps"].get<std::size_t>();
        }
    }
    if (doc.contains("basis")) {
        const json& basis = doc["basis"];
        reject_unknown(basis, "basis");
        if (basis.contains("chi")) {
            c.chi = number(basis["chi"], "basis.chi");
        }
        if (basis.contains("xi")) {
            c.xi = number(basis["xi"], "basis.xi");
        }
    }
    if (doc.contains("mu")) {
        c.mu = number(doc["mu"], "mu");
    }
    if (doc.contains("tolerances")) {
        const json& tol = doc["tolerances"];
        reject_unknown(tol, "tolerances");
        if (tol.contains("divisibility")) {
            c.tol = number(tol["divisibility"], "tolerances.divisibility");
        }
        if (tol.contains("singular")) {
            c.singular_tol = number(tol["singular"], "tolerances.singular");
        }
        if (tol.contains("backflow")) {
            c.backflow_tol = number(tol["backflow"], "tolerances.backflow");
        }
    }
    if (doc.contains("output")) {
        const json& out = doc["output"];
        reject_unknown(out, "output");
        if (out.contains("dir")) {
            c.out_dir = text(out["dir"], "output.dir");
        }
        if (out.contains("trajectory")) {
            c.trajectory_file = text(out["trajectory"], "output.trajectory");
        }
        if (out.contains("summary")) {
            c.summary_file = text(out["summary"], "output.summary");
        }
    }
    if (doc.contains("propagator")) {
        const json& prop = doc["propagator"];
        reject_unknown(prop, "propagator");
        if (prop.contains("method")) {
            c.method = text(prop["method"], "propagator.method");
        }
        if (prop.contains("substeps")) {
            if (!prop["substeps"].is_number_integer() || prop["substeps"].get<long long>() < 1) {
                throw ConfigError("propagator.substeps must be a positive integer");
            }
            c.substeps = prop["substeps"].get<std::size_t>();
        }
    }
    validate(c);
    return c;
}

void validate(const ScenarioConfig& c)
{
    const auto& allowed = scenario_params(c.scenario);
    for (const auto& [key, value] : c.params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end() || key == "rates") {
            throw ConfigError("scenario '" + c.scenario + "' has no numeric parameter '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw ConfigError("parameter '" + key + "' must be finite");
        }
    }
    preset_of(c.rates);
    if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) {
        throw ConfigError("grid.t_max must be positive");
    }
    if (c.steps < 1) {
        throw ConfigError("grid.steps must be positive");
    }
    if (!(c.mu >= 0.0 && c.mu <= 1.0)) {
        throw ConfigError("mu must lie in [0, 1]");
    }
    if (!(c.tol >= 0.0) || !(c.singular_tol >= 0.0) || !(c.backflow_tol >= 0.0)) {
        throw ConfigError("tolerances must be non-negative");
    }
    static const std::set<std::string> methods{"auto", "closed_form", "timesplitting", "ode"};
    if (!methods.count(c.method)) {
        throw ConfigError("unknown propagator method '" + c.method + "'");
    }
    if (c.substeps < 1) {
        throw ConfigError("propagator.substeps must be positive");
    }
}

json to_json(const ScenarioConfig& c)
{
    json params = json::object();
    for (const auto& [key, value] : c.params) {
        params[key] = value;
    }
    const auto& allowed = scenario_params(c.scenario);
    if (std::find(allowed.begin(), allowed.end(), "rates") != allowed.end()) {
        params["rates"] = c.rates;
    }
    return json{{"scenario", c.scenario},
                {"params", params},
                {"grid", {{"t_max", c.t_max}, {"steps", c.steps}}},
                {"basis", {{"chi", c.chi}, {"xi", c.xi}}},
                {"mu", c.mu},
                {"tolerances", {{"divisibility", c.tol}, {"singular", c.singular_tol}, {"backflow", c.backflow_tol}}},
                {"output", {{"dir", c.out_dir}, {"trajectory", c.trajectory_file}, {"summary", c.summary_file}}},
                {"propagator", {{"method", c.method}, {"substeps", c.substeps}}}};
}

void apply_override(ScenarioConfig& c, const std::string& key, const std::string& value)
{
    if (key == "t_max") {
        c.t_max = parse_double(value, key);
    } else if (key == "steps") {
        const double steps = parse_double(value, key);
        if (steps < 1.0 || steps != std::floor(steps)) {
            throw ConfigError("steps must be a positive integer");
        }
        c.steps = static_cast<std::size_t>(steps);
    } else if (key == "chi") {
        c.chi = parse_double(value, key);
    } else if (key == "xi") {
        c.xi = parse_double(value, key);
    } else if (key == "mu") {
        c.mu = parse_double(value, key);
    } else if (key == "tol") {
        c.tol = parse_double(value, key);
    } else if (key == "rates") {
        c.rates = value;
    } else {
        c.params[key] = parse_double(value, key);
    }
}

namespace {

struct Dynamics {
    GeneratorSpec generator = GeneratorSpec::zero();
    std::function<QubitChannel(double)> closed_form;
};

Dynamics build(const ScenarioConfig& c)
{
    Dynamics d;
    const Vec3 gammas(param(c, "gamma1", 1.0), param(c, "gamma2", 1.0), param(c, "gamma3", 1.0));
    if (c.scenario == "unitary") {
        const double omega = param(c, "omega", 1.0);
        const Vec3 axis(param(c, "r1", 0.0), param(c, "r2", 0.0), param(c, "r3", 1.0));
        d.generator = unitary_generator(omega, axis);
        d.closed_form = [omega, axis](double t) { return QubitChannel::rotation(axis.normalized(), omega * t); };
    } else if (c.scenario == "pauli") {
        const RatePreset preset = preset_of(c.rates);
        d.generator = pauli_generator(gammas, preset);
        d.closed_form = [gammas, preset](double t) { return pauli_closed_form(gammas, preset, t); };
    } else if (c.scenario == "pauli_hamiltonian") {
        const RatePreset preset = preset_of(c.rates);
        const double omega = param(c, "omega", 2.0);
        d.generator = GeneratorSpec([omega](double) { return Vec3(0.0, 0.0, omega); },
                                    [gammas, preset](double t) {
                                        return pauli_rates(gammas, preset, t).cast<cplx>().asDiagonal().toDenseMatrix().eval();
                                    });
    } else if (c.scenario == "remark4") {
        d.generator = remark_generator();
        d.closed_form = remark_closed_form;
    } else if (c.scenario == "covariant_example4") {
        const double strength = param(c, "C", 1.5);
        const CovariantFamily family = example4_family(strength);
        d.generator = to_generator_spec([strength](double t) { return example4_generator(strength, t); });
        d.closed_form = [family](double t) { return to_channel(family(t)); };
    } else if (c.scenario == "custom") {
        const Vec3 h(param(c, "h1", 0.0), param(c, "h2", 0.0), param(c, "h3", 0.0));
        Mat3c k = Mat3c::Zero();
        const char* names[3][3] = {{"k11", "k12", "k13"}, {"k12", "k22", "k23"}, {"k13", "k23", "k33"}};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                k(i, j) = param(c, names[i][j], 0.0);
            }
        }
        const cplx im(0.0, 1.0);
        k(0, 1) += im * param(c, "k12_im", 0.0);
        k(0, 2) += im * param(c, "k13_im", 0.0);
        k(1, 2) += im * param(c, "k23_im", 0.0);
        k(1, 0) = std::conj(k(0, 1));
        k(2, 0) = std::conj(k(0, 2));
        k(2, 1) = std::conj(k(1, 2));
        d.generator = GeneratorSpec([h](double) { return h; }, [k](double) { return k; });
        const GeneratorSpec g = d.generator;
        d.closed_form = [g](double t) { return semigroup_map(g, t); };
    } else {
        throw ConfigError("unknown scenario '" + c.scenario + "'");
    }
    return d;
}

Propagator propagate(const ScenarioConfig& c, const Dynamics& d, const std::vector<double>& grid)
{
    const std::string method = c.method == "auto" ? (d.closed_form ? "closed_form" : "timesplitting") : c.method;
    if (method == "closed_form") {
        if (!d.closed_form) {
            throw ConfigError("scenario '" + c.scenario + "' has no closed-form propagator");
        }
        return Propagator::from_family(grid, d.closed_form);
    }
    if (method == "ode") {
        return propagate_ode(d.generator, grid, c.substeps);
    }
    return propagate_timesplitting(d.generator, grid, c.substeps);
}

json intervals(const std::vector<Revival>& revivals)
{
    json out = json::array();
    for (const Revival& r : revivals) {
        out.push_back({r.t_begin, r.t_end});
    }
    return out;
}

json grid_verdict(const GridVerdict& v)
{
    return {{"divisible", v.divisible}, {"worst_margin", v.worst_margin}, {"worst_time", v.worst_time}};
}

json optional_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

bool bistochastic(const StochasticProcess& sp)
{
    for (const auto& t : sp.matrices) {
        if (std::abs(t(0, 0) - t(1, 1)) > 1e-9 || std::abs(t(0, 1) - t(1, 0)) > 1e-9) {
            return false;
        }
    }
    return true;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& c)
{
    validate(c);
    const Dynamics d = build(c);
    const std::vector<double> grid = uniform_grid(c.t_max, c.steps);
    const Propagator p = propagate(c, d, grid);
    const ProjectorBasis basis = ProjectorBasis::from_angles(c.chi, c.xi);
    const StochasticProcess sp = reduce_map(p, basis);
    const InfoTrajectory traj = info_trajectory(p, basis, Vec2(1.0, 0.0), Vec2(0.0, 1.0), c.mu);
    const GridVerdict pdiv = p_div_over_grid(d.generator, grid, c.tol);
    const GridVerdict cpdiv = cp_div_over_grid(d.generator, grid, c.tol);
    const ClassicalGenerator lg = reduce_generator(d.generator, basis, grid);
    const KolmogorovVerdict kolmogorov = kolmogorov_check(lg, c.tol);

    RunResult result;
    const std::size_t n = grid.size();
    std::vector<double> det(n);
    std::vector<bool> singular(n);
    for (std::size_t k = 0; k < n; ++k) {
        det[k] = sp.matrices[k].determinant();
        singular[k] = std::abs(det[k]) < c.singular_tol;
    }
    std::optional<FCriterion> fc;
    json classical;
    if (bistochastic(sp)) {
        fc = f_criterion(sp, c.tol, c.singular_tol);
        classical = {{"bistochastic", true},
                     {"divisible", fc->divisible},
                     {"max_f_t", optional_number(fc->max_f)},
                     {"max_f_time", fc->max_f ? json(fc->max_f_time) : json(nullptr)}};
    } else {
        classical = {{"bistochastic", false}, {"max_f_t", nullptr}, {"max_f_time", nullptr}};
        try {
            classical["divisible"] = kolmogorov_check(classical_generator_from_T(sp, c.singular_tol), c.tol).divisible;
        } catch (const SingularProcessError&) {
            classical["divisible"] = nullptr;
        }
    }

    json invertible_ranges = json::array();
    std::size_t singular_points = 0;
    for (std::size_t k = 0; k < n;) {
        if (singular[k]) {
            ++singular_points;
            ++k;
            continue;
        }
        const std::size_t begin = k;
        while (k + 1 < n && !singular[k + 1]) {
            ++k;
        }
        invertible_ranges.push_back({grid[begin], grid[k]});
        ++k;
    }
    classical["chi"] = c.chi;
    classical["xi"] = c.xi;
    classical["invertible"] = singular_points == 0;
    classical["singular_points"] = singular_points;
    classical["invertible_intervals"] = invertible_ranges;
    classical["generator_kolmogorov"] = kolmogorov.divisible;

    result.rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        TrajectoryRow row;
        row.t = grid[k];
        row.t00 = sp.matrices[k](0, 0);
        row.f = fc ? fc->f[k] : std::nullopt;
        row.det = det[k];
        row.iq = traj.i_quantum[k];
        row.icl = traj.i_classical[k];
        row.ccoh = traj.coherent[k];
        row.cl1_p = traj.cl1_p[k];
        row.cl1_q = traj.cl1_q[k];
        row.eigmin_k = min_hermitian_eigenvalue(d.generator.kossakowski(grid[k]));
        row.p_margin = pdiv.margins[k];
        row.cp_margin = cpdiv.margins[k];
        result.rows.push_back(row);
    }

    result.summary = {
        {"config", to_json(c)},
        {"quantum_p_div", grid_verdict(pdiv)},
        {"quantum_cp_div", grid_verdict(cpdiv)},
        {"classical_p_div", classical},
        {"revivals",
         {{"quantum", intervals(detect_backflow(grid, traj.i_quantum, c.backflow_tol))},
          {"classical", intervals(detect_backflow(grid, traj.i_classical, c.backflow_tol))}}},
    };
    result.all_singular = singular_points == n;
    return result;
}

const char* const kTrajectoryHeader = "t,T00,f_t,det_T,Iq,Icl,Ccoh,Cl1_p,Cl1_q,eigmin_K,p_div_margin,cp_div_margin";

namespace {

std::string format(double v)
{
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.15g", v);
    return buffer;
}

std::string format(const std::optional<double>& v)
{
    return v && std::isfinite(*v) ? format(*v) : std::string();
}

} // namespace

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows)
{
    out << kTrajectoryHeader << '\n';
    for (const TrajectoryRow& r : rows) {
        const std::optional<double> fields[] = {r.t,     r.t00,   r.f,        r.det,      r.iq,      r.icl,
                                                r.ccoh,  r.cl1_p, r.cl1_q,    r.eigmin_k, r.p_margin, r.cp_margin};
        bool first = true;
        for (const auto& field : fields) {
            if (!first) {
                out << ',';
            }
            out << format(field);
            first = false;
        }
        out << '\n';
    }
}

std::vector<double> SweepSpec::values() const
{
    std::vector<double> out;
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (std::size_t k = 0; k < count; ++k) {
        out.push_back(start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    return out;
}

SweepSpec parse_sweep(const std::string& text)
{
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = text.find(':', begin);
        parts.push_back(text.substr(begin, colon == std::string::npos ? std::string::npos : colon - begin));
        if (colon == std::string::npos) {
            break;
        }
        begin = colon + 1;
    }
    if (parts.size() != 4 || parts[0].empty()) {
        throw ConfigError("sweep must look like key:start:stop:count");
    }
    SweepSpec s{parts[0], parse_double(parts[1], "sweep start"), parse_double(parts[2], "sweep stop"), 0};
    const double count = parse_double(parts[3], "sweep count");
    if (count < 1.0 || count != std::floor(count)) {
        throw ConfigError("sweep count must be a positive integer");
    }
    s.count = static_cast<std::size_t>(count);
    return s;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep)
{
    std::vector<ScenarioConfig> configs;
    for (double v : sweep.values()) {
        ScenarioConfig c = config;
        apply_override(c, sweep.key, format(v));
        validate(c);
        configs.push_back(std::move(c));
    }
    const std::vector<double> values = sweep.values();
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t start = 0; start < values.size(); start += width) {
        std::vector<std::future<json>> jobs;
        for (std::size_t k = start; k < std::min(values.size(), start + width); ++k) {
            jobs.push_back(std::async(std::launch::async, [&configs, k] { return run_scenario(configs[k]).summary; }));
        }
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            rows.push_back({values[start + k], jobs[k].get()});
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::string& key, const std::vector<SweepRow>& rows)
{
    out << key << ",quantum_p_div,quantum_cp_div,classical_p_div,max_f_t,invertible,p_div_worst_margin,cp_div_worst_margin\n";
    auto flag = [](const json& v) { return v.is_boolean() ? std::string(v.get<bool>() ? "true" : "false") : std::string(); };
    auto num = [](const json& v) { return v.is_number() ? format(v.get<double>()) : std::string(); };
    for (const SweepRow& r : rows) {
        const json& s = r.summary;
        out << format(r.value) << ',' << flag(s["quantum_p_div"]["divisible"]) << ','
            << flag(s["quantum_cp_div"]["divisible"]) << ',' << flag(s["classical_p_div"]["divisible"]) << ','
            << num(s["classical_p_div"]["max_f_t"]) << ',' << flag(s["classical_p_div"]["invertible"]) << ','
            << num(s["quantum_p_div"]["worst_margin"]) << ',' << num(s["quantum_cp_div"]["worst_margin"]) << '\n';
    }
}

namespace {

template <class Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const SingularAtTimeError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const SingularMapError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    return out;
}

} // namespace

int run_to_files(const ScenarioConfig& config, std::ostream& err)
{
    return guarded(err, [&] {
        const RunResult result = run_scenario(config);
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        {
            auto csv = open_output(dir / config.trajectory_file);
            write_trajectory_csv(csv, result.rows);
        }
        {
            auto summary = open_output(dir / config.summary_file);
            summary << result.summary.dump(2) << '\n';
        }
        if (result.all_singular) {
            err << "numerical failure: classical process singular at every grid point\n";
            return 2;
        }
        return 0;
    });
}

int sweep_to_files(const ScenarioConfig& config, const SweepSpec& sweep, std::ostream& err)
{
    return guarded(err, [&] {
        const std::vector<SweepRow> rows = run_sweep(config, sweep);
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        auto csv = open_output(dir / "sweep.csv");
        write_sweep_csv(csv, sweep.key, rows);
        return 0;
    });
}

} // namespace pdiv
