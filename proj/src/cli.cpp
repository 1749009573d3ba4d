// cli.cpp — Subcommand implementations and argument handling for the qzeno tool

#include "qzeno/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qzeno/coefficients.hpp"
#include "qzeno/dynamics.hpp"
#include "qzeno/errors.hpp"
#include "qzeno/format.hpp"
#include "qzeno/parallel.hpp"
#include "qzeno/zeno.hpp"

namespace qzeno::cli {

using nlohmann::json;

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

bool wants_csv(const RunConfig& c) { return c.output.format != OutputFormat::Json; }
bool wants_json(const RunConfig& c) { return c.output.format != OutputFormat::Csv; }

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* section) {
    if (!j.is_object()) throw ConfigError(std::string("config section '") + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(std::string("unknown key '") + key + "' in config section '" + section + "'");
    }
}

std::string scan_csv(const ZenoScan& scan) {
    std::ostringstream os;
    write_scan_csv(os, scan);
    return os.str();
}

} // namespace

std::string to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
    }
    return "csv";
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw ConfigError("format must be csv, json or both (got '" + s + "')");
}

void RunConfig::validate() const {
    try {
        params.validate();
        quadrature.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (model != "ohmic_lorentz_drude") throw ConfigError("unsupported spectral model '" + model + "'");
    if (!(grids.tau_min > 0.0) || !(grids.tau_max > grids.tau_min))
        throw ConfigError("tau grid needs 0 < tau_min < tau_max");
    if (grids.tau_points < 2) throw ConfigError("tau grid needs at least 2 points");
    if (!(grids.t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (grids.t_points < 2) throw ConfigError("coefficient grid needs at least 2 points");
    if (run.n < 0) throw ConfigError("n must be >= 0");
    if (!(run.tau > 0.0)) throw ConfigError("tau must be positive");
    if (run.measurements < 1) throw ConfigError("measurements must be >= 1");
    if (run.dt < 0.0) throw ConfigError("dt must be >= 0");
    if (run.n_max != 0 && run.n_max < run.n + 5) throw ConfigError("n_max must be >= n + 5");
    if (run.jobs < 1) throw ConfigError("jobs must be >= 1");
    if (run.r_values.empty() || run.theta_values.empty())
        throw ConfigError("crossover map needs r and theta values");
    for (double r : run.r_values)
        if (!(r > 0.0)) throw ConfigError("r values must be positive");
    for (double t : run.theta_values)
        if (!(t >= 0.0)) throw ConfigError("theta values must be >= 0");
    if (output.directory.empty()) throw ConfigError("output directory must not be empty");
}

SpectralDensityModel RunConfig::spectral_model() const { return SpectralDensityModel::ohmic(params); }

Eigen::VectorXd RunConfig::tau_grid() const {
    return grids.log_spaced ? log_grid(grids.tau_min, grids.tau_max, grids.tau_points)
                            : linear_grid(grids.tau_min, grids.tau_max, grids.tau_points);
}

json to_json(const RunConfig& c) {
    return {
        {"params", to_json(c.params)},
        {"model", c.model},
        {"quadrature",
         {{"abs_tol", c.quadrature.abs_tol},
          {"rel_tol", c.quadrature.rel_tol},
          {"max_subdivisions", c.quadrature.max_subdivisions},
          {"tail_cut_omega", c.quadrature.tail_cut_omega}}},
        {"grids",
         {{"tau_min", c.grids.tau_min},
          {"tau_max", c.grids.tau_max},
          {"tau_points", c.grids.tau_points},
          {"log_spaced", c.grids.log_spaced},
          {"t_max", c.grids.t_max},
          {"t_points", c.grids.t_points}}},
        {"output", {{"directory", c.output.directory}, {"format", to_string(c.output.format)}}},
        {"run",
         {{"n", c.run.n},
          {"tau", c.run.tau},
          {"measurements", c.run.measurements},
          {"dt", c.run.dt},
          {"n_max", c.run.n_max},
          {"jobs", c.run.jobs},
          {"r_values", c.run.r_values},
          {"theta_values", c.run.theta_values},
          {"marginal_band", c.run.marginal_band}}},
    };
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    try {
        check_keys(j, {"params", "model", "quadrature", "grids", "output", "run"}, "root");
        if (j.contains("params")) {
            check_keys(j["params"], {"omega0", "r", "theta", "alpha"}, "params");
            c.params = params_from_json(j["params"], c.params);
        }
        c.model = j.value("model", c.model);
        if (j.contains("quadrature")) {
            const auto& q = j["quadrature"];
            check_keys(q, {"abs_tol", "rel_tol", "max_subdivisions", "tail_cut_omega"}, "quadrature");
            c.quadrature.abs_tol = q.value("abs_tol", c.quadrature.abs_tol);
            c.quadrature.rel_tol = q.value("rel_tol", c.quadrature.rel_tol);
            c.quadrature.max_subdivisions = q.value("max_subdivisions", c.quadrature.max_subdivisions);
            c.quadrature.tail_cut_omega = q.value("tail_cut_omega", c.quadrature.tail_cut_omega);
        }
        if (j.contains("grids")) {
            const auto& g = j["grids"];
            check_keys(g, {"tau_min", "tau_max", "tau_points", "log_spaced", "t_max", "t_points"}, "grids");
            c.grids.tau_min = g.value("tau_min", c.grids.tau_min);
            c.grids.tau_max = g.value("tau_max", c.grids.tau_max);
            c.grids.tau_points = g.value("tau_points", c.grids.tau_points);
            c.grids.log_spaced = g.value("log_spaced", c.grids.log_spaced);
            c.grids.t_max = g.value("t_max", c.grids.t_max);
            c.grids.t_points = g.value("t_points", c.grids.t_points);
        }
        if (j.contains("output")) {
            const auto& o = j["output"];
            check_keys(o, {"directory", "format"}, "output");
            c.output.directory = o.value("directory", c.output.directory);
            c.output.format = parse_format(o.value("format", to_string(c.output.format)));
        }
        if (j.contains("run")) {
            const auto& r = j["run"];
            check_keys(r, {"n", "tau", "measurements", "dt", "n_max", "jobs", "r_values",
                           "theta_values", "marginal_band"},
                       "run");
            c.run.n = r.value("n", c.run.n);
            c.run.tau = r.value("tau", c.run.tau);
            c.run.measurements = r.value("measurements", c.run.measurements);
            c.run.dt = r.value("dt", c.run.dt);
            c.run.n_max = r.value("n_max", c.run.n_max);
            c.run.jobs = r.value("jobs", c.run.jobs);
            c.run.r_values = r.value("r_values", c.run.r_values);
            c.run.theta_values = r.value("theta_values", c.run.theta_values);
            c.run.marginal_band = r.value("marginal_band", c.run.marginal_band);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

CommandResult cmd_coeffs(const RunConfig& config) {
    config.validate();
    const auto model = config.spectral_model();
    const CoefficientSeries series =
        tabulate_coefficients(config.params, model, config.grids.t_max, config.grids.t_points,
                              config.quadrature, config.run.jobs);

    CommandResult result;
    if (wants_csv(config)) {
        std::ostringstream os;
        write_csv(os, series);
        result.outputs.add("coeffs.csv", os.str());
    }
    if (wants_json(config)) result.outputs.add_json("coeffs.json", to_json(series));

    const MarkovianLimits m = markovian_limits(config.params, model);
    json meta = to_json(m);
    meta["params"] = to_json(config.params);
    meta["delta_at_t_max"] = series.delta[series.size() - 1];
    meta["gamma_at_t_max"] = series.gamma[series.size() - 1];
    result.outputs.add_json("markov.json", meta);
    return result;
}

CommandResult cmd_scan(const RunConfig& config) {
    config.validate();
    const ZenoScan scan = zeno_scan(config.params, config.spectral_model(), config.run.n,
                                    config.tau_grid(), config.quadrature, {}, config.run.jobs);
    CommandResult result;
    const std::string stem = "scan_n" + std::to_string(config.run.n);
    if (wants_csv(config)) {
        result.outputs.add(stem + ".csv", scan_csv(scan));
        result.outputs.add_json(stem + ".json", scan_sidecar(scan));
    } else {
        result.outputs.add_json(stem + ".json", to_json(scan));
    }
    if (config.output.format == OutputFormat::Both) result.outputs.add_json(stem + "_full.json", to_json(scan));
    if (scan.aze_divergent) {
        result.exit_code = kDegenerate;
        result.message = "Markovian decay rate vanishes (theta = 0, n = 0): every interval is AZE-divergent";
    }
    return result;
}

CommandResult cmd_fig1(const RunConfig& config) {
    config.validate();
    const Eigen::VectorXd taus = config.tau_grid();
    const auto count = taus.size();

    struct Panel {
        std::string name;
        double theta;
        int n;
        bool is_ratio;
        std::vector<double> r_values;
        std::string title;
    };
    const std::vector<Panel> panels{
        {"fig1a", kThetaHigh, config.run.n, true, {0.5, 1.0, 10.0}, "gamma_n^Z / gamma_n^0, high T"},
        {"fig1b", kThetaHigh, config.run.n, false, {0.5, 1.0, 10.0}, "Delta(tau) / Delta_M, high T"},
        {"fig1c", kThetaZero, 50, true, {0.1, 0.5, 10.0}, "gamma_n^Z / gamma_n^0, T = 0, n = 50"},
        {"fig1d", kThetaZero, 50, false, {0.1, 0.5, 10.0}, "Delta(tau) / Delta_M, T = 0"},
    };
    const std::vector<std::string> styles{"solid", "dotted", "dashed"};

    CommandResult result;
    json manifest;
    manifest["panels"] = json::array();
    for (const Panel& panel : panels) {
        std::vector<Eigen::VectorXd> columns;
        json series = json::array();
        for (std::size_t s = 0; s < panel.r_values.size(); ++s) {
            ReservoirParams p = config.params;
            p.r = panel.r_values[s];
            p.theta = panel.theta;
            const auto model = SpectralDensityModel::ohmic(p);
            json entry{{"column", "r=" + short_number(p.r)},
                       {"label", "r = " + short_number(p.r)},
                       {"style", styles[s % styles.size()]}};
            if (panel.is_ratio) {
                const ZenoScan scan = zeno_scan(p, model, panel.n, taus, config.quadrature, {}, config.run.jobs);
                columns.push_back(scan.ratio);
                entry["crossovers"] = scan.crossovers;
            } else {
                const double delta_m = markovian_limits(p, model).delta_m;
                Eigen::VectorXd col(count);
                parallel_for(static_cast<std::size_t>(count), config.run.jobs, [&](std::size_t k) {
                    const auto i = static_cast<Eigen::Index>(k);
                    col[i] = diffusion_coefficient(p, model, taus[i], config.quadrature) / delta_m;
                });
                columns.push_back(col);
            }
            series.push_back(entry);
        }

        CsvTable table;
        table.header.push_back("tau");
        for (const auto& e : series) table.header.push_back(e["column"].get<std::string>());
        for (Eigen::Index i = 0; i < count; ++i) {
            std::vector<std::string> row{format_double(taus[i])};
            for (const auto& col : columns) row.push_back(format_double(col[i]));
            table.rows.push_back(std::move(row));
        }
        std::ostringstream os;
        write_table(os, table);
        if (wants_csv(config)) result.outputs.add(panel.name + ".csv", os.str());
        if (wants_json(config)) {
            json data{{"tau", std::vector<double>(taus.data(), taus.data() + count)}};
            for (std::size_t s = 0; s < columns.size(); ++s)
                data[series[s]["column"].get<std::string>()] =
                    std::vector<double>(columns[s].data(), columns[s].data() + count);
            result.outputs.add_json(panel.name + ".json", data);
        }

        manifest["panels"].push_back({
            {"name", panel.name},
            {"file", panel.name + ".csv"},
            {"title", panel.title},
            {"theta", panel.theta},
            {"n", panel.n},
            {"x", {{"column", "tau"}, {"label", "omega0 tau"}, {"scale", config.grids.log_spaced ? "log" : "linear"}}},
            {"y", {{"label", panel.is_ratio ? "gamma_n^Z(tau) / gamma_n^0" : "Delta(tau) / Delta_M"}, {"reference", 1.0}}},
            {"series", series},
        });
    }
    manifest["alpha"] = config.params.alpha;
    result.outputs.add_json("fig1_manifest.json", manifest);
    return result;
}

CommandResult cmd_ion(const RunConfig& config) {
    config.validate();
    const auto model = config.spectral_model();
    const int n = config.run.n;
    const int count = config.run.measurements;
    const double tau = config.run.tau;

    // Throws PerturbativeBreakdown when a single interval is already outside the expansion.
    const double single = survival_probability(config.params, model, n, tau, config.quadrature);

    CsvTable table;
    table.header = {"t", "shuttered", "unshuttered"};
    table.rows.push_back({format_double(0.0), format_double(1.0), format_double(1.0)});
    double unshuttered_final = 1.0;
    bool extrapolated = false;
    for (int k = 1; k <= count; ++k) {
        const double t = tau * k;
        const UnshutteredSurvival u = unshuttered_survival(config.params, model, n, t, config.quadrature);
        unshuttered_final = u.value();
        extrapolated = extrapolated || u.extrapolated;
        table.rows.push_back({format_double(t), format_double(survival_power(single, k)),
                              format_double(unshuttered_final)});
    }
    const double shuttered_final = survival_power(single, count);

    const MeasurementSchedule schedule{tau, count, MeasurementMode::Shuttered};
    const double dt = config.run.dt > 0.0 ? config.run.dt : tau / 200.0;
    const int n_max = config.run.n_max > 0 ? config.run.n_max : n + 10;
    const ScheduleSimulation sim =
        simulate_schedule(config.params, model, n, schedule, dt, n_max, config.quadrature);

    const double diff = shuttered_final - unshuttered_final;
    const std::string verdict = std::abs(diff) <= 1e-12 ? "Marginal" : (diff > 0.0 ? "QZE" : "AZE");

    std::string ratio_regime;
    double ratio = std::numeric_limits<double>::infinity();
    try {
        ratio = zeno_ratio(config.params, model, n, tau, config.quadrature);
        ratio_regime = to_string(classify_ratio(ratio));
    } catch (const DegenerateDenominator&) {
        ratio_regime = "AZE-divergent";
    }

    CommandResult result;
    std::ostringstream os;
    write_table(os, table);
    result.outputs.add("ion.csv", os.str());
    std::ostringstream trace;
    write_trace_csv(trace, sim.trace);
    result.outputs.add("ion_trace.csv", trace.str());

    json verdict_json{{"verdict", verdict},
                      {"tau", tau},
                      {"N", count},
                      {"n", n},
                      {"t", tau * count},
                      {"shuttered", shuttered_final},
                      {"unshuttered", unshuttered_final},
                      {"unshuttered_extrapolated", extrapolated},
                      {"shuttered_ladder", sim.survival},
                      {"zeno_ratio", std::isfinite(ratio) ? json(ratio) : json("inf")},
                      {"params", to_json(config.params)}};
    result.outputs.add_json("ion.json", verdict_json);
    result.outputs.add_json("ion_summary.json", {{"mode", to_string(schedule.mode)},
                                                 {"tau", tau},
                                                 {"N", count},
                                                 {"survival_final", sim.survival},
                                                 {"regime", ratio_regime}});
    if (extrapolated)
        result.message = "warning: unshuttered survival beyond the perturbative range; "
                         "Markovian exponential reported instead";
    return result;
}

CommandResult cmd_crossover_map(const RunConfig& config) {
    config.validate();
    const auto& rs = config.run.r_values;
    const auto& thetas = config.run.theta_values;
    const Eigen::VectorXd taus = config.tau_grid();
    std::vector<std::string> cells(rs.size() * thetas.size());
    std::vector<int> failed(cells.size(), 0);

    parallel_for(cells.size(), config.run.jobs, [&](std::size_t k) {
        const std::size_t i = k / thetas.size();
        const std::size_t j = k % thetas.size();
        ReservoirParams p = config.params;
        p.r = rs[i];
        p.theta = thetas[j];
        try {
            const ZenoScan scan = zeno_scan(p, SpectralDensityModel::ohmic(p), config.run.n, taus,
                                            config.quadrature);
            if (scan.aze_divergent) {
                cells[k] = "AZE-divergent";
            } else if (scan.crossovers.empty()) {
                cells[k] = "none";
            } else if (scan.ratio.maxCoeff() - 1.0 < config.run.marginal_band) {
                cells[k] = "marginal";
            } else {
                cells[k] = format_double(*std::min_element(scan.crossovers.begin(), scan.crossovers.end()));
            }
        } catch (const Error&) {
            cells[k] = "error";
            failed[k] = 1;
        }
    });

    CsvTable table;
    table.header.push_back("r\\theta");
    for (double t : thetas) table.header.push_back(short_number(t));
    for (std::size_t i = 0; i < rs.size(); ++i) {
        std::vector<std::string> row{short_number(rs[i])};
        for (std::size_t j = 0; j < thetas.size(); ++j) row.push_back(cells[i * thetas.size() + j]);
        table.rows.push_back(std::move(row));
    }

    CommandResult result;
    std::ostringstream os;
    write_table(os, table);
    if (wants_csv(config)) result.outputs.add("crossover_map.csv", os.str());
    if (wants_json(config)) {
        result.outputs.add_json("crossover_map.json", {{"n", config.run.n},
                                                       {"r", rs},
                                                       {"theta", thetas},
                                                       {"cells", table.rows}});
    }
    const bool all_failed = std::all_of(failed.begin(), failed.end(), [](int f) { return f != 0; });
    if (all_failed) {
        result.exit_code = kQuadratureError;
        result.message = "every crossover-map cell failed";
    }
    return result;
}

namespace {

struct Flags {
    std::string config_path;
    bool dump_config{false};
    double r{0}, theta{0}, alpha{0}, omega0{0};
    int n{0};
    double tau_min{0}, tau_max{0};
    int tau_points{0};
    bool log{false}, linear{false};
    double t_max{0};
    int points{0};
    std::string out, format;
    int jobs{1};
    double tau{0};
    int measurements{0};
    double dt{0};
    int n_max{0};
    std::vector<double> r_values, theta_values;

    std::map<std::string, CLI::Option*> options;
};

void register_flags(CLI::App* sub, Flags& f) {
    auto& o = f.options;
    o["config"] = sub->add_option("--config", f.config_path, "JSON run configuration file");
    o["dump"] = sub->add_flag("--dump-config", f.dump_config, "Print the effective configuration and exit");
    o["r"] = sub->add_option("--r", f.r, "Cutoff ratio omega_c / omega0");
    o["theta"] = sub->add_option("--theta", f.theta, "Temperature k_B T / (hbar omega0)");
    o["alpha"] = sub->add_option("--alpha", f.alpha, "System-reservoir coupling");
    o["omega0"] = sub->add_option("--omega0", f.omega0, "System oscillator frequency");
    o["n"] = sub->add_option("--n", f.n, "Initial Fock state");
    o["tau_min"] = sub->add_option("--tau-min", f.tau_min, "Smallest measurement interval");
    o["tau_max"] = sub->add_option("--tau-max", f.tau_max, "Largest measurement interval");
    o["tau_points"] = sub->add_option("--tau-points", f.tau_points, "Number of tau grid points");
    o["log"] = sub->add_flag("--log", f.log, "Log-spaced tau grid");
    o["linear"] = sub->add_flag("--linear", f.linear, "Linearly spaced tau grid");
    o["t_max"] = sub->add_option("--t-max", f.t_max, "Coefficient tabulation end time");
    o["points"] = sub->add_option("--points", f.points, "Coefficient tabulation points");
    o["out"] = sub->add_option("--out", f.out, "Output directory");
    o["format"] = sub->add_option("--format", f.format, "csv, json or both")
                      ->check(CLI::IsMember({"csv", "json", "both"}));
    o["jobs"] = sub->add_option("--jobs", f.jobs, "Concurrent grid points")->check(CLI::PositiveNumber);
    o["tau"] = sub->add_option("--tau", f.tau, "Measurement interval (ion)");
    o["measurements"] = sub->add_option("--measurements,--N", f.measurements, "Number of measurements (ion)");
    o["dt"] = sub->add_option("--dt", f.dt, "Ladder integration step (ion)");
    o["n_max"] = sub->add_option("--n-max", f.n_max, "Ladder truncation level (ion)");
    o["r_values"] = sub->add_option("--r-values", f.r_values, "r grid (crossover-map)")->delimiter(',');
    o["theta_values"] = sub->add_option("--theta-values", f.theta_values, "theta grid (crossover-map)")->delimiter(',');
}

RunConfig resolve_config(const Flags& f) {
    const auto given = [&](const char* key) { return f.options.at(key)->count() > 0; };
    RunConfig c = given("config") ? load_config(f.config_path) : RunConfig{};
    if (given("r")) c.params.r = f.r;
    if (given("theta")) c.params.theta = f.theta;
    if (given("alpha")) c.params.alpha = f.alpha;
    if (given("omega0")) c.params.omega0 = f.omega0;
    if (given("n")) c.run.n = f.n;
    if (given("tau_min")) c.grids.tau_min = f.tau_min;
    if (given("tau_max")) c.grids.tau_max = f.tau_max;
    if (given("tau_points")) c.grids.tau_points = f.tau_points;
    if (given("log")) c.grids.log_spaced = true;
    if (given("linear")) c.grids.log_spaced = false;
    if (given("t_max")) c.grids.t_max = f.t_max;
    if (given("points")) c.grids.t_points = f.points;
    if (given("format")) c.output.format = parse_format(f.format);
    if (given("jobs")) c.run.jobs = f.jobs;
    if (given("tau")) c.run.tau = f.tau;
    if (given("measurements")) c.run.measurements = f.measurements;
    if (given("dt")) c.run.dt = f.dt;
    if (given("n_max")) c.run.n_max = f.n_max;
    if (given("r_values")) c.run.r_values = f.r_values;
    if (given("theta_values")) c.run.theta_values = f.theta_values;
    if (given("out")) {
        c.output.directory = f.out;
    } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        c.output.directory = env;
    }
    c.validate();
    return c;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"qzeno: Zeno and anti-Zeno rates for a harmonic oscillator in an Ohmic bath"};
    app.require_subcommand(1);

    struct Sub {
        std::string name;
        std::string help;
        CommandResult (*fn)(const RunConfig&);
    };
    const std::vector<Sub> subs{
        {"coeffs", "Tabulate Delta(t), gamma(t) and their running integrals", cmd_coeffs},
        {"scan", "Effective decay rate, Zeno ratio and crossovers over a tau grid", cmd_scan},
        {"fig1", "Curve families for the four regime panels", cmd_fig1},
        {"ion", "Shuttered versus un-shuttered survival", cmd_ion},
        {"crossover-map", "Smallest crossover time over an (r, theta) grid", cmd_crossover_map},
    };
    std::vector<Flags> flags(subs.size());
    std::vector<CLI::App*> apps;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        apps.push_back(app.add_subcommand(subs[i].name, subs[i].help));
        register_flags(apps.back(), flags[i]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "qzeno: " << e.what() << '\n';
        return kConfigError;
    }

    std::size_t chosen = 0;
    while (chosen < apps.size() && !apps[chosen]->parsed()) ++chosen;
    if (chosen == apps.size()) return kConfigError;

    RunConfig config;
    try {
        config = resolve_config(flags[chosen]);
    } catch (const Error& e) {
        err << "qzeno: configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    if (flags[chosen].dump_config) {
        out << to_json(config).dump(2) << '\n';
        return kOk;
    }

    try {
        ensure_writable_directory(config.output.directory);
        CommandResult result = subs[chosen].fn(config);
        result.outputs.write_all(config.output.directory);
        if (!result.message.empty()) err << "qzeno: " << result.message << '\n';
        for (const auto& [name, contents] : result.outputs.files())
            out << (std::filesystem::path(config.output.directory) / name).string() << '\n';
        return result.exit_code;
    } catch (const ConfigError& e) {
        err << "qzeno: configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const QuadratureFailure& e) {
        err << "qzeno: quadrature failure: " << e.what() << '\n';
        return kQuadratureError;
    } catch (const DegenerateDenominator& e) {
        err << "qzeno: " << e.what() << '\n';
        return kDegenerate;
    } catch (const PerturbativeBreakdown& e) {
        err << "qzeno: perturbative breakdown: " << e.what()
            << " (reduce alpha or tau so the escape probability per interval stays small)\n";
        return kPerturbative;
    } catch (const InvalidArgument& e) {
        err << "qzeno: invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        err << "qzeno: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace qzeno::cli
