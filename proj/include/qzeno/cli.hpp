// cli.hpp — Run configuration and the qzeno subcommands

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qzeno/errors.hpp"
#include "qzeno/io.hpp"
#include "qzeno/numerics.hpp"
#include "qzeno/spectral.hpp"

namespace qzeno::cli {

inline constexpr const char* kOutDirEnv = "QZENO_OUT_DIR";

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kConfigError = 2,
    kQuadratureError = 3,
    kDegenerate = 4,
    kPerturbative = 5,
};

struct ConfigError : Error {
    using Error::Error;
};

enum class OutputFormat { Csv, Json, Both };

struct GridConfig {
    double tau_min{1e-3};
    double tau_max{1e2};
    int tau_points{200};
    bool log_spaced{true};
    double t_max{30.0};
    int t_points{300};
};

struct OutputConfig {
    std::string directory{"."};
    OutputFormat format{OutputFormat::Csv};
};

// Inputs specific to individual subcommands.
struct RunOptions {
    int n{0};
    double tau{1.0};         // ion: measurement interval
    int measurements{10};    // ion: N
    double dt{0.0};          // ion: ladder step; 0 picks tau / 200
    int n_max{0};            // ion: ladder truncation; 0 picks n + 10
    int jobs{1};
    std::vector<double> r_values{0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<double> theta_values{0.0, 1.0, 10.0, 100.0};
    double marginal_band{0.01}; // crossover-map: max excursion above 1 still called marginal
};

struct RunConfig {
    ReservoirParams params{1.0, 0.5, 100.0, 0.1};
    std::string model{"ohmic_lorentz_drude"};
    QuadratureSpec quadrature;
    GridConfig grids;
    OutputConfig output;
    RunOptions run;

    void validate() const;
    SpectralDensityModel spectral_model() const;
    Eigen::VectorXd tau_grid() const;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& s);

struct CommandResult {
    int exit_code{kOk};
    OutputSet outputs;
    std::string message; // written to stderr when non-empty
};

CommandResult cmd_coeffs(const RunConfig& config);
CommandResult cmd_scan(const RunConfig& config);
CommandResult cmd_fig1(const RunConfig& config);
CommandResult cmd_ion(const RunConfig& config);
CommandResult cmd_crossover_map(const RunConfig& config);

// Full driver: parses arguments, runs the subcommand, writes outputs, maps errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qzeno::cli
