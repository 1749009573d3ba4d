// zeno.hpp — Effective decay rate under repeated non-selective measurements

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qzeno/coefficients.hpp"

namespace qzeno {

enum class Regime { QZE, AZE, Marginal };

std::string to_string(Regime r);

struct ZenoSettings {
    double ratio_tol{1e-3};
    // |markov rate| below degeneracy_guard * alpha^2 * omega0 is treated as zero.
    double degeneracy_guard{1e-12};
    // Escape probability per interval: warn above, fail above.
    double escape_warn{0.1};
    double escape_fail{0.5};
};

// Breakdown is reported, not thrown: the rate is an O(alpha^2) quantity whose ratio to the
// Markovian rate does not depend on alpha. Probability-level operations throw instead.
enum class Validity { Ok, Warn, Breakdown };

struct DecayEvaluation {
    double rate{0.0};             // gamma_n^Z(tau)
    double escape_probability{0.0}; // tau * gamma_n^Z(tau)
    Validity validity{Validity::Ok};
};

// (1/tau) [(2n+1) int_0^tau Delta - int_0^tau gamma], with the escape-probability check.
DecayEvaluation evaluate_decay(const ReservoirParams& params, const SpectralDensityModel& model,
                               int n, double tau, const QuadratureSpec& spec = {},
                               const ZenoSettings& settings = {});

double effective_decay_rate(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n, double tau, const QuadratureSpec& spec = {},
                            const ZenoSettings& settings = {});

// Same quantity from one frequency integral with sinc^2 weights (2n+1) coth -/+ 1.
double effective_decay_rate_fd(const ReservoirParams& params, const SpectralDensityModel& model,
                               int n, double tau, const QuadratureSpec& spec = {},
                               const ZenoSettings& settings = {});

// (2n+1) Delta_M - gamma_M
double markovian_decay_rate(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n);

bool is_degenerate(const ReservoirParams& params, double markov_rate,
                   const ZenoSettings& settings = {});

// Throws DegenerateDenominator when the Markovian rate vanishes (theta = 0, n = 0).
double zeno_ratio(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                  double tau, const QuadratureSpec& spec = {}, const ZenoSettings& settings = {});

// int_0^tau Delta / (tau Delta_M); the n-independent high-temperature form.
double high_t_ratio(const ReservoirParams& params, const SpectralDensityModel& model, double tau,
                    const QuadratureSpec& spec = {});

Regime classify_ratio(double ratio, const ZenoSettings& settings = {});

Regime classify_regime(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                       double tau, const QuadratureSpec& spec = {},
                       const ZenoSettings& settings = {});

struct TauRange {
    double lo{1e-3};
    double hi{1e2};
};

Eigen::VectorXd log_grid(double lo, double hi, int points);
Eigen::VectorXd linear_grid(double lo, double hi, int points);

// All tau* in the range where the ratio crosses 1, found by a log-spaced scan followed by
// bisection to 1e-6 relative. An empty result means no crossover in range.
std::vector<double> find_crossover_time(const ReservoirParams& params,
                                        const SpectralDensityModel& model, int n, TauRange range,
                                        int grid_points, const QuadratureSpec& spec = {},
                                        const ZenoSettings& settings = {}, int jobs = 1);

struct ZenoScan {
    int n{0};
    Eigen::VectorXd taus;
    Eigen::VectorXd rate_z;
    Eigen::VectorXd ratio; // +inf when the denominator is degenerate
    std::vector<Regime> regimes;
    double markov_rate{0.0};
    bool aze_divergent{false};
    std::vector<double> crossovers;
    ReservoirParams params;
};

// Rates, ratios and regimes on the given grid, plus crossovers bisected from the sign
// changes of the sampled ratio.
ZenoScan zeno_scan(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                   const Eigen::VectorXd& taus, const QuadratureSpec& spec = {},
                   const ZenoSettings& settings = {}, int jobs = 1);

} // namespace qzeno
