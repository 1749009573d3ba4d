// dynamics.hpp — Survival probabilities, measurement schedules and the Fock-ladder rate equation

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qzeno/coefficients.hpp"
#include "qzeno/zeno.hpp"

namespace qzeno {

struct TransitionProbabilities {
    double p_up{0.0};   // (n+1) int [Delta - gamma]
    double p_down{0.0}; // n int [Delta + gamma]
    Validity validity{Validity::Ok};

    double escape() const { return p_up + p_down; }
};

TransitionProbabilities transition_probabilities(const ReservoirParams& params,
                                                 const SpectralDensityModel& model, int n,
                                                 double tau, const QuadratureSpec& spec = {},
                                                 const ZenoSettings& settings = {});

double survival_probability(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n, double tau, const QuadratureSpec& spec = {},
                            const ZenoSettings& settings = {});

enum class MeasurementMode { Shuttered, Unshuttered };

std::string to_string(MeasurementMode m);

struct MeasurementSchedule {
    double tau{1.0};
    int n_measurements{1};
    MeasurementMode mode{MeasurementMode::Shuttered};

    double duration() const { return tau * n_measurements; }
    void validate() const;
};

// p^N, for a single-interval survival p.
double survival_power(double single_interval_survival, int n_measurements);

struct UnshutteredSurvival {
    double perturbative{1.0}; // 1 - [(2n+1) int Delta - int gamma] over the whole duration
    double markovian{1.0};    // exp(-gamma_n^0 t_total)
    bool extrapolated{false}; // perturbative branch invalid; value() falls back to markovian

    double value() const { return extrapolated ? markovian : perturbative; }
};

UnshutteredSurvival unshuttered_survival(const ReservoirParams& params,
                                         const SpectralDensityModel& model, int n, double t_total,
                                         const QuadratureSpec& spec = {},
                                         const ZenoSettings& settings = {});

// Shuttered: P_n(tau)^N. Unshuttered: survival over N tau without intermediate measurements.
double survival_after_measurements(const ReservoirParams& params,
                                   const SpectralDensityModel& model, int n,
                                   const MeasurementSchedule& schedule,
                                   const QuadratureSpec& spec = {},
                                   const ZenoSettings& settings = {});

// exp(-dx^2 int_0^tau Delta): decay of the position-space coherence at separation dx.
double eid_attenuation(const ReservoirParams& params, const SpectralDensityModel& model, double dx,
                       double tau, const QuadratureSpec& spec = {});

// Populations rho_nn over Fock levels 0..n_max. `time` is the coefficient clock, which a
// non-selective measurement resets to zero.
struct LadderState {
    Eigen::VectorXd populations;
    double time{0.0};

    int n_max() const { return static_cast<int>(populations.size()) - 1; }
    double total() const { return populations.sum(); }
    void validate() const;

    // |n><n| with at least five levels of headroom above n.
    static LadderState fock(int n, int n_max);
};

struct LadderOptions {
    double leakage_tol{1e-6};  // top-level population that raises TruncationLeakage
    double stiffness_limit{0.1}; // dt * max total rate
};

// (Delta(t), gamma(t)) at coefficient-clock time t.
using CoefficientRates = std::function<std::pair<double, double>(double)>;

// Linear interpolation into a tabulated series; exact at grid nodes.
CoefficientRates rates_from_series(const CoefficientSeries& series);

// Right-hand side of the birth-death system: level k goes up at (k+1)(Delta - gamma) and down
// at k(Delta + gamma). Flux out of the top level is lost.
Eigen::VectorXd ladder_derivative(const Eigen::VectorXd& populations, double delta, double gamma);

// Classical fourth-order Runge-Kutta from state.time to t_end.
LadderState evolve_ladder(const CoefficientRates& rates, LadderState state, double dt, double t_end,
                          const LadderOptions& options = {});

// Tabulates Delta and gamma on a dt/2 grid so that every Runge-Kutta stage hits a node.
LadderState evolve_ladder(const ReservoirParams& params, const SpectralDensityModel& model,
                          LadderState state, double dt, double t_end,
                          const QuadratureSpec& spec = {}, const LadderOptions& options = {});

struct LadderTrace {
    std::vector<double> times; // elapsed lab time
    std::vector<Eigen::VectorXd> populations;
};

struct ScheduleSimulation {
    LadderState final_state;
    LadderTrace trace;
    double survival{1.0}; // population of the initial level at the end
};

// Ladder evolution through a whole schedule. Shuttered runs reset the coefficient clock after
// every interval; unshuttered runs evolve once over N tau.
ScheduleSimulation simulate_schedule(const ReservoirParams& params,
                                     const SpectralDensityModel& model, int n,
                                     const MeasurementSchedule& schedule, double dt, int n_max,
                                     const QuadratureSpec& spec = {},
                                     const LadderOptions& options = {}, int samples_per_interval = 10);

} // namespace qzeno
