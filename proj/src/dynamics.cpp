// dynamics.cpp — Transition/survival probabilities and the birth-death ladder

#include "qzeno/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qzeno/errors.hpp"

namespace qzeno {

namespace {

constexpr double kNegativeSlack = 1e-12;

double clamp_checked(double p, const char* what) {
    if (p < -kNegativeSlack) {
        std::ostringstream msg;
        msg << what << " probability " << p << " is negative: quadrature failure";
        throw NegativeProbability(msg.str());
    }
    return std::max(p, 0.0);
}

void check_escape(double escape, const ZenoSettings& settings) {
    if (escape > settings.escape_fail) {
        std::ostringstream msg;
        msg << "escape probability " << escape << " exceeds " << settings.escape_fail
            << ": second-order treatment is not valid";
        throw PerturbativeBreakdown(msg.str(), escape);
    }
}

} // namespace

TransitionProbabilities transition_probabilities(const ReservoirParams& params,
                                                 const SpectralDensityModel& model, int n,
                                                 double tau, const QuadratureSpec& spec,
                                                 const ZenoSettings& settings) {
    if (n < 0) throw InvalidArgument("Fock index n must be >= 0");
    if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
    const double id = integrated_diffusion(params, model, tau, spec);
    const double ig = integrated_damping(params, model, tau, spec);
    TransitionProbabilities p;
    p.p_up = clamp_checked((n + 1.0) * (id - ig), "upward");
    p.p_down = n == 0 ? 0.0 : clamp_checked(n * (id + ig), "downward");
    check_escape(p.escape(), settings);
    p.validity = p.escape() > settings.escape_warn ? Validity::Warn : Validity::Ok;
    return p;
}

double survival_probability(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n, double tau, const QuadratureSpec& spec,
                            const ZenoSettings& settings) {
    return 1.0 - transition_probabilities(params, model, n, tau, spec, settings).escape();
}

std::string to_string(MeasurementMode m) {
    return m == MeasurementMode::Shuttered ? "shuttered" : "unshuttered";
}

void MeasurementSchedule::validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("schedule tau must be positive");
    if (n_measurements < 1) throw InvalidArgument("schedule needs at least one measurement");
}

double survival_power(double single_interval_survival, int n_measurements) {
    if (n_measurements < 0) throw InvalidArgument("measurement count must be >= 0");
    if (single_interval_survival < 0.0 || single_interval_survival > 1.0)
        throw InvalidArgument("single-interval survival must lie in [0, 1]");
    return std::pow(single_interval_survival, n_measurements);
}

UnshutteredSurvival unshuttered_survival(const ReservoirParams& params,
                                         const SpectralDensityModel& model, int n, double t_total,
                                         const QuadratureSpec& spec, const ZenoSettings& settings) {
    if (!(t_total > 0.0)) throw InvalidArgument("t_total must be positive");
    const DecayEvaluation e = evaluate_decay(params, model, n, t_total, spec, settings);
    UnshutteredSurvival s;
    s.markovian = std::exp(-markovian_decay_rate(params, model, n) * t_total);
    s.extrapolated = e.validity == Validity::Breakdown;
    s.perturbative = 1.0 - e.escape_probability;
    if (!s.extrapolated && s.perturbative > 1.0 + kNegativeSlack)
        throw NegativeProbability("total escape probability is negative: quadrature failure");
    return s;
}

double survival_after_measurements(const ReservoirParams& params,
                                   const SpectralDensityModel& model, int n,
                                   const MeasurementSchedule& schedule, const QuadratureSpec& spec,
                                   const ZenoSettings& settings) {
    schedule.validate();
    if (schedule.mode == MeasurementMode::Unshuttered) {
        const UnshutteredSurvival s =
            unshuttered_survival(params, model, n, schedule.duration(), spec, settings);
        if (s.extrapolated)
            throw PerturbativeBreakdown("unshuttered survival is outside the perturbative range");
        return s.perturbative;
    }
    const double single = survival_probability(params, model, n, schedule.tau, spec, settings);
    return survival_power(single, schedule.n_measurements);
}

double eid_attenuation(const ReservoirParams& params, const SpectralDensityModel& model, double dx,
                       double tau, const QuadratureSpec& spec) {
    if (!(tau >= 0.0)) throw InvalidArgument("tau must be >= 0");
    if (dx == 0.0 || tau == 0.0) return 1.0;
    return std::exp(-dx * dx * integrated_diffusion(params, model, tau, spec));
}

void LadderState::validate() const {
    if (populations.size() < 1) throw InvalidArgument("ladder state has no levels");
    if ((populations.array() < 0.0).any() || (populations.array() > 1.0).any())
        throw InvalidArgument("ladder populations must lie in [0, 1]");
    if (populations.sum() > 1.0 + 1e-9) throw InvalidArgument("ladder populations sum above 1");
}

LadderState LadderState::fock(int n, int n_max) {
    if (n < 0) throw InvalidArgument("Fock index n must be >= 0");
    if (n_max < n + 5) throw InvalidArgument("ladder truncation needs n_max >= n + 5");
    LadderState s;
    s.populations = Eigen::VectorXd::Zero(n_max + 1);
    s.populations[n] = 1.0;
    return s;
}

CoefficientRates rates_from_series(const CoefficientSeries& series) {
    series.validate();
    return [&series](double t) -> std::pair<double, double> {
        const auto& ts = series.times;
        const auto last = ts.size() - 1;
        if (t <= ts[0]) return {series.delta[0], series.gamma[0]};
        if (t >= ts[last]) {
            if (t > ts[last] * (1.0 + 1e-12) + 1e-15)
                throw InvalidArgument("ladder time runs past the tabulated coefficient series");
            return {series.delta[last], series.gamma[last]};
        }
        const auto it = std::upper_bound(ts.data(), ts.data() + ts.size(), t);
        const auto hi = static_cast<Eigen::Index>(it - ts.data());
        const auto lo = hi - 1;
        const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
        return {series.delta[lo] + w * (series.delta[hi] - series.delta[lo]),
                series.gamma[lo] + w * (series.gamma[hi] - series.gamma[lo])};
    };
}

Eigen::VectorXd ladder_derivative(const Eigen::VectorXd& p, double delta, double gamma) {
    const Eigen::Index size = p.size();
    const Eigen::Index m = size - 1;
    const Eigen::ArrayXd level = Eigen::ArrayXd::LinSpaced(size, 0.0, static_cast<double>(m));
    const Eigen::ArrayXd up = (level + 1.0) * (delta - gamma);
    const Eigen::ArrayXd down = level * (delta + gamma);

    Eigen::ArrayXd dp = -(up + down) * p.array();
    if (m > 0) {
        dp.tail(m) += up.head(m) * p.array().head(m);
        dp.head(m) += down.tail(m) * p.array().tail(m);
    }
    return dp.matrix();
}

LadderState evolve_ladder(const CoefficientRates& rates, LadderState state, double dt, double t_end,
                          const LadderOptions& options) {
    if (!(dt > 0.0)) throw InvalidArgument("ladder step must be positive");
    if (t_end < state.time) throw InvalidArgument("t_end precedes the current ladder time");
    const double m = static_cast<double>(state.n_max());

    const auto check_stiff = [&](double delta, double gamma, double h) {
        const double max_rate = (m + 1.0) * std::abs(delta - gamma) + m * std::abs(delta + gamma);
        if (h * max_rate > options.stiffness_limit) {
            std::ostringstream msg;
            msg << "ladder step " << h << " too large for total rate " << max_rate;
            throw StiffStep(msg.str());
        }
    };

    const double span = t_end - state.time;
    const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
    const double t0 = state.time;
    Eigen::VectorXd& p = state.populations;
    for (long k = 0; k < steps; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        const double h = (k + 1 == steps) ? t_end - t : dt;
        if (!(h > 0.0)) break;
        const auto [d0, g0] = rates(t);
        const auto [d1, g1] = rates(t + 0.5 * h);
        const auto [d2, g2] = rates(t + h);
        check_stiff(d0, g0, h);
        check_stiff(d1, g1, h);
        check_stiff(d2, g2, h);
        const Eigen::VectorXd k1 = ladder_derivative(p, d0, g0);
        const Eigen::VectorXd k2 = ladder_derivative(p + 0.5 * h * k1, d1, g1);
        const Eigen::VectorXd k3 = ladder_derivative(p + 0.5 * h * k2, d1, g1);
        const Eigen::VectorXd k4 = ladder_derivative(p + h * k3, d2, g2);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    state.time = t_end;

    const double top = p[p.size() - 1];
    if (top > options.leakage_tol) {
        std::ostringstream msg;
        msg << "population " << top << " reached the truncation level " << state.n_max();
        throw TruncationLeakage(msg.str());
    }
    return state;
}

LadderState evolve_ladder(const ReservoirParams& params, const SpectralDensityModel& model,
                          LadderState state, double dt, double t_end, const QuadratureSpec& spec,
                          const LadderOptions& options) {
    if (!(dt > 0.0)) throw InvalidArgument("ladder step must be positive");
    if (t_end <= state.time) return state;
    // Nodes at every half step measured from the clock origin.
    const auto half_steps = static_cast<int>(std::ceil(2.0 * t_end / dt - 1e-9));
    Eigen::VectorXd times(half_steps + 1);
    for (int i = 0; i <= half_steps; ++i) times[i] = std::min(0.5 * dt * i, t_end);
    if (half_steps >= 1 && times[half_steps] <= times[half_steps - 1]) {
        times.conservativeResize(half_steps);
        times[half_steps - 1] = t_end;
    }
    const CoefficientSeries series = tabulate_coefficients(params, model, times, spec);
    return evolve_ladder(rates_from_series(series), std::move(state), dt, t_end, options);
}

ScheduleSimulation simulate_schedule(const ReservoirParams& params,
                                     const SpectralDensityModel& model, int n,
                                     const MeasurementSchedule& schedule, double dt, int n_max,
                                     const QuadratureSpec& spec, const LadderOptions& options,
                                     int samples_per_interval) {
    schedule.validate();
    if (!(dt > 0.0)) throw InvalidArgument("ladder step must be positive");
    if (samples_per_interval < 1) throw InvalidArgument("need at least one sample per interval");

    const bool shuttered = schedule.mode == MeasurementMode::Shuttered;
    const double segment = shuttered ? schedule.tau : schedule.duration();
    const int intervals = shuttered ? schedule.n_measurements : 1;
    const int samples = shuttered ? samples_per_interval : samples_per_interval * schedule.n_measurements;

    // Whole number of steps per sample so every sample boundary is a step boundary.
    const auto steps_per_sample =
        std::max(1L, static_cast<long>(std::ceil(segment / (dt * samples) - 1e-9)));
    const double h = segment / static_cast<double>(steps_per_sample * samples);

    Eigen::VectorXd times(2 * steps_per_sample * samples + 1);
    for (Eigen::Index i = 0; i < times.size(); ++i) times[i] = 0.5 * h * static_cast<double>(i);
    times[times.size() - 1] = segment;
    const CoefficientSeries series = tabulate_coefficients(params, model, times, spec);
    const CoefficientRates rates = rates_from_series(series);

    ScheduleSimulation sim;
    LadderState state = LadderState::fock(n, n_max);
    sim.trace.times.push_back(0.0);
    sim.trace.populations.push_back(state.populations);
    double elapsed = 0.0;
    for (int interval = 0; interval < intervals; ++interval) {
        state.time = 0.0; // non-selective measurement: correlations erased, populations kept
        for (int s = 1; s <= samples; ++s) {
            const double stop = s == samples ? segment : h * static_cast<double>(steps_per_sample * s);
            state = evolve_ladder(rates, std::move(state), h, stop, options);
            sim.trace.times.push_back(elapsed + stop);
            sim.trace.populations.push_back(state.populations);
        }
        elapsed += segment;
    }
    sim.survival = state.populations[n];
    sim.final_state = std::move(state);
    return sim;
}

} // namespace qzeno
