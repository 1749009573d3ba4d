// zeno.cpp — Zeno / anti-Zeno rates, ratios and crossover search

#include "qzeno/zeno.hpp"

#include <cmath>
#include <limits>

#include "qzeno/errors.hpp"
#include "qzeno/parallel.hpp"

namespace qzeno {

namespace {

void check_n_tau(int n, double tau) {
    if (n < 0) throw InvalidArgument("Fock index n must be >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be positive");
}

Validity validity_of(double escape, const ZenoSettings& settings) {
    if (escape > settings.escape_fail) return Validity::Breakdown;
    if (escape > settings.escape_warn) return Validity::Warn;
    return Validity::Ok;
}

} // namespace

std::string to_string(Regime r) {
    switch (r) {
    case Regime::QZE: return "QZE";
    case Regime::AZE: return "AZE";
    case Regime::Marginal: return "Marginal";
    }
    return "?";
}

DecayEvaluation evaluate_decay(const ReservoirParams& params, const SpectralDensityModel& model,
                               int n, double tau, const QuadratureSpec& spec,
                               const ZenoSettings& settings) {
    check_n_tau(n, tau);
    const double id = integrated_diffusion(params, model, tau, spec);
    const double ig = integrated_damping(params, model, tau, spec);
    DecayEvaluation e;
    e.escape_probability = (2.0 * n + 1.0) * id - ig;
    e.rate = e.escape_probability / tau;
    e.validity = validity_of(e.escape_probability, settings);
    return e;
}

double effective_decay_rate(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n, double tau, const QuadratureSpec& spec,
                            const ZenoSettings& settings) {
    return evaluate_decay(params, model, n, tau, spec, settings).rate;
}

double effective_decay_rate_fd(const ReservoirParams& params, const SpectralDensityModel& model,
                               int n, double tau, const QuadratureSpec& spec,
                               const ZenoSettings&) {
    check_n_tau(n, tau);
    model.check_consistent(params);
    const double level = 2.0 * n + 1.0;
    const RealFunction minus = [&](double w) {
        return level * weighted_spectral_density(model, params, w) - spectral_density(model, w);
    };
    const RealFunction plus = [&](double w) {
        return level * weighted_spectral_density(model, params, w) + spectral_density(model, w);
    };
    const double scale = std::max(params.omega0, model.scale());
    return params.alpha2() * tau * sinc2_pair_integral(minus, plus, params.omega0, scale, tau, spec);
}

double markovian_decay_rate(const ReservoirParams& params, const SpectralDensityModel& model,
                            int n) {
    if (n < 0) throw InvalidArgument("Fock index n must be >= 0");
    const MarkovianLimits m = markovian_limits(params, model);
    return (2.0 * n + 1.0) * m.delta_m - m.gamma_m;
}

bool is_degenerate(const ReservoirParams& params, double markov_rate,
                   const ZenoSettings& settings) {
    return std::abs(markov_rate) < settings.degeneracy_guard * params.alpha2() * params.omega0;
}

double zeno_ratio(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                  double tau, const QuadratureSpec& spec, const ZenoSettings& settings) {
    const double markov = markovian_decay_rate(params, model, n);
    if (is_degenerate(params, markov, settings))
        throw DegenerateDenominator("Markovian decay rate vanishes: AZE-divergent", markov);
    return effective_decay_rate(params, model, n, tau, spec, settings) / markov;
}

double high_t_ratio(const ReservoirParams& params, const SpectralDensityModel& model, double tau,
                    const QuadratureSpec& spec) {
    check_n_tau(0, tau);
    const MarkovianLimits m = markovian_limits(params, model);
    if (!(m.delta_m > 0.0))
        throw DegenerateDenominator("Markovian diffusion coefficient vanishes", m.delta_m);
    return integrated_diffusion(params, model, tau, spec) / (tau * m.delta_m);
}

Regime classify_ratio(double ratio, const ZenoSettings& settings) {
    if (ratio < 1.0 - settings.ratio_tol) return Regime::QZE;
    if (ratio > 1.0 + settings.ratio_tol) return Regime::AZE;
    return Regime::Marginal;
}

Regime classify_regime(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                       double tau, const QuadratureSpec& spec, const ZenoSettings& settings) {
    try {
        return classify_ratio(zeno_ratio(params, model, n, tau, spec, settings), settings);
    } catch (const DegenerateDenominator&) {
        return Regime::AZE;
    }
}

Eigen::VectorXd log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo)) throw InvalidArgument("log grid needs 0 < lo < hi");
    if (points < 2) throw InvalidArgument("grid needs at least two points");
    Eigen::VectorXd g =
        Eigen::VectorXd::LinSpaced(points, std::log(lo), std::log(hi)).array().exp().matrix();
    g[0] = lo;
    g[points - 1] = hi;
    return g;
}

Eigen::VectorXd linear_grid(double lo, double hi, int points) {
    if (!(hi > lo)) throw InvalidArgument("linear grid needs lo < hi");
    if (points < 2) throw InvalidArgument("grid needs at least two points");
    return Eigen::VectorXd::LinSpaced(points, lo, hi);
}

ZenoScan zeno_scan(const ReservoirParams& params, const SpectralDensityModel& model, int n,
                   const Eigen::VectorXd& taus, const QuadratureSpec& spec,
                   const ZenoSettings& settings, int jobs) {
    if (taus.size() < 2) throw InvalidArgument("scan needs at least two tau values");
    for (Eigen::Index i = 0; i < taus.size(); ++i) {
        check_n_tau(n, taus[i]);
        if (i > 0 && !(taus[i] > taus[i - 1]))
            throw InvalidArgument("scan taus must be strictly increasing");
    }

    ZenoScan scan;
    scan.n = n;
    scan.params = params;
    scan.taus = taus;
    scan.markov_rate = markovian_decay_rate(params, model, n);
    scan.aze_divergent = is_degenerate(params, scan.markov_rate, settings);

    const auto count = taus.size();
    scan.rate_z.resize(count);
    scan.ratio.resize(count);
    scan.regimes.assign(static_cast<std::size_t>(count), Regime::AZE);

    parallel_for(static_cast<std::size_t>(count), jobs, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        scan.rate_z[i] = effective_decay_rate(params, model, n, taus[i], spec, settings);
    });

    if (scan.aze_divergent) {
        scan.ratio.setConstant(std::numeric_limits<double>::infinity());
        return scan;
    }

    scan.ratio = scan.rate_z / scan.markov_rate;
    for (Eigen::Index i = 0; i < count; ++i)
        scan.regimes[static_cast<std::size_t>(i)] = classify_ratio(scan.ratio[i], settings);

    const Eigen::VectorXd excess = scan.ratio.array() - 1.0;
    const auto brackets = brackets_from_samples({taus.data(), static_cast<std::size_t>(count)},
                                                {excess.data(), static_cast<std::size_t>(count)});
    const RealFunction f = [&](double tau) {
        return effective_decay_rate(params, model, n, tau, spec, settings) / scan.markov_rate - 1.0;
    };
    scan.crossovers.resize(brackets.size());
    parallel_for(brackets.size(), jobs, [&](std::size_t b) {
        scan.crossovers[b] = bisect(f, brackets[b], 1e-6 * brackets[b].lo);
    });
    return scan;
}

std::vector<double> find_crossover_time(const ReservoirParams& params,
                                        const SpectralDensityModel& model, int n, TauRange range,
                                        int grid_points, const QuadratureSpec& spec,
                                        const ZenoSettings& settings, int jobs) {
    if (grid_points < 16) throw InvalidArgument("crossover scan needs at least 16 grid points");
    const double markov = markovian_decay_rate(params, model, n);
    if (is_degenerate(params, markov, settings))
        throw DegenerateDenominator("no finite crossover: Markovian decay rate vanishes", markov);
    const ZenoScan scan =
        zeno_scan(params, model, n, log_grid(range.lo, range.hi, grid_points), spec, settings, jobs);
    return scan.crossovers;
}

} // namespace qzeno
