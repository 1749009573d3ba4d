// coefficients.cpp — Delta(t), gamma(t) as single frequency integrals with closed time kernels

#include "qzeno/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "qzeno/errors.hpp"
#include "qzeno/format.hpp"
#include "qzeno/parallel.hpp"

namespace qzeno {

namespace {

double frequency_scale(const ReservoirParams& params, const SpectralDensityModel& model) {
    return std::max(params.omega0, model.scale());
}

void check_inputs(const ReservoirParams& params, const SpectralDensityModel& model, double t) {
    model.check_consistent(params);
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
}

// Integral over omega of weight(omega) * (1/2)[sinc((w - w0) t) + sign * sinc((w + w0) t)].
double sinc_pair_integral(const RealFunction& weight, double sign, double omega0, double scale,
                          double envelope, double t, const QuadratureSpec& spec) {
    const RealFunction f = [&](double w) {
        return weight(w) * 0.5 * (sinc((w - omega0) * t) + sign * sinc((w + omega0) * t));
    };
    IntegrandProfile profile;
    profile.scale = scale;
    profile.oscillation = t;
    profile.envelope_exponent = envelope + 1.0;
    return integrate_semi_infinite(f, spec, profile).value;
}

} // namespace

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

double delta_kernel(double omega, double omega0, double t) {
    return 0.5 * t * (sinc((omega - omega0) * t) + sinc((omega + omega0) * t));
}

double damping_kernel(double omega, double omega0, double t) {
    return 0.5 * t * (sinc((omega - omega0) * t) - sinc((omega + omega0) * t));
}

double integrated_delta_kernel(double omega, double omega0, double tau) {
    const double sm = sinc(0.5 * (omega - omega0) * tau);
    const double sp = sinc(0.5 * (omega + omega0) * tau);
    return 0.25 * tau * tau * (sm * sm + sp * sp);
}

double integrated_damping_kernel(double omega, double omega0, double tau) {
    const double sm = sinc(0.5 * (omega - omega0) * tau);
    const double sp = sinc(0.5 * (omega + omega0) * tau);
    return 0.25 * tau * tau * (sm * sm - sp * sp);
}

double sinc2_pair_integral(const RealFunction& weight_minus, const RealFunction& weight_plus,
                           double omega0, double scale, double tau, const QuadratureSpec& spec) {
    spec.validate();
    if (!(tau > 0.0)) throw InvalidArgument("sinc^2 kernel integral requires tau > 0");

    const double quarter_period = 0.5 * std::numbers::pi / tau;
    IntegrandProfile profile;
    profile.scale = scale;
    const double structure_end = tail_cut(spec, profile);
    // Past 4 pi / tau the 1 - cos split below loses nothing to cancellation.
    const double split = std::max(structure_end, 4.0 * std::numbers::pi / tau);

    const RealFunction full = [&](double w) {
        const double sm = sinc(0.5 * (w - omega0) * tau);
        const double sp = sinc(0.5 * (w + omega0) * tau);
        return 0.25 * (weight_minus(w) * sm * sm + weight_plus(w) * sp * sp);
    };

    QuadratureResult head = integrate_interval(full, 0.0, structure_end, spec,
                                               std::min(quarter_period, structure_end / 16.0));
    if (split > structure_end)
        head += integrate_interval(full, structure_end, split, spec, quarter_period);

    // sinc^2(x tau / 2) / 4 = (1 - cos(x tau)) / (2 x^2 tau^2): a smooth mean plus a pure
    // oscillation, each handled by its own tail method.
    const double inv = 1.0 / (2.0 * tau * tau);
    const RealFunction mean = [&](double w) {
        const double xm = w - omega0;
        const double xp = w + omega0;
        return inv * (weight_minus(w) / (xm * xm) + weight_plus(w) / (xp * xp));
    };
    const RealFunction wave = [&](double w) {
        const double xm = w - omega0;
        const double xp = w + omega0;
        return -inv * (weight_minus(w) * std::cos(xm * tau) / (xm * xm) +
                       weight_plus(w) * std::cos(xp * tau) / (xp * xp));
    };

    QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = 0.125 * std::max(spec.abs_tol, spec.rel_tol * std::abs(head.value));
    head += integrate_tail_smooth(mean, split, tail_spec);
    head += integrate_tail_oscillatory(wave, split, tau, tail_spec);
    return head.value;
}

double diffusion_coefficient(const ReservoirParams& params, const SpectralDensityModel& model,
                             double t, const QuadratureSpec& spec) {
    check_inputs(params, model, t);
    if (t == 0.0) return 0.0;
    const RealFunction weight = [&](double w) { return weighted_spectral_density(model, params, w); };
    const double v = sinc_pair_integral(weight, +1.0, params.omega0, frequency_scale(params, model),
                                        model.envelope_exponent(), t, spec);
    return params.alpha2() * t * v;
}

double damping_coefficient(const ReservoirParams& params, const SpectralDensityModel& model,
                           double t, const QuadratureSpec& spec) {
    check_inputs(params, model, t);
    if (t == 0.0) return 0.0;
    const RealFunction weight = [&](double w) { return spectral_density(model, w); };
    const double v = sinc_pair_integral(weight, -1.0, params.omega0, frequency_scale(params, model),
                                        model.envelope_exponent(), t, spec);
    return params.alpha2() * t * v;
}

double integrated_diffusion(const ReservoirParams& params, const SpectralDensityModel& model,
                            double tau, const QuadratureSpec& spec) {
    check_inputs(params, model, tau);
    if (tau == 0.0) return 0.0;
    const RealFunction weight = [&](double w) { return weighted_spectral_density(model, params, w); };
    const double v = sinc2_pair_integral(weight, weight, params.omega0,
                                         frequency_scale(params, model), tau, spec);
    return params.alpha2() * tau * tau * v;
}

double integrated_damping(const ReservoirParams& params, const SpectralDensityModel& model,
                          double tau, const QuadratureSpec& spec) {
    check_inputs(params, model, tau);
    if (tau == 0.0) return 0.0;
    const RealFunction minus = [&](double w) { return spectral_density(model, w); };
    const RealFunction plus = [&](double w) { return -spectral_density(model, w); };
    const double v = sinc2_pair_integral(minus, plus, params.omega0,
                                         frequency_scale(params, model), tau, spec);
    return params.alpha2() * tau * tau * v;
}

MarkovianLimits markovian_limits(const ReservoirParams& params, const SpectralDensityModel& model) {
    model.check_consistent(params);
    const double resonance = 0.5 * std::numbers::pi * params.alpha2() *
                             spectral_density(model, params.omega0);
    MarkovianLimits m;
    m.gamma_m = resonance;
    m.delta_m = resonance * thermal_factor(params.omega0, params.theta, params.omega0);
    return m;
}

MarkovianLimits markovian_limits_numerical(const ReservoirParams& params,
                                           const SpectralDensityModel& model, double t_large,
                                           const QuadratureSpec& spec) {
    if (!(t_large > 0.0)) throw InvalidArgument("t_large must be positive");
    return {diffusion_coefficient(params, model, t_large, spec),
            damping_coefficient(params, model, t_large, spec)};
}

void CoefficientSeries::validate() const {
    const auto n = times.size();
    if (n < 1 || delta.size() != n || gamma.size() != n || int_delta.size() != n ||
        int_gamma.size() != n)
        throw InvalidArgument("coefficient series columns differ in length");
    if (times[0] != 0.0) throw InvalidArgument("coefficient series must start at t = 0");
    for (Eigen::Index i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1]))
            throw InvalidArgument("coefficient series times must be strictly increasing");
}

CoefficientSeries tabulate_coefficients(const ReservoirParams& params,
                                        const SpectralDensityModel& model,
                                        const Eigen::VectorXd& times, const QuadratureSpec& spec,
                                        int jobs) {
    CoefficientSeries s;
    s.params = params;
    s.times = times;
    const auto n = times.size();
    s.delta.resize(n);
    s.gamma.resize(n);
    s.int_delta.resize(n);
    s.int_gamma.resize(n);
    s.delta.setZero();
    s.gamma.setZero();
    s.int_delta.setZero();
    s.int_gamma.setZero();
    s.validate();
    model.check_consistent(params);

    parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t k) {
        const auto i = static_cast<Eigen::Index>(k);
        const double t = times[i];
        s.delta[i] = diffusion_coefficient(params, model, t, spec);
        s.gamma[i] = damping_coefficient(params, model, t, spec);
        s.int_delta[i] = integrated_diffusion(params, model, t, spec);
        s.int_gamma[i] = integrated_damping(params, model, t, spec);
    });
    return s;
}

CoefficientSeries tabulate_coefficients(const ReservoirParams& params,
                                        const SpectralDensityModel& model, double t_max,
                                        int n_points, const QuadratureSpec& spec, int jobs) {
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    if (n_points < 2) throw InvalidArgument("tabulation needs at least two points");
    const Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(n_points, 0.0, t_max);
    return tabulate_coefficients(params, model, times, spec, jobs);
}

void write_csv(std::ostream& os, const CoefficientSeries& s) {
    os << "t,delta,gamma,int_delta,int_gamma\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        os << format_double(s.times[i]) << ',' << format_double(s.delta[i]) << ','
           << format_double(s.gamma[i]) << ',' << format_double(s.int_delta[i]) << ','
           << format_double(s.int_gamma[i]) << '\n';
    }
}

} // namespace qzeno
