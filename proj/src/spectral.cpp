// spectral.cpp — Spectral density evaluation

#include "qzeno/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qzeno/errors.hpp"

namespace qzeno {

void ReservoirParams::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidArgument("omega0 must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be positive");
    if (!(theta >= 0.0) || !std::isfinite(theta)) throw InvalidArgument("theta must be >= 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be positive");
}

std::string SpectralDensityModel::name() const {
    if (const auto* c = std::get_if<CustomSpectralDensity>(&variant)) return c->name;
    return "ohmic_lorentz_drude";
}

double SpectralDensityModel::scale() const {
    if (const auto* c = std::get_if<CustomSpectralDensity>(&variant)) return c->scale;
    return std::get<OhmicLorentzDrude>(variant).omega_c;
}

double SpectralDensityModel::envelope_exponent() const {
    if (const auto* c = std::get_if<CustomSpectralDensity>(&variant)) return c->envelope_exponent;
    return 1.0;
}

void SpectralDensityModel::validate() const {
    if (const auto* c = std::get_if<CustomSpectralDensity>(&variant)) {
        if (!c->density) throw InvalidArgument("custom spectral density has no function");
        if (!(c->scale > 0.0)) throw InvalidArgument("custom spectral density scale must be positive");
        if (!(c->envelope_exponent > 0.0))
            throw InvalidArgument("custom spectral density must decay at large omega");
        return;
    }
    if (!(std::get<OhmicLorentzDrude>(variant).omega_c > 0.0))
        throw InvalidArgument("omega_c must be positive");
}

void SpectralDensityModel::check_consistent(const ReservoirParams& p) const {
    validate();
    p.validate();
    if (const auto* o = std::get_if<OhmicLorentzDrude>(&variant)) {
        const double expected = p.omega_c();
        if (std::abs(o->omega_c - expected) > 1e-12 * expected) {
            std::ostringstream msg;
            msg << "model omega_c = " << o->omega_c << " does not match r * omega0 = " << expected;
            throw InvalidArgument(msg.str());
        }
    }
}

double spectral_density(const SpectralDensityModel& model, double omega) {
    if (omega < 0.0) throw NegativeFrequency("spectral density requires omega >= 0");
    if (const auto* o = std::get_if<OhmicLorentzDrude>(&model.variant)) {
        const double wc2 = o->omega_c * o->omega_c;
        return omega / std::numbers::pi * wc2 / (wc2 + omega * omega);
    }
    return std::get<CustomSpectralDensity>(model.variant).density(omega);
}

double thermal_factor(double omega, double theta, double omega0) {
    if (theta == 0.0) return 1.0;
    if (omega == 0.0) throw IndeterminateAtZero("coth(omega / 2 theta omega0) has a pole at omega = 0");
    return 1.0 / std::tanh(omega / (2.0 * theta * omega0));
}

double weighted_spectral_density(const SpectralDensityModel& model, const ReservoirParams& params,
                                 double omega) {
    if (params.theta == 0.0) return spectral_density(model, omega);
    const double beta_half = 1.0 / (2.0 * params.theta * params.omega0);
    if (const auto* o = std::get_if<OhmicLorentzDrude>(&model.variant)) {
        const double wc2 = o->omega_c * o->omega_c;
        // omega / tanh(beta_half omega) -> 1 / beta_half as omega -> 0.
        const double x = beta_half * omega;
        const double ratio = x < 1e-8 ? 1.0 / beta_half : omega / std::tanh(x);
        return ratio / std::numbers::pi * wc2 / (wc2 + omega * omega);
    }
    // Custom models: J(omega)/omega is taken from a nearby sample at the removable point.
    const auto& c = std::get<CustomSpectralDensity>(model.variant);
    const double x = beta_half * omega;
    if (x < 1e-8) {
        const double eps = 1e-8 * c.scale;
        return c.density(eps) / eps / beta_half;
    }
    return c.density(omega) / std::tanh(x);
}

} // namespace qzeno
