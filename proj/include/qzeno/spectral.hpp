// spectral.hpp — Bath spectral densities, reservoir parameters and the thermal factor

#pragma once

#include <functional>
#include <string>
#include <variant>

namespace qzeno {

// Units: hbar = k_B = m = 1, frequencies in units of omega0 unless omega0 is changed.
struct ReservoirParams {
    double omega0{1.0}; // system oscillator frequency
    double r{1.0};      // cutoff ratio omega_c / omega0
    double theta{0.0};  // k_B T / (hbar omega0)
    double alpha{0.1};  // dimensionless system-reservoir coupling

    double omega_c() const { return r * omega0; }
    double alpha2() const { return alpha * alpha; }
    void validate() const;
};

inline constexpr double kThetaHigh = 100.0;
inline constexpr double kThetaZero = 0.0;

// J(omega) = (omega / pi) omega_c^2 / (omega_c^2 + omega^2)
struct OhmicLorentzDrude {
    double omega_c{1.0};
};

// User-supplied J(omega). `scale` marks where its structure ends and
// J(omega) ~ omega^-envelope_exponent beyond it.
struct CustomSpectralDensity {
    std::string name;
    std::function<double(double)> density;
    double scale{1.0};
    double envelope_exponent{1.0};
};

struct SpectralDensityModel {
    std::variant<OhmicLorentzDrude, CustomSpectralDensity> variant{OhmicLorentzDrude{}};

    static SpectralDensityModel ohmic(double omega_c) { return {OhmicLorentzDrude{omega_c}}; }
    static SpectralDensityModel ohmic(const ReservoirParams& p) { return ohmic(p.omega_c()); }
    static SpectralDensityModel custom(CustomSpectralDensity c) { return {std::move(c)}; }

    bool is_ohmic() const { return std::holds_alternative<OhmicLorentzDrude>(variant); }
    std::string name() const;
    // Frequency beyond which the density is a pure power-law tail.
    double scale() const;
    // J(omega) ~ omega^-p at large omega.
    double envelope_exponent() const;
    void validate() const;
    // Throws InvalidArgument when an Ohmic model's omega_c disagrees with r * omega0.
    void check_consistent(const ReservoirParams& p) const;
};

double spectral_density(const SpectralDensityModel& model, double omega);

// coth(omega / (2 theta omega0)); exactly 1 at theta = 0.
double thermal_factor(double omega, double theta, double omega0);

// J(omega) coth(omega / 2 theta omega0), continuous at omega = 0.
double weighted_spectral_density(const SpectralDensityModel& model, const ReservoirParams& params,
                                 double omega);

} // namespace qzeno
