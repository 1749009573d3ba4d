// coefficients.hpp — Diffusion and damping coefficients of the QBM master equation

#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "qzeno/numerics.hpp"
#include "qzeno/spectral.hpp"

namespace qzeno {

struct MarkovianLimits {
    double delta_m{0.0};
    double gamma_m{0.0};
};

// Delta(t), gamma(t) and their running integrals on a time grid starting at 0.
struct CoefficientSeries {
    Eigen::VectorXd times;
    Eigen::VectorXd delta;
    Eigen::VectorXd gamma;
    Eigen::VectorXd int_delta;
    Eigen::VectorXd int_gamma;
    ReservoirParams params;

    Eigen::Index size() const { return times.size(); }
    void validate() const;
};

// sin(x) / x with sinc(0) = 1.
double sinc(double x);

// Time kernels of the frequency integrals.
//   delta_kernel(w, t)         = int_0^t cos(w s) cos(w0 s) ds
//   damping_kernel(w, t)       = int_0^t sin(w s) sin(w0 s) ds
//   integrated_*_kernel(w, T)  = int_0^T of the above, in (T^2/4) sinc^2 form
double delta_kernel(double omega, double omega0, double t);
double damping_kernel(double omega, double omega0, double t);
double integrated_delta_kernel(double omega, double omega0, double tau);
double integrated_damping_kernel(double omega, double omega0, double tau);

// Integral over omega of  wm(omega) S(omega - w0) + wp(omega) S(omega + w0)  with
// S(x) = sinc^2(x tau / 2) / 4. Every sinc^2-kernel integral in the library goes through here.
double sinc2_pair_integral(const RealFunction& weight_minus, const RealFunction& weight_plus,
                           double omega0, double scale, double tau, const QuadratureSpec& spec);

double diffusion_coefficient(const ReservoirParams& params, const SpectralDensityModel& model,
                             double t, const QuadratureSpec& spec = {});
double damping_coefficient(const ReservoirParams& params, const SpectralDensityModel& model,
                           double t, const QuadratureSpec& spec = {});
double integrated_diffusion(const ReservoirParams& params, const SpectralDensityModel& model,
                            double tau, const QuadratureSpec& spec = {});
double integrated_damping(const ReservoirParams& params, const SpectralDensityModel& model,
                          double tau, const QuadratureSpec& spec = {});

// Resonance values (pi/2) alpha^2 J(w0) coth(1/2theta) and (pi/2) alpha^2 J(w0).
MarkovianLimits markovian_limits(const ReservoirParams& params, const SpectralDensityModel& model);

// Diagnostic: Delta(t) and gamma(t) evaluated by quadrature at a large time.
MarkovianLimits markovian_limits_numerical(const ReservoirParams& params,
                                           const SpectralDensityModel& model, double t_large,
                                           const QuadratureSpec& spec = {});

CoefficientSeries tabulate_coefficients(const ReservoirParams& params,
                                        const SpectralDensityModel& model, double t_max,
                                        int n_points, const QuadratureSpec& spec = {},
                                        int jobs = 1);

// Arbitrary grid; must start at 0 and be strictly increasing.
CoefficientSeries tabulate_coefficients(const ReservoirParams& params,
                                        const SpectralDensityModel& model,
                                        const Eigen::VectorXd& times,
                                        const QuadratureSpec& spec = {}, int jobs = 1);

// CSV with header t,delta,gamma,int_delta,int_gamma and 17 significant digits.
void write_csv(std::ostream& os, const CoefficientSeries& series);

} // namespace qzeno
