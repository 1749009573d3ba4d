// numerics.hpp — Adaptive quadrature and bracketing root finders used by the physics modules

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qzeno {

using RealFunction = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    int max_subdivisions{2000}; // adaptive bisections beyond the initial panel layout
    double tail_cut_omega{0.0}; // 0 selects the split point from the integrand profile

    void validate() const;
};

// Shape hints for semi-infinite integrands. The engine uses them to lay out panels
// and to choose the tail strategy; it never needs to know what the integrand means.
struct IntegrandProfile {
    double scale{1.0};             // frequency beyond which the integrand has no structure
    double oscillation{0.0};       // angular frequency of oscillation in the integration variable
    double envelope_exponent{2.0}; // |f(x)| <= C / x^p as x -> infinity; must exceed 1
};

struct QuadratureResult {
    double value{0.0};
    double error{0.0};
    long evaluations{0};

    QuadratureResult& operator+=(const QuadratureResult& other) {
        value += other.value;
        error += other.error;
        evaluations += other.evaluations;
        return *this;
    }
};

struct RootBracket {
    double lo{0.0};
    double hi{0.0};
    double f_lo{0.0};
    double f_hi{0.0};

    bool valid() const { return lo < hi && f_lo * f_hi <= 0.0; }
};

// 21-point Gauss-Kronrod rule on [a, b] with the QUADPACK error heuristic.
QuadratureResult gauss_kronrod21(const RealFunction& f, double a, double b);

// Globally adaptive integration over [a, b]. The interval is first cut into panels no
// wider than max_panel_width (when positive), then the panel with the largest error is
// bisected until the total error meets the tolerance.
QuadratureResult integrate_interval(const RealFunction& f, double a, double b,
                                    const QuadratureSpec& spec, double max_panel_width = 0.0);

// Non-oscillatory tail over [a, inf) through the substitution x = a / u.
QuadratureResult integrate_tail_smooth(const RealFunction& f, double a,
                                       const QuadratureSpec& spec);

// Oscillatory tail over [a, inf): sums integrals over half periods pi / oscillation and
// accelerates the partial sums with Wynn's epsilon algorithm. When the half-period
// contributions share one sign (a decaying mean under the oscillation) it switches to
// Richardson extrapolation over whole periods using the declared envelope exponent.
QuadratureResult integrate_tail_oscillatory(const RealFunction& f, double a, double oscillation,
                                            const QuadratureSpec& spec,
                                            double envelope_exponent = 2.0);

// Split point between the panelled head and the tail estimate.
double tail_cut(const QuadratureSpec& spec, const IntegrandProfile& profile);

/// Integral of f over (0, inf).
///
/// The head [0, A] is integrated adaptively with panels no wider than a quarter period of the
/// declared oscillation; the tail [A, inf) is estimated by integrate_tail_oscillatory when the
/// profile declares an oscillation and by integrate_tail_smooth otherwise. The reported error is
/// at most max(abs_tol, rel_tol |V|) or NonConvergence is thrown.
QuadratureResult integrate_semi_infinite(const RealFunction& f, const QuadratureSpec& spec = {},
                                         const IntegrandProfile& profile = {});

// Limit of a sequence of partial sums by Wynn's epsilon algorithm. Returns the estimate and
// an error measure taken from the two most recent diagonal entries.
struct Extrapolation {
    double value{0.0};
    double error{0.0};
};
Extrapolation wynn_epsilon(std::span<const double> partial_sums);

double bisect(const RealFunction& f, RootBracket bracket, double tol);

// Every adjacent grid pair over which f changes sign. A root that falls exactly on a grid
// point is reported once, as the right end of the pair that reaches it.
std::vector<RootBracket> scan_for_bracket(const RealFunction& f, std::span<const double> grid);

// Same, from precomputed samples of f on the grid.
std::vector<RootBracket> brackets_from_samples(std::span<const double> grid,
                                               std::span<const double> values);

} // namespace qzeno
