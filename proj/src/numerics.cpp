// numerics.cpp — Gauss-Kronrod adaptive quadrature, tail estimates, bisection

#include "qzeno/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "qzeno/errors.hpp"

namespace qzeno {

namespace {

// Kronrod abscissae on [-1, 1]; odd entries are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600334577109, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

double checked(const RealFunction& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrand returned " << v << " at x = " << x;
        throw NonFinite(msg.str());
    }
    return v;
}

struct Segment {
    double a;
    double b;
    QuadratureResult r;
};

struct LargerError {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.r.error != y.r.error) return x.r.error < y.r.error;
        return x.a > y.a;
    }
};

double tolerance(const QuadratureSpec& spec, double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
}

// Half-period cycles summed before the first extrapolation is trusted.
constexpr int kMinCycles = 8;
constexpr int kMaxCycles = 600;

bool one_signed(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; }) ||
           std::all_of(v.begin(), v.end(), [](double x) { return x < 0.0; });
}

// Sums whole periods starting at a. For |f| ~ C / x^p the partial sum after K periods misses
// a remainder with an expansion in K^(1-p), K^(-p), ...; doubling K and eliminating those
// powers one at a time gives a Richardson table whose diagonal converges to the tail.
QuadratureResult integrate_tail_periodic(const RealFunction& f, double a, double period,
                                         double exponent, const QuadratureSpec& local,
                                         const QuadratureSpec& spec) {
    constexpr int kStartPeriods = 8;
    constexpr int kLevels = 13;
    std::vector<std::vector<double>> table;
    double running = 0.0;
    double cycle_error = 0.0;
    long evaluations = 0;
    long done = 0;
    for (int m = 0; m < kLevels; ++m) {
        const long target = static_cast<long>(kStartPeriods) << m;
        for (; done < target; ++done) {
            const double lo = a + period * static_cast<double>(done);
            const QuadratureResult c = integrate_interval(f, lo, lo + period, local, 0.25 * period);
            running += c.value;
            cycle_error += c.error;
            evaluations += c.evaluations;
        }
        std::vector<double> row{running};
        for (int j = 1; j <= m; ++j) {
            const double factor = std::pow(2.0, exponent - 1.0 + (j - 1));
            row.push_back((factor * row[j - 1] - table[m - 1][j - 1]) / (factor - 1.0));
        }
        table.push_back(std::move(row));
        if (m < 2) continue;
        const double value = table[m][m];
        const double err = std::abs(value - table[m - 1][m - 1]) + cycle_error;
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(value)))
            return {value, err, evaluations};
    }
    throw NonConvergence("non-alternating tail did not converge within the period budget");
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw InvalidArgument("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw InvalidArgument("max_subdivisions must be at least 1");
    if (tail_cut_omega < 0.0 || !std::isfinite(tail_cut_omega))
        throw InvalidArgument("tail_cut_omega must be finite and non-negative");
}

QuadratureResult gauss_kronrod21(const RealFunction& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 10> fv1{};
    std::array<double, 10> fv2{};

    const double fc = checked(f, centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);

    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = checked(f, centr - absc);
        const double f2 = checked(f, centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = checked(f, centr - absc);
        const double f2 = checked(f, centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }

    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    QuadratureResult out;
    out.value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps)) abserr = std::max(50.0 * kEps * resabs, abserr);
    out.error = abserr;
    out.evaluations = 21;
    return out;
}

QuadratureResult integrate_interval(const RealFunction& f, double a, double b,
                                    const QuadratureSpec& spec, double max_panel_width) {
    spec.validate();
    if (!(b > a)) {
        if (a == b) return {};
        throw InvalidArgument("integrate_interval requires a <= b");
    }

    long panels = 1;
    if (max_panel_width > 0.0) {
        const double count = std::ceil((b - a) / max_panel_width);
        if (count > 5e7) throw InvalidArgument("panel layout too fine for the interval");
        panels = std::max(1L, static_cast<long>(count));
    }

    std::vector<Segment> segments;
    segments.reserve(static_cast<std::size_t>(panels) + 2);
    const double width = (b - a) / static_cast<double>(panels);
    QuadratureResult total;
    for (long i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = (i + 1 == panels) ? b : a + width * static_cast<double>(i + 1);
        Segment s{lo, hi, gauss_kronrod21(f, lo, hi)};
        total += s.r;
        segments.push_back(s);
    }

    if (total.error <= tolerance(spec, total.value)) return total;

    std::priority_queue<Segment, std::vector<Segment>, LargerError> heap(LargerError{},
                                                                         std::move(segments));
    int subdivisions = 0;
    long evaluations = total.evaluations;
    while (subdivisions < spec.max_subdivisions) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break; // interval at machine resolution
        heap.pop();
        Segment left{worst.a, mid, gauss_kronrod21(f, worst.a, mid)};
        Segment right{mid, worst.b, gauss_kronrod21(f, mid, worst.b)};
        evaluations += 42;
        total.value += left.r.value + right.r.value - worst.r.value;
        total.error += left.r.error + right.r.error - worst.r.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (total.error <= tolerance(spec, total.value)) break;
    }

    // Re-sum in a fixed order so the value does not carry heap-update rounding.
    std::vector<Segment> final_segments;
    final_segments.reserve(heap.size());
    while (!heap.empty()) {
        final_segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(final_segments.begin(), final_segments.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    QuadratureResult out;
    for (const auto& s : final_segments) {
        out.value += s.r.value;
        out.error += s.r.error;
    }
    out.evaluations = evaluations;

    if (out.error > tolerance(spec, out.value)) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "adaptive quadrature on [" << a << ", " << b << "] stopped with error "
            << out.error << " above tolerance " << tolerance(spec, out.value) << " after "
            << subdivisions << " subdivisions";
        throw NonConvergence(msg.str());
    }
    return out;
}

QuadratureResult integrate_tail_smooth(const RealFunction& f, double a,
                                       const QuadratureSpec& spec) {
    if (!(a > 0.0)) throw InvalidArgument("tail start must be positive");
    const RealFunction mapped = [&f, a](double u) {
        const double x = a / u;
        return f(x) * (a / (u * u));
    };
    return integrate_interval(mapped, 0.0, 1.0, spec, 1.0 / 16.0);
}

QuadratureResult integrate_tail_oscillatory(const RealFunction& f, double a, double oscillation,
                                            const QuadratureSpec& spec, double envelope_exponent) {
    if (!(a > 0.0)) throw InvalidArgument("tail start must be positive");
    if (!(oscillation > 0.0)) throw InvalidArgument("oscillation must be positive");

    const double half_period = std::numbers::pi / oscillation;
    // Align cycle boundaries with multiples of the half period.
    const double first = std::ceil(a / half_period) * half_period;

    QuadratureSpec local = spec;
    local.abs_tol = 0.1 * spec.abs_tol;
    local.rel_tol = 0.1 * spec.rel_tol;

    QuadratureResult lead;
    if (first > a) lead = integrate_interval(f, a, first, local);

    std::vector<double> partial;
    partial.reserve(64);
    std::vector<double> cycles;
    double running = lead.value;
    double cycle_error = lead.error;
    long evaluations = lead.evaluations;
    double previous_estimate = std::numeric_limits<double>::quiet_NaN();

    for (int k = 0; k < kMaxCycles; ++k) {
        const double lo = first + half_period * static_cast<double>(k);
        const double hi = first + half_period * static_cast<double>(k + 1);
        QuadratureResult c = integrate_interval(f, lo, hi, local, half_period);
        running += c.value;
        cycle_error += c.error;
        evaluations += c.evaluations;
        partial.push_back(running);
        cycles.push_back(c.value);

        if (static_cast<int>(partial.size()) < kMinCycles) continue;
        if (k + 1 == kMinCycles && one_signed(cycles)) {
            // Cycle contributions do not alternate: the tail is dominated by a non-oscillating
            // mean, which epsilon handles poorly. Extrapolate over whole periods instead.
            QuadratureResult rest = integrate_tail_periodic(f, first + half_period * kMinCycles,
                                                            2.0 * half_period, envelope_exponent,
                                                            local, spec);
            rest.value += running;
            rest.error += cycle_error;
            rest.evaluations += evaluations;
            return rest;
        }

        const Extrapolation ext = wynn_epsilon(partial);
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(ext.value));
        const double drift = std::isnan(previous_estimate)
                                 ? std::numeric_limits<double>::infinity()
                                 : std::abs(ext.value - previous_estimate);
        previous_estimate = ext.value;
        const double err = std::max(ext.error, drift) + cycle_error;
        if (err <= tol) {
            QuadratureResult out;
            out.value = ext.value;
            out.error = err;
            out.evaluations = evaluations;
            return out;
        }
    }
    throw NonConvergence("oscillatory tail did not converge within the cycle budget");
}

Extrapolation wynn_epsilon(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n == 0) return {};
    if (n == 1) return {s[0], std::abs(s[0])};
    if (n == 2) return {s[1], std::abs(s[1] - s[0])};

    Extrapolation best{s[n - 1], std::abs(s[n - 1] - s[n - 2])};
    std::vector<double> prev(n + 1, 0.0);
    std::vector<double> cur(s.begin(), s.end());
    for (std::size_t k = 1; cur.size() >= 2; ++k) {
        std::vector<double> next(cur.size() - 1);
        bool stalled = false;
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const double diff = cur[j + 1] - cur[j];
            const double scale = std::max(std::abs(cur[j + 1]), std::abs(cur[j]));
            if (diff == 0.0 || std::abs(diff) <= 4.0 * kEps * scale) {
                stalled = true;
                break;
            }
            next[j] = prev[j + 1] + 1.0 / diff;
            if (!std::isfinite(next[j])) {
                stalled = true;
                break;
            }
        }
        if (stalled) break;
        if (k % 2 == 0 && next.size() >= 2) {
            const double value = next.back();
            const double err = std::abs(next.back() - next[next.size() - 2]);
            if (err < best.error) best = {value, err};
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return best;
}

double tail_cut(const QuadratureSpec& spec, const IntegrandProfile& profile) {
    if (spec.tail_cut_omega > 0.0) return spec.tail_cut_omega;
    if (!(profile.scale > 0.0)) throw InvalidArgument("integrand scale must be positive");
    return 8.0 * profile.scale;
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, const QuadratureSpec& spec,
                                         const IntegrandProfile& profile) {
    spec.validate();
    if (!(profile.envelope_exponent > 1.0))
        throw InvalidArgument("semi-infinite integrand must decay faster than 1/x");
    if (profile.oscillation < 0.0) throw InvalidArgument("oscillation must be non-negative");

    const double cut = tail_cut(spec, profile);
    const double panel = profile.oscillation > 0.0
                             ? std::min(0.5 * std::numbers::pi / profile.oscillation, cut / 16.0)
                             : cut / 32.0;
    QuadratureResult head = integrate_interval(f, 0.0, cut, spec, panel);

    QuadratureSpec tail_spec = spec;
    tail_spec.abs_tol = 0.25 * std::max(spec.abs_tol, spec.rel_tol * std::abs(head.value));
    const QuadratureResult tail = profile.oscillation > 0.0
                                      ? integrate_tail_oscillatory(f, cut, profile.oscillation,
                                                                   tail_spec, profile.envelope_exponent)
                                      : integrate_tail_smooth(f, cut, tail_spec);
    head += tail;
    return head;
}

double bisect(const RealFunction& f, RootBracket bracket, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
    if (!bracket.valid() || !std::isfinite(bracket.f_lo) || !std::isfinite(bracket.f_hi))
        throw InvalidBracket("bracket does not enclose a sign change");
    if (bracket.f_lo == 0.0) return bracket.lo;
    if (bracket.f_hi == 0.0) return bracket.hi;

    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = bracket.f_lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double f_mid = f(mid);
        if (!std::isfinite(f_mid)) throw NonFinite("bisection function returned a non-finite value");
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<RootBracket> brackets_from_samples(std::span<const double> grid,
                                               std::span<const double> values) {
    if (grid.size() < 2) throw InvalidArgument("bracket scan needs at least two grid points");
    if (grid.size() != values.size()) throw InvalidArgument("grid and samples differ in length");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("grid must be strictly increasing");

    const auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    std::vector<RootBracket> out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const int s_lo = sign(values[i]);
        const int s_hi = sign(values[i + 1]);
        const bool crosses = s_lo * s_hi < 0;
        const bool lands = s_hi == 0 && s_lo != 0;
        const bool starts = i == 0 && s_lo == 0;
        if (crosses || lands || starts)
            out.push_back({grid[i], grid[i + 1], values[i], values[i + 1]});
    }
    return out;
}

std::vector<RootBracket> scan_for_bracket(const RealFunction& f, std::span<const double> grid) {
    std::vector<double> values;
    values.reserve(grid.size());
    for (double x : grid) {
        const double v = f(x);
        if (!std::isfinite(v)) throw NonFinite("bracket scan function returned a non-finite value");
        values.push_back(v);
    }
    return brackets_from_samples(grid, values);
}

} // namespace qzeno
