// test_numerics.cpp — Quadrature, tail handling, extrapolation and root bracketing

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qzeno/coefficients.hpp"
#include "qzeno/errors.hpp"
#include "qzeno/numerics.hpp"

using namespace qzeno;

namespace {

double sinc2_half(double w) {
    const double s = sinc(w / 2.0);
    return s * s;
}

double lorentzian(double w) { return 1.0 / (std::numbers::pi * (w * w + 1.0)); }

const IntegrandProfile kSincProfile{1.0, 1.0, 2.0};

} // namespace

TEST(GaussKronrod, ExactForPolynomialsUpToDegree31) {
    for (int degree : {0, 1, 5, 12, 20, 31}) {
        const auto f = [degree](double x) { return std::pow(x, degree); };
        const double exact = (std::pow(2.0, degree + 1) - std::pow(-1.0, degree + 1)) / (degree + 1);
        const QuadratureResult r = gauss_kronrod21(f, -1.0, 2.0);
        EXPECT_NEAR(r.value, exact, 1e-13 * std::max(1.0, std::abs(exact))) << "degree " << degree;
    }
}

TEST(IntegrateInterval, MatchesAnalyticAndCountsEvaluations) {
    const QuadratureResult r = integrate_interval([](double x) { return std::sin(x); }, 0.0,
                                                  std::numbers::pi, {});
    EXPECT_NEAR(r.value, 2.0, 1e-12);
    EXPECT_GT(r.evaluations, 0);
    EXPECT_LE(r.error, 1e-10);
}

TEST(IntegrateInterval, PanelsResolveFastOscillation) {
    const double w = 200.0;
    const auto f = [w](double x) { return std::cos(w * x); };
    const double panel = 0.5 * std::numbers::pi / w;
    const QuadratureResult r = integrate_interval(f, 0.0, 3.0, {}, panel);
    EXPECT_NEAR(r.value, std::sin(w * 3.0) / w, 1e-11);
}

TEST(IntegrateInterval, ThrowsNonConvergenceWhenBudgetExhausted) {
    QuadratureSpec spec;
    spec.max_subdivisions = 1;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    EXPECT_THROW(integrate_interval([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec),
                 NonConvergence);
}

TEST(IntegrateInterval, ThrowsNonFiniteOnNaN) {
    EXPECT_THROW(integrate_interval([](double) { return std::nan(""); }, 0.0, 1.0, {}), NonFinite);
    EXPECT_THROW(integrate_interval([](double x) { return x > 0.5 ? INFINITY : 0.0; }, 0.0, 1.0, {}),
                 NonFinite);
}

TEST(SemiInfinite, Exponential) {
    const QuadratureResult r = integrate_semi_infinite([](double w) { return std::exp(-w); });
    EXPECT_NEAR(r.value, 1.0, 1e-8);
    EXPECT_LE(r.error, 1e-8);
}

TEST(SemiInfinite, Lorentzian) {
    EXPECT_NEAR(integrate_semi_infinite(lorentzian).value, 0.5, 1e-8);
}

TEST(SemiInfinite, DirichletSincSquared) {
    EXPECT_NEAR(integrate_semi_infinite(sinc2_half, {}, kSincProfile).value, std::numbers::pi, 1e-6);
}

TEST(SemiInfinite, NonAlternatingTailToleratesMisdeclaredPeriod) {
    for (double osc : {0.25, 0.5, 2.0}) {
        const IntegrandProfile profile{1.0, osc, 2.0};
        EXPECT_NEAR(integrate_semi_infinite(sinc2_half, {}, profile).value, std::numbers::pi, 1e-6)
            << "oscillation " << osc;
    }
}

TEST(SemiInfinite, AlternatingTail) {
    // int_0^inf sin(x) / (1 + x) ... use the exactly known int_0^inf sin(x) x / (1 + x^2) = pi/(2e).
    const auto f = [](double x) { return std::sin(x) * x / (1.0 + x * x); };
    const QuadratureResult r = integrate_semi_infinite(f, {}, {1.0, 1.0, 1.5});
    EXPECT_NEAR(r.value, std::numbers::pi / (2.0 * std::numbers::e), 1e-7);
}

TEST(SemiInfinite, SplitPointIndependence) {
    struct Case {
        RealFunction f;
        IntegrandProfile profile;
    };
    const std::vector<Case> cases{{[](double w) { return std::exp(-w); }, {}},
                                  {lorentzian, {}},
                                  {sinc2_half, kSincProfile}};
    for (const auto& c : cases) {
        std::vector<double> values;
        for (double cut : {3.0, 8.0, 20.0, 45.0}) {
            QuadratureSpec spec;
            spec.tail_cut_omega = cut;
            values.push_back(integrate_semi_infinite(c.f, spec, c.profile).value);
        }
        for (double v : values) EXPECT_NEAR(v, values.front(), 10 * 1e-8 * std::abs(values.front()));
    }
}

TEST(SemiInfinite, RejectsBadInput) {
    QuadratureSpec bad;
    bad.abs_tol = 0.0;
    EXPECT_THROW(integrate_semi_infinite(lorentzian, bad), InvalidArgument);
    EXPECT_THROW(integrate_semi_infinite(lorentzian, {}, {1.0, 0.0, 1.0}), InvalidArgument);
    EXPECT_THROW(integrate_semi_infinite(lorentzian, {}, {1.0, -1.0, 2.0}), InvalidArgument);
}

TEST(SemiInfinite, DeterministicBitForBit) {
    const double a = integrate_semi_infinite(sinc2_half, {}, kSincProfile).value;
    const double b = integrate_semi_infinite(sinc2_half, {}, kSincProfile).value;
    EXPECT_EQ(a, b);
}

TEST(Wynn, AcceleratesAlternatingSeries) {
    // ln 2 = 1 - 1/2 + 1/3 - ...
    std::vector<double> partial;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
        s += (k % 2 ? 1.0 : -1.0) / k;
        partial.push_back(s);
    }
    const Extrapolation e = wynn_epsilon(partial);
    EXPECT_NEAR(e.value, std::log(2.0), 1e-10);
    EXPECT_GT(std::abs(partial.back() - std::log(2.0)), 1e-3);
}

TEST(QuadratureSpecTest, Validation) {
    QuadratureSpec s;
    EXPECT_NO_THROW(s.validate());
    s.max_subdivisions = 0;
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = {};
    s.rel_tol = -1.0;
    EXPECT_THROW(s.validate(), InvalidArgument);
}

TEST(Bisect, LinearRoot) {
    EXPECT_NEAR(bisect([](double x) { return x - 1.0; }, {0.0, 2.0, -1.0, 1.0}, 1e-10), 1.0, 1e-10);
}

TEST(Bisect, CosineRoot) {
    const double r = bisect([](double x) { return std::cos(x); }, {1.0, 2.0, std::cos(1.0), std::cos(2.0)}, 1e-10);
    EXPECT_NEAR(r, std::numbers::pi / 2.0, 1e-10);
}

TEST(Bisect, EndpointRootAndInvalidBracket) {
    EXPECT_EQ(bisect([](double x) { return x; }, {0.0, 1.0, 0.0, 1.0}, 1e-12), 0.0);
    EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, {0.0, 1.0, 1.0, 2.0}, 1e-10), InvalidBracket);
    EXPECT_THROW(bisect([](double x) { return x; }, {1.0, 0.0, 1.0, -1.0}, 1e-10), InvalidBracket);
}

TEST(Bisect, IntervalShrinksMonotonically) {
    std::vector<double> probes;
    const auto f = [&probes](double x) {
        probes.push_back(x);
        return x * x * x - 2.0;
    };
    const double r = bisect(f, {0.0, 2.0, -2.0, 6.0}, 1e-12);
    EXPECT_NEAR(r, std::cbrt(2.0), 1e-12);
    double lo = 0.0, hi = 2.0;
    for (double x : probes) {
        ASSERT_GT(x, lo);
        ASSERT_LT(x, hi);
        (x * x * x - 2.0 < 0.0 ? lo : hi) = x;
    }
}

TEST(ScanForBracket, SignChangesAndRootCounts) {
    const std::vector<double> g1{0.0, 0.5, 1.5, 2.0};
    const auto b = scan_for_bracket([](double x) { return x * x - 1.0; }, g1);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].lo, 0.5);
    EXPECT_EQ(b[0].hi, 1.5);
    EXPECT_TRUE(b[0].valid());

    EXPECT_TRUE(scan_for_bracket([](double) { return 1.0; }, g1).empty());

    const std::vector<double> g2{0.1, 0.4, 0.6, 0.9, 1.1};
    EXPECT_EQ(scan_for_bracket([](double x) { return std::sin(2.0 * std::numbers::pi * x); }, g2).size(), 2u);
}

TEST(ScanForBracket, ExactGridRootReportedOnce) {
    const std::vector<double> g{0.0, 1.0, 2.0, 3.0};
    const auto b = scan_for_bracket([](double x) { return x - 1.0; }, g);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].hi, 1.0);
}

TEST(ScanForBracket, RejectsBadGridsAndNonFinite) {
    EXPECT_THROW(scan_for_bracket([](double x) { return x; }, std::vector<double>{1.0}), InvalidArgument);
    EXPECT_THROW(scan_for_bracket([](double x) { return x; }, std::vector<double>{1.0, 0.5}), InvalidArgument);
    EXPECT_THROW(scan_for_bracket([](double) { return std::nan(""); }, std::vector<double>{0.0, 1.0}), NonFinite);
}

TEST(ScanThenBisect, FindsEveryPolynomialRoot) {
    const std::vector<double> roots{-2.3, -0.7, 0.45, 1.9, 3.3};
    const auto p = [&roots](double x) {
        double v = 1.0;
        for (double r : roots) v *= (x - r);
        return v;
    };
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(-3.05 + 0.17 * i);
    const auto brackets = scan_for_bracket(p, grid);
    ASSERT_EQ(brackets.size(), roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        EXPECT_NEAR(bisect(p, brackets[i], 1e-12), roots[i], 1e-11);
}
