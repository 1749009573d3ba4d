// test_zeno.cpp — Effective decay rate, Zeno ratio, regimes and crossover search

#include <gtest/gtest.h>

#include <cmath>

#include "qzeno/errors.hpp"
#include "qzeno/zeno.hpp"

using namespace qzeno;

namespace {

ReservoirParams reservoir(double r, double theta, double alpha = 0.1) { return {1.0, r, theta, alpha}; }

SpectralDensityModel ohmic(const ReservoirParams& p) { return SpectralDensityModel::ohmic(p); }

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(EffectiveRate, ZenoLimit) {
    const auto p = reservoir(0.5, 100.0);
    EXPECT_LT(effective_decay_rate(p, ohmic(p), 0, 1e-3), 1e-2 * markovian_decay_rate(p, ohmic(p), 0));
}

TEST(EffectiveRate, MarkovianLimit) {
    const auto p = reservoir(0.5, 100.0);
    EXPECT_NEAR(effective_decay_rate(p, ohmic(p), 0, 50.0) / 0.1990, 1.0, 0.05);
}

TEST(EffectiveRate, OccupationScalingAtHighTemperature) {
    const auto p = reservoir(0.5, 100.0);
    for (double tau : {0.1, 1.0, 10.0})
        EXPECT_NEAR(effective_decay_rate(p, ohmic(p), 10, tau) / effective_decay_rate(p, ohmic(p), 0, tau), 21.0, 0.21);
}

TEST(EffectiveRate, ValidityFlags) {
    const auto p = reservoir(0.5, 100.0);
    EXPECT_EQ(evaluate_decay(p, ohmic(p), 0, 0.01).validity, Validity::Ok);
    const DecayEvaluation e = evaluate_decay(p, ohmic(p), 0, 50.0);
    EXPECT_EQ(e.validity, Validity::Breakdown);
    EXPECT_NEAR(e.escape_probability, e.rate * 50.0, 1e-15);
    EXPECT_NO_THROW(effective_decay_rate(p, ohmic(p), 0, 50.0));
    EXPECT_THROW(effective_decay_rate(p, ohmic(p), 0, 0.0), InvalidArgument);
    EXPECT_THROW(effective_decay_rate(p, ohmic(p), -1, 1.0), InvalidArgument);
}

TEST(DualRoute, TwentyPointGrid) {
    const double thetas[] = {0.0, 1.0, 100.0, 3.0, 30.0};
    const double rs[] = {0.1, 0.5, 1.0, 10.0};
    int k = 0;
    for (double theta : thetas)
        for (double r : rs) {
            const int n = (k % 3 == 0) ? 0 : (k % 3 == 1 ? 1 : 50);
            const double tau = std::pow(10.0, -3.0 + 5.0 * (k % 7) / 6.0);
            ++k;
            const auto p = reservoir(r, theta);
            const double a = effective_decay_rate(p, ohmic(p), n, tau);
            const double b = effective_decay_rate_fd(p, ohmic(p), n, tau);
            EXPECT_LE(std::abs(a - b), 1e-6 * std::max(std::abs(a), p.alpha2() * 1e-6))
                << theta << " " << r << " " << n << " " << tau;
        }
}

TEST(DualRoute, LimitsAndPositivity) {
    const auto p = reservoir(0.5, 0.0);
    EXPECT_GT(effective_decay_rate_fd(p, ohmic(p), 0, 1.0), 0.0);
    EXPECT_GT(effective_decay_rate_fd(p, ohmic(p), 0, 30.0), 0.0);
    // Vanishes roughly as tau ln(1/tau): the Ohmic density makes int J dw logarithmic.
    double last = effective_decay_rate_fd(p, ohmic(p), 0, 1.0);
    for (double tau : {1e-1, 1e-3, 1e-5}) {
        const double v = effective_decay_rate_fd(p, ohmic(p), 0, tau);
        EXPECT_LT(v, last);
        last = v;
    }
    EXPECT_LT(last, 1e-3 * effective_decay_rate_fd(p, ohmic(p), 0, 1.0));
}

TEST(MarkovRate, Examples) {
    const auto cold = reservoir(0.5, 0.0);
    EXPECT_EQ(markovian_decay_rate(cold, ohmic(cold), 0), 0.0);
    const auto hot = reservoir(0.5, 100.0);
    EXPECT_NEAR(markovian_decay_rate(hot, ohmic(hot), 0), 0.1990, 1e-4);
    EXPECT_NEAR(markovian_decay_rate(hot, ohmic(hot), 5) / markovian_decay_rate(hot, ohmic(hot), 0), 11.0, 0.055);
}

TEST(ZenoRatio, MarkovianAsymptote) {
    const auto p = reservoir(0.5, 100.0);
    EXPECT_NEAR(zeno_ratio(p, ohmic(p), 0, 50.0), 1.0, 0.05);
}

TEST(ZenoRatio, SlowerRegimesAtLongerIntervals) {
    for (double r : {0.1, 1.0, 10.0})
        for (double theta : {1.0, 100.0})
            for (int n : {0, 1}) {
                const auto p = reservoir(r, theta);
                EXPECT_NEAR(zeno_ratio(p, ohmic(p), n, 200.0), 1.0, 0.10) << r << " " << theta << " " << n;
            }
}

TEST(ZenoRatio, DegenerateGroundStateAtZeroTemperature) {
    const auto p = reservoir(0.5, 0.0);
    try {
        zeno_ratio(p, ohmic(p), 0, 1.0);
        FAIL() << "expected DegenerateDenominator";
    } catch (const DegenerateDenominator& e) {
        EXPECT_EQ(e.denominator, 0.0);
    }
    EXPECT_TRUE(is_degenerate(p, markovian_decay_rate(p, ohmic(p), 0)));
    EXPECT_FALSE(is_degenerate(p, markovian_decay_rate(p, ohmic(p), 1)));
}

TEST(ZenoRatio, AlphaInvariance) {
    for (double tau : {1e-3, 0.7, 3.0, 40.0}) {
        const auto a = reservoir(0.5, 100.0, 0.05), b = reservoir(0.5, 100.0, 0.2);
        EXPECT_LE(rel(zeno_ratio(b, ohmic(b), 0, tau), zeno_ratio(a, ohmic(a), 0, tau)), 1e-10);
        EXPECT_LE(rel(high_t_ratio(b, ohmic(b), tau), high_t_ratio(a, ohmic(a), tau)), 1e-10);
    }
}

TEST(HighTRatio, Limits) {
    const auto p = reservoir(0.5, 100.0);
    EXPECT_NEAR(high_t_ratio(p, ohmic(p), 50.0), 1.0, 0.05);
    EXPECT_LT(high_t_ratio(p, ohmic(p), 1e-4), 1e-3);
    const Eigen::VectorXd taus = log_grid(1e-3, 1e2, 40);
    for (double tau : taus) EXPECT_NEAR(zeno_ratio(p, ohmic(p), 50, tau) / high_t_ratio(p, ohmic(p), tau), 1.0, 0.02);
}

TEST(HighTRatio, StateIndependentAtVeryHighTemperature) {
    const auto p = reservoir(0.5, 1e4);
    for (double tau : {0.01, 0.5, 2.0, 20.0})
        for (int n : {0, 1, 5})
            EXPECT_NEAR(zeno_ratio(p, ohmic(p), n, tau) / high_t_ratio(p, ohmic(p), tau), 1.0, 0.005);
}

TEST(Regimes, Classification) {
    ZenoSettings s;
    EXPECT_EQ(classify_ratio(0.5, s), Regime::QZE);
    EXPECT_EQ(classify_ratio(1.0005, s), Regime::Marginal);
    EXPECT_EQ(classify_ratio(0.9995, s), Regime::Marginal);
    EXPECT_EQ(classify_ratio(1.5, s), Regime::AZE);
    EXPECT_EQ(to_string(Regime::QZE), "QZE");
    EXPECT_EQ(to_string(Regime::AZE), "AZE");
    EXPECT_EQ(to_string(Regime::Marginal), "Marginal");

    const auto p = reservoir(0.5, 100.0);
    const auto tstar = find_crossover_time(p, ohmic(p), 0, {}, 64);
    ASSERT_FALSE(tstar.empty());
    EXPECT_EQ(classify_regime(p, ohmic(p), 0, 0.05 * tstar.front()), Regime::QZE);
    EXPECT_EQ(classify_regime(p, ohmic(p), 0, 1.2 * tstar.front()), Regime::AZE);
    const auto cold = reservoir(0.5, 0.0);
    for (double tau : {1e-3, 1.0, 50.0}) EXPECT_EQ(classify_regime(cold, ohmic(cold), 0, tau), Regime::AZE);
}

TEST(Crossover, HighTemperatureExistsOnlyBelowUnitR) {
    const auto a = reservoir(0.5, 100.0);
    const auto roots = find_crossover_time(a, ohmic(a), 0, {}, 200);
    ASSERT_FALSE(roots.empty());
    for (double t : roots) {
        EXPECT_GT(t, 1e-3);
        EXPECT_LT(t, 1e2);
        EXPECT_LE(std::abs(zeno_ratio(a, ohmic(a), 0, t) - 1.0), 1e-3);
    }
    const auto b = reservoir(10.0, 100.0);
    EXPECT_TRUE(find_crossover_time(b, ohmic(b), 0, {}, 200).empty());
    for (double tau : log_grid(1e-3, 1e2, 200)) EXPECT_LT(zeno_ratio(b, ohmic(b), 0, tau), 1.0);
}

TEST(Crossover, ZeroTemperatureExcitedStateAtLargeR) {
    const auto p = reservoir(10.0, 0.0);
    EXPECT_FALSE(find_crossover_time(p, ohmic(p), 50, {}, 200).empty());
}

TEST(Crossover, MatchesDenseScan) {
    const auto p = reservoir(0.5, 100.0);
    const auto roots = find_crossover_time(p, ohmic(p), 0, {}, 50);
    ASSERT_FALSE(roots.empty());
    // Dense-grid oracle at ten times the resolution: the root must sit in a sign-change cell.
    const Eigen::VectorXd dense = log_grid(1e-3, 1e2, 500);
    std::vector<std::pair<double, double>> cells;
    double last = zeno_ratio(p, ohmic(p), 0, dense[0]) - 1.0;
    for (Eigen::Index i = 1; i < dense.size(); ++i) {
        const double v = zeno_ratio(p, ohmic(p), 0, dense[i]) - 1.0;
        if ((v > 0.0) != (last > 0.0)) cells.emplace_back(dense[i - 1], dense[i]);
        last = v;
    }
    ASSERT_EQ(cells.size(), roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        EXPECT_GE(roots[i], cells[i].first);
        EXPECT_LE(roots[i], cells[i].second);
    }
}

TEST(Crossover, Errors) {
    const auto cold = reservoir(0.5, 0.0);
    EXPECT_THROW(find_crossover_time(cold, ohmic(cold), 0, {}, 32), DegenerateDenominator);
    const auto p = reservoir(0.5, 100.0);
    EXPECT_THROW(find_crossover_time(p, ohmic(p), 0, {}, 8), InvalidArgument);
    EXPECT_THROW(find_crossover_time(p, ohmic(p), 0, {1.0, 0.5}, 32), InvalidArgument);
    EXPECT_THROW(find_crossover_time(p, ohmic(p), 0, {0.0, 1.0}, 32), InvalidArgument);
}

TEST(Scan, InvariantsAndRegimeConsistency) {
    const auto p = reservoir(0.5, 100.0);
    const ZenoScan s = zeno_scan(p, ohmic(p), 0, log_grid(1e-3, 1e2, 120));
    ASSERT_EQ(s.rate_z.size(), 120);
    ASSERT_EQ(s.regimes.size(), 120u);
    for (Eigen::Index i = 0; i < s.taus.size(); ++i) EXPECT_EQ(s.ratio[i], s.rate_z[i] / s.markov_rate);
    // Every change of ratio sign between neighbouring grid points has a crossover between them.
    for (Eigen::Index i = 1; i < s.taus.size(); ++i) {
        if ((s.ratio[i] > 1.0) == (s.ratio[i - 1] > 1.0)) continue;
        const bool found = std::any_of(s.crossovers.begin(), s.crossovers.end(), [&](double t) {
            return t >= s.taus[i - 1] && t <= s.taus[i];
        });
        EXPECT_TRUE(found) << s.taus[i];
    }
    for (double t : s.crossovers) EXPECT_LE(std::abs(zeno_ratio(p, ohmic(p), 0, t) - 1.0), 1e-3);
}

TEST(Scan, DegenerateFlagged) {
    const auto p = reservoir(0.5, 0.0);
    const ZenoScan s = zeno_scan(p, ohmic(p), 0, log_grid(1e-2, 10.0, 20));
    EXPECT_TRUE(s.aze_divergent);
    EXPECT_TRUE(s.crossovers.empty());
    EXPECT_TRUE(std::isinf(s.ratio[0]));
    for (Regime r : s.regimes) EXPECT_EQ(r, Regime::AZE);
}

TEST(Scan, DeterministicAcrossJobCounts) {
    const auto p = reservoir(1.0, 10.0);
    const Eigen::VectorXd taus = log_grid(1e-2, 50.0, 40);
    const ZenoScan a = zeno_scan(p, ohmic(p), 1, taus, {}, {}, 1);
    const ZenoScan b = zeno_scan(p, ohmic(p), 1, taus, {}, {}, 4);
    EXPECT_EQ(a.rate_z, b.rate_z);
    EXPECT_EQ(a.crossovers, b.crossovers);
}

TEST(Grids, LogAndLinear) {
    const Eigen::VectorXd g = log_grid(1e-3, 1e2, 6);
    EXPECT_EQ(g[0], 1e-3);
    EXPECT_EQ(g[5], 1e2);
    EXPECT_NEAR(g[1], 1e-2, 1e-17);
    const Eigen::VectorXd l = linear_grid(0.0, 1.0, 5);
    EXPECT_EQ(l[2], 0.5);
    EXPECT_THROW(log_grid(0.0, 1.0, 5), InvalidArgument);
    EXPECT_THROW(linear_grid(0.0, 1.0, 1), InvalidArgument);
}
