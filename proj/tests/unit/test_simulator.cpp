#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "enrollcast/random.hpp"
#include "enrollcast/simulator.hpp"

namespace enrollcast {
namespace {

SiteSchedule all_open_at_zero(long m) {
    std::vector<ScheduledSite> e;
    for (long j = 1; j <= m; ++j) e.push_back({"US", j, 0.0});
    return SiteSchedule(std::move(e));
}

struct Moments {
    double mean;
    double var;
};

template <typename F>
Moments moments(int reps, F&& draw) {
    double s = 0.0, s2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double x = draw(r);
        s += x;
        s2 += x * x;
    }
    const double mean = s / reps;
    return {mean, (s2 - reps * mean * mean) / (reps - 1)};
}

TEST(Exposure, Examples) {
    EXPECT_DOUBLE_EQ(exposure(0, 10, 0), 10.0);
    EXPECT_DOUBLE_EQ(exposure(0, 10, 6), 4.0);
    EXPECT_DOUBLE_EQ(exposure(0, 10, 12), 0.0);
    EXPECT_THROW(exposure(5, 4, 0), std::invalid_argument);
}

TEST(MonthGrid, WholeAndFractionalHorizons) {
    EXPECT_EQ(month_grid(3.0), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(month_grid(2.5), (std::vector<double>{1, 2, 2.5}));
    EXPECT_EQ(month_grid(0.25), (std::vector<double>{0.25}));
}

TEST(SimulateReplicate, ZeroRateHasNoArrivals) {
    const auto out = simulate_replicate(all_open_at_zero(5), 0.0, 3, 12.0, 1);
    EXPECT_FALSE(out.fsfd_month);
    EXPECT_FALSE(out.lsfd_month);
    EXPECT_EQ(out.total_enrolled, 0);
    EXPECT_EQ(out.monthly_cumulative, std::vector<long>(12, 0));
}

TEST(SimulateReplicate, VanishingHorizonIsCensored) {
    const auto out = simulate_replicate(all_open_at_zero(1), 1.0, 5, 1e-9, 1);
    EXPECT_FALSE(out.lsfd_month);
    EXPECT_EQ(out.total_enrolled, 0);
    EXPECT_EQ(out.monthly_cumulative, std::vector<long>{0});
}

TEST(SimulateReplicate, OneSiteCalibration) {
    const auto sched = all_open_at_zero(1);
    const auto m = moments(10000, [&](int r) {
        return static_cast<double>(simulate_replicate(sched, 1.0, 5, 10.0, derive_seed(7, r, "t")).total_enrolled);
    });
    EXPECT_NEAR(m.mean, 10.0, 0.1);
    EXPECT_GE(m.var / m.mean, 0.9);
    EXPECT_LE(m.var / m.mean, 1.1);
}

TEST(SimulateReplicate, SuperpositionOfSitesOpenAtZero) {
    const auto sched = all_open_at_zero(8);  // Poisson(0.3 * 8 * 6) = Poisson(14.4)
    const auto m = moments(10000, [&](int r) {
        return static_cast<double>(simulate_replicate(sched, 0.3, 3, 6.0, derive_seed(8, r, "t")).total_enrolled);
    });
    EXPECT_NEAR(m.mean, 14.4, 3.0 * std::sqrt(14.4 / 10000.0));
    EXPECT_GE(m.var / m.mean, 0.9);
    EXPECT_LE(m.var / m.mean, 1.1);
}

TEST(SimulateReplicate, CumulativeCurveMatchesExposure) {
    // Staggered openings; the expected cumulative count at month g is
    // psm * sum_j exposure(0, g, u_j), before and after the target arrival.
    const SiteSchedule sched({{"US", 1, 0.0}, {"US", 2, 1.5}, {"DE", 1, 2.2}, {"DE", 2, 4.0}, {"DE", 3, 7.9}});
    const double psm = 0.8;
    const double horizon = 9.5;
    const auto grid = month_grid(horizon);
    const int reps = 20000;
    std::vector<double> sums(grid.size(), 0.0);
    for (int r = 0; r < reps; ++r) {
        const auto out = simulate_replicate(sched, psm, 6, horizon, derive_seed(9, r, "t"));
        ASSERT_EQ(out.monthly_cumulative.size(), grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) sums[k] += static_cast<double>(out.monthly_cumulative[k]);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double expected = 0.0;
        for (const auto& s : sched.entries()) expected += psm * exposure(0.0, grid[k], s.open_month);
        const double se = std::sqrt(std::max(expected, 1e-9) / reps);
        EXPECT_NEAR(sums[k] / reps, expected, 4.0 * se + 1e-12) << "month " << grid[k];
    }
}

TEST(SimulateReplicate, TargetArrivalTimeIsGamma) {
    // One site open at 2: LSFD - 2 ~ Gamma(k, 1/psm), mean k / psm.
    const SiteSchedule sched({{"US", 1, 2.0}});
    const long k = 4;
    const double psm = 2.0;
    const auto m = moments(20000, [&](int r) {
        const auto out = simulate_replicate(sched, psm, k, 200.0, derive_seed(10, r, "t"));
        return *out.lsfd_month - 2.0;
    });
    EXPECT_NEAR(m.mean, k / psm, 4.0 * std::sqrt(k / (psm * psm) / 20000.0));
    EXPECT_NEAR(m.var, k / (psm * psm), 0.05);
}

TEST(SimulateReplicate, OutcomeInvariants) {
    const SiteSchedule sched({{"US", 1, 3.0}, {"US", 2, 4.0}, {"DE", 1, 5.0}});
    for (int r = 0; r < 500; ++r) {
        const auto out = simulate_replicate(sched, 0.7, 8, 24.0, derive_seed(11, r, "t"));
        if (out.fsfd_month) EXPECT_GE(*out.fsfd_month, 3.0);
        if (out.fsfd_month && out.lsfd_month) EXPECT_LE(*out.fsfd_month, *out.lsfd_month);
        EXPECT_TRUE(std::is_sorted(out.monthly_cumulative.begin(), out.monthly_cumulative.end()));
        EXPECT_EQ(out.total_enrolled, out.monthly_cumulative.back());
        if (!out.lsfd_month) EXPECT_LT(out.total_enrolled, 8);
        if (out.lsfd_month) EXPECT_GE(out.total_enrolled, 8);
    }
}

TEST(SimulateReplicate, AddingASiteNeverDelaysTarget) {
    const SiteSchedule base({{"US", 1, 1.0}, {"US", 2, 2.0}, {"DE", 1, 3.0}});
    const SiteSchedule more({{"US", 1, 1.0}, {"US", 2, 2.0}, {"US", 3, 2.5}, {"DE", 1, 3.0}});
    for (int r = 0; r < 1000; ++r) {
        const auto seed = derive_seed(12, r, "t");
        const auto a = simulate_replicate(base, 0.5, 10, 60.0, seed);
        const auto b = simulate_replicate(more, 0.5, 10, 60.0, seed);
        ASSERT_TRUE(a.lsfd_month && b.lsfd_month);
        EXPECT_LE(*b.lsfd_month, *a.lsfd_month);
        EXPECT_LE(*b.fsfd_month, *a.fsfd_month);
    }
}

TEST(SimulateReplicate, SameSeedSameOutcome) {
    const auto sched = all_open_at_zero(4);
    EXPECT_EQ(simulate_replicate(sched, 1.1, 20, 30.0, 77), simulate_replicate(sched, 1.1, 20, 30.0, 77));
    EXPECT_NE(simulate_replicate(sched, 1.1, 20, 30.0, 77), simulate_replicate(sched, 1.1, 20, 30.0, 78));
}

class ForecastTest : public ::testing::Test {
protected:
    std::vector<CountryActivationProfile> profiles{
        CountryActivationProfile("US", 3.0, 0.5, {{2.0, 0.4}, {4.0, 0.7}, {3.0, 0.5}}, 3),
        CountryActivationProfile("DE", 5.0, 1.0, {{4.0, 1.2}, {6.0, 0.8}}, 2),
    };
    AccrualModel model{std::log(0.4), 0.08, 1.5, 20};

    Scenario scenario(ProjectionMode mode, long reps = 200) const {
        Scenario s;
        s.countries = {{"US", 10}, {"DE", 6}};
        s.target_enrollment = 60;
        s.replicates = reps;
        s.mode = mode;
        s.seed = 2024;
        s.horizon_months = 60.0;
        return s;
    }
};

TEST_F(ForecastTest, FixedModeWithOverrideIsReproducible) {
    Scenario s = scenario(ProjectionMode::fixed, 1);
    s.psm_override = 0.6;
    ForecastOptions opts;
    opts.keep_schedules = true;
    const auto a = forecast(s, profiles, std::nullopt, opts);
    const auto b = forecast(s, profiles, std::nullopt, opts);
    EXPECT_EQ(a.replicates, b.replicates);
    ASSERT_EQ(a.schedules.size(), 1u);
    EXPECT_EQ(a.schedules[0].entries().front().open_month, 3.0);
    EXPECT_EQ(a.schedules[0].size(), 16u);
}

TEST_F(ForecastTest, UnknownCountryIsNamed) {
    Scenario s = scenario(ProjectionMode::fixed);
    s.countries.push_back({"XX", 2});
    try {
        forecast(s, profiles, model);
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "countries");
        EXPECT_NE(std::string(e.what()).find("XX"), std::string::npos);
    }
}

TEST_F(ForecastTest, NeedsModelOrOverride) {
    EXPECT_THROW(forecast(scenario(ProjectionMode::fixed), profiles, std::nullopt), ValidationError);
}

TEST_F(ForecastTest, ThreadCountDoesNotChangeResults) {
    for (auto mode : {ProjectionMode::fixed, ProjectionMode::perturbed, ProjectionMode::poisson}) {
        const Scenario s = scenario(mode);
        const auto serial = forecast(s, profiles, model, {1, false});
        const auto parallel = forecast(s, profiles, model, {4, false});
        EXPECT_EQ(serial.replicates, parallel.replicates) << to_string(mode);
    }
}

TEST_F(ForecastTest, ReplicateOutcomeDependsOnlyOnItsIndex) {
    const auto small = forecast(scenario(ProjectionMode::perturbed, 50), profiles, model);
    const auto large = forecast(scenario(ProjectionMode::perturbed, 200), profiles, model);
    for (std::size_t b = 0; b < 50; ++b) {
        EXPECT_EQ(small.replicates[b], large.replicates[b]);
    }
}

TEST_F(ForecastTest, AddingASiteNeverDelaysAnyReplicate) {
    for (auto mode : {ProjectionMode::fixed, ProjectionMode::perturbed, ProjectionMode::poisson}) {
        const Scenario base = scenario(mode, 300);
        Scenario more = base;
        more.countries[1].n_sites += 1;
        const auto a = forecast(base, profiles, model);
        const auto b = forecast(more, profiles, model);
        for (std::size_t r = 0; r < a.replicates.size(); ++r) {
            ASSERT_TRUE(a.replicates[r].lsfd_month && b.replicates[r].lsfd_month);
            EXPECT_LE(*b.replicates[r].lsfd_month, *a.replicates[r].lsfd_month);
        }
    }
}

TEST_F(ForecastTest, WarnsWhenResamplingASingleStudy) {
    std::vector<CountryActivationProfile> thin{CountryActivationProfile("US", 3.0, 0.5, {{3.0, 0.5}}, 1)};
    Scenario s = scenario(ProjectionMode::perturbed, 5);
    s.countries = {{"US", 4}};
    EXPECT_EQ(forecast(s, thin, model).warnings.size(), 1u);
    s.mode = ProjectionMode::fixed;
    EXPECT_TRUE(forecast(s, thin, model).warnings.empty());
}

TEST(SummarizeForecast, MedianOfOddCount) {
    std::vector<ReplicateOutcome> reps(3);
    const double lsfd[] = {10.0, 12.0, 14.0};
    for (int i = 0; i < 3; ++i) {
        reps[i].lsfd_month = lsfd[i];
        reps[i].fsfd_month = 1.0;
        reps[i].monthly_cumulative = std::vector<long>(20, 0);
    }
    const auto s = summarize_forecast(reps, 1.0 / 3.0, 20.0);
    EXPECT_DOUBLE_EQ(*s.point_months, 12.0);
    EXPECT_DOUBLE_EQ(*s.pi_low_months, 11.333333333333334);
    EXPECT_DOUBLE_EQ(*s.pi_high_months, 12.666666666666666);
    EXPECT_EQ(s.censored_fraction, 0.0);
    EXPECT_EQ(s.curve.size(), 20u);
}

TEST(SummarizeForecast, AllCensored) {
    std::vector<ReplicateOutcome> reps(4);
    for (auto& r : reps) r.monthly_cumulative = {0, 1, 1};
    const auto s = summarize_forecast(reps, 0.95, 3.0);
    EXPECT_FALSE(s.point_months);
    EXPECT_FALSE(s.pi_low_months);
    EXPECT_FALSE(s.pi_high_months);
    EXPECT_EQ(s.censored_fraction, 1.0);
    EXPECT_DOUBLE_EQ(s.curve[1].q_median, 1.0);
}

TEST(SummarizeForecast, PartialCensoringLeavesUpperBoundOpen) {
    std::vector<ReplicateOutcome> reps(10);
    for (int i = 0; i < 10; ++i) {
        if (i < 8) reps[i].lsfd_month = 10.0 + i;
        reps[i].monthly_cumulative = {0};
    }
    const auto s = summarize_forecast(reps, 0.95, 1.0);
    EXPECT_DOUBLE_EQ(s.censored_fraction, 0.2);
    EXPECT_DOUBLE_EQ(*s.point_months, 13.5);
    EXPECT_FALSE(s.pi_high_months);
    ASSERT_TRUE(s.pi_low_months);
    EXPECT_LE(*s.pi_low_months, *s.point_months);
}

TEST(SummarizeForecast, UniformDurationsGiveNominalBounds) {
    RandomStream rng(5);
    std::vector<ReplicateOutcome> reps(1000);
    for (auto& r : reps) {
        r.lsfd_month = rng.uniform();
        r.monthly_cumulative = {1};
    }
    const auto s = summarize_forecast(reps, 0.95, 1.0);
    EXPECT_NEAR(*s.pi_low_months, 0.025, 0.01);
    EXPECT_NEAR(*s.pi_high_months, 0.975, 0.01);
    EXPECT_LE(*s.pi_low_months, *s.point_months);
    EXPECT_LE(*s.point_months, *s.pi_high_months);
}

TEST(SummarizeForecast, Errors) {
    EXPECT_THROW(summarize_forecast(std::vector<ReplicateOutcome>{}, 0.95, 10.0), ValidationError);
    std::vector<ReplicateOutcome> reps(2);
    reps[0].monthly_cumulative = {0, 0};
    reps[1].monthly_cumulative = {0};
    EXPECT_THROW(summarize_forecast(reps, 0.95, 2.0), ValidationError);
}

}  // namespace
}  // namespace enrollcast
