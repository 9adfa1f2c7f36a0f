#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enrollcast/domain.hpp"

namespace enrollcast {

/// Length of [u1, u2] during which a site opened at `u_open` is recruiting:
/// max(u2, u_open) - max(u1, u_open).
double exposure(double u1, double u2, double u_open);

/// Month grid on which cumulative enrollment is reported: 1, 2, ...,
/// floor(horizon), plus the horizon itself when it is not a whole month.
std::vector<double> month_grid(double horizon_months);

/// One replicate of subject arrivals over [0, horizon].
///
/// Every open site recruits as an independent Poisson process of rate `psm`
/// from its opening time; the study-wide process is their superposition with
/// intensity psm * (sites open). Each site draws from its own stream, derived
/// from `arrival_seed` and the site's (country, index), so adding a site
/// leaves every other site's arrivals unchanged. Arrivals are merged in time
/// order up to the `target`-th one; arrivals after it are counted per grid
/// month from Poisson draws on the remaining exposure.
ReplicateOutcome simulate_replicate(const SiteSchedule& schedule, double psm, long target,
                                    double horizon_months, std::uint64_t arrival_seed);

struct ForecastOptions {
    unsigned threads = 1;
    bool keep_schedules = false;
};

struct ForecastRun {
    std::vector<ReplicateOutcome> replicates;
    std::vector<SiteSchedule> schedules;  // filled only with keep_schedules
    std::vector<std::string> warnings;
};

/// Monte Carlo loop over replicates b = 0..B-1.
///
/// Replicate b uses streams derived from derive_seed(scenario.seed, b, ...),
/// so results do not depend on the thread count or execution order.
/// `model` may be empty only when the scenario carries psm_override.
ForecastRun forecast(const Scenario& scenario, std::span<const CountryActivationProfile> profiles,
                     const std::optional<AccrualModel>& model, const ForecastOptions& options = {});

/// Point prediction, prediction interval and enrollment-curve quantiles.
/// Censored replicates enter the LSFD quantiles as +infinity.
ForecastSummary summarize_forecast(std::span<const ReplicateOutcome> replicates, double pi_level,
                                   double horizon_months);

}  // namespace enrollcast
