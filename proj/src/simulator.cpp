#include "enrollcast/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <thread>

#include "enrollcast/accrual.hpp"
#include "enrollcast/random.hpp"
#include "enrollcast/site_activation.hpp"
#include "enrollcast/stats.hpp"

namespace enrollcast {

double exposure(double u1, double u2, double u_open) {
    if (u1 > u2) {
        throw std::invalid_argument("exposure window has u1 > u2");
    }
    return std::max(u2, u_open) - std::max(u1, u_open);
}

std::vector<double> month_grid(double horizon_months) {
    if (!(horizon_months > 0.0) || !std::isfinite(horizon_months)) {
        throw ValidationError("horizon_months", "horizon_months must be a positive finite number");
    }
    std::vector<double> grid;
    const auto whole = static_cast<long>(std::floor(horizon_months));
    grid.reserve(static_cast<std::size_t>(whole) + 1);
    for (long m = 1; m <= whole; ++m) {
        grid.push_back(static_cast<double>(m));
    }
    if (grid.empty() || grid.back() < horizon_months) {
        grid.push_back(horizon_months);
    }
    return grid;
}

namespace {

// Total site-months accumulated by time x: sum over sites of max(0, x - u).
class CumulativeExposure {
public:
    explicit CumulativeExposure(std::vector<double> opens) : opens_(std::move(opens)) {
        std::sort(opens_.begin(), opens_.end());
        prefix_.resize(opens_.size() + 1, 0.0);
        for (std::size_t k = 0; k < opens_.size(); ++k) {
            prefix_[k + 1] = prefix_[k] + opens_[k];
        }
    }

    double operator()(double x) const {
        const auto k = static_cast<std::size_t>(std::lower_bound(opens_.begin(), opens_.end(), x) - opens_.begin());
        return static_cast<double>(k) * x - prefix_[k];
    }

private:
    std::vector<double> opens_;
    std::vector<double> prefix_;
};

struct PendingArrival {
    double time;
    std::size_t site;

    bool operator>(const PendingArrival& other) const {
        return time > other.time || (time == other.time && site > other.site);
    }
};

}  // namespace

ReplicateOutcome simulate_replicate(const SiteSchedule& schedule, double psm, long target,
                                    double horizon_months, std::uint64_t arrival_seed) {
    if (!(psm >= 0.0) || !std::isfinite(psm)) {
        throw ValidationError("psm", "psm must be a finite non-negative rate");
    }
    if (target < 1) {
        throw ValidationError("target_enrollment", "target must be >= 1");
    }
    const std::vector<double> grid = month_grid(horizon_months);

    std::vector<double> opens;
    std::vector<RandomStream> streams;
    opens.reserve(schedule.size());
    streams.reserve(schedule.size());
    for (const auto& site : schedule.entries()) {
        if (site.open_month < horizon_months) {
            opens.push_back(site.open_month);
            streams.emplace_back(derive_seed(arrival_seed, static_cast<std::uint64_t>(site.site_index),
                                             "site:" + site.country));
        }
    }

    std::vector<double> arrivals;
    if (psm > 0.0) {
        std::exponential_distribution<double> wait(psm);
        std::priority_queue<PendingArrival, std::vector<PendingArrival>, std::greater<>> pending;
        for (std::size_t k = 0; k < opens.size(); ++k) {
            const double t = opens[k] + wait(streams[k]);
            if (t <= horizon_months) {
                pending.push({t, k});
            }
        }
        arrivals.reserve(static_cast<std::size_t>(std::min<long>(target, 1 << 20)));
        while (!pending.empty() && static_cast<long>(arrivals.size()) < target) {
            const PendingArrival next = pending.top();
            pending.pop();
            arrivals.push_back(next.time);
            const double t = next.time + wait(streams[next.site]);
            if (t <= horizon_months) {
                pending.push({t, next.site});
            }
        }
    }

    ReplicateOutcome out;
    if (!arrivals.empty()) {
        out.fsfd_month = arrivals.front();
    }
    const bool reached = static_cast<long>(arrivals.size()) >= target;
    if (reached) {
        out.lsfd_month = arrivals.back();
    }

    out.monthly_cumulative.resize(grid.size(), 0);
    std::size_t seen = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        while (seen < arrivals.size() && arrivals[seen] <= grid[k]) {
            ++seen;
        }
        out.monthly_cumulative[k] = static_cast<long>(seen);
    }

    if (reached) {
        // After the target-th arrival the per-site processes restart afresh, so
        // the remaining arrivals are Poisson counts over the leftover exposure.
        const double lsfd = arrivals.back();
        const CumulativeExposure cumulative(opens);
        RandomStream tail_rng(derive_seed(arrival_seed, 0, "tail"));
        long extra = 0;
        double prev = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double lo = std::max(prev, lsfd);
            if (grid[k] > lo) {
                const double mean = psm * (cumulative(grid[k]) - cumulative(lo));
                if (mean > 0.0) {
                    std::poisson_distribution<long> count(mean);
                    extra += count(tail_rng);
                }
            }
            out.monthly_cumulative[k] += extra;
            prev = grid[k];
        }
    }

    out.total_enrolled = out.monthly_cumulative.back();
    return out;
}

ForecastRun forecast(const Scenario& scenario, std::span<const CountryActivationProfile> profiles,
                     const std::optional<AccrualModel>& model, const ForecastOptions& options) {
    scenario.validate();

    std::map<std::string, const CountryActivationProfile*> by_country;
    for (const auto& p : profiles) {
        by_country.emplace(p.country(), &p);
    }
    std::vector<const CountryActivationProfile*> chosen;
    std::string missing;
    for (const auto& c : scenario.countries) {
        auto it = by_country.find(c.country);
        if (it == by_country.end()) {
            missing += missing.empty() ? c.country : ", " + c.country;
        } else {
            chosen.push_back(it->second);
        }
    }
    if (!missing.empty()) {
        throw ValidationError("countries", "no activation history for scenario countries: " + missing);
    }
    if (!model && !scenario.psm_override) {
        throw ValidationError("psm_override", "forecast needs a fitted accrual model or a psm_override");
    }

    ForecastRun run;
    const bool resamples = scenario.mode == ProjectionMode::perturbed ||
                           (scenario.mode == ProjectionMode::poisson && scenario.bootstrap_start);
    if (resamples) {
        for (const auto* p : chosen) {
            if (p->pairs().size() == 1) {
                run.warnings.push_back("country " + p->country() +
                                       " has a single historical study; resampling reduces to that study");
            }
        }
    }

    const auto n = static_cast<std::size_t>(scenario.replicates);
    run.replicates.resize(n);
    if (options.keep_schedules) {
        run.schedules.resize(n);
    }

    auto run_one = [&](std::size_t b) {
        const std::uint64_t rep_seed = derive_seed(scenario.seed, b, "replicate");
        std::vector<ScheduledSite> entries;
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const auto& alloc = scenario.countries[i];
            RandomStream rng(derive_seed(rep_seed, 0, "activation:" + alloc.country));
            const auto opens =
                project_activation(*chosen[i], alloc.n_sites, scenario.mode, rng, scenario.bootstrap_start);
            for (std::size_t j = 0; j < opens.size(); ++j) {
                entries.push_back({alloc.country, static_cast<long>(j + 1), opens[j]});
            }
        }
        SiteSchedule schedule(std::move(entries));

        double psm = 0.0;
        if (scenario.psm_override) {
            psm = *scenario.psm_override;
        } else if (scenario.mode == ProjectionMode::fixed) {
            psm = model->psm();
        } else {
            RandomStream rng(derive_seed(rep_seed, 0, "accrual"));
            psm = sample_psm(*model, rng);
        }

        run.replicates[b] = simulate_replicate(schedule, psm, scenario.target_enrollment,
                                               scenario.horizon_months, derive_seed(rep_seed, 0, "arrivals"));
        if (options.keep_schedules) {
            run.schedules[b] = std::move(schedule);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::size_t b = 0; b < n; ++b) {
            run_one(b);
        }
        return run;
    }

    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = w; b < n; b += workers) {
                        run_one(b);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return run;
}

namespace {

struct Band {
    std::optional<double> point;
    std::optional<double> low;
    std::optional<double> high;
    double missing_fraction;
};

std::optional<double> finite_or_empty(double x) {
    if (std::isfinite(x)) return x;
    return std::nullopt;
}

// Median of observed values (when at most half are missing) plus the
// interval quantiles with missing values ranked as +infinity.
Band summarize_times(const std::vector<std::optional<double>>& times, double q_low, double q_high) {
    std::vector<double> observed;
    std::vector<double> ranked;
    ranked.reserve(times.size());
    for (const auto& t : times) {
        if (t) {
            observed.push_back(*t);
            ranked.push_back(*t);
        } else {
            ranked.push_back(std::numeric_limits<double>::infinity());
        }
    }
    std::sort(ranked.begin(), ranked.end());
    Band band;
    band.missing_fraction = static_cast<double>(times.size() - observed.size()) / static_cast<double>(times.size());
    if (!observed.empty() && band.missing_fraction <= 0.5) {
        band.point = stats::median(std::move(observed));
    }
    band.low = finite_or_empty(stats::quantile_sorted(ranked, q_low));
    band.high = finite_or_empty(stats::quantile_sorted(ranked, q_high));
    return band;
}

}  // namespace

ForecastSummary summarize_forecast(std::span<const ReplicateOutcome> replicates, double pi_level,
                                   double horizon_months) {
    if (replicates.empty()) {
        throw ValidationError("replicates", "cannot summarize an empty set of replicates");
    }
    if (!(pi_level > 0.0 && pi_level < 1.0)) {
        throw ValidationError("pi_level", "pi_level must lie strictly between 0 and 1");
    }
    const double q_low = (1.0 - pi_level) / 2.0;
    const double q_high = 1.0 - q_low;

    std::vector<std::optional<double>> lsfd;
    std::vector<std::optional<double>> fsfd;
    lsfd.reserve(replicates.size());
    fsfd.reserve(replicates.size());
    for (const auto& r : replicates) {
        lsfd.push_back(r.lsfd_month);
        fsfd.push_back(r.fsfd_month);
    }

    ForecastSummary summary;
    summary.pi_level = pi_level;
    const Band lsfd_band = summarize_times(lsfd, q_low, q_high);
    summary.point_months = lsfd_band.point;
    summary.pi_low_months = lsfd_band.low;
    summary.pi_high_months = lsfd_band.high;
    summary.censored_fraction = lsfd_band.missing_fraction;

    const Band fsfd_band = summarize_times(fsfd, q_low, q_high);
    summary.fsfd_point = fsfd_band.point;
    summary.fsfd_pi_low = fsfd_band.low;
    summary.fsfd_pi_high = fsfd_band.high;

    const std::vector<double> grid = month_grid(horizon_months);
    std::vector<double> column(replicates.size());
    summary.curve.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t b = 0; b < replicates.size(); ++b) {
            const auto& counts = replicates[b].monthly_cumulative;
            if (counts.size() != grid.size()) {
                throw ValidationError("monthly_cumulative",
                                      "replicate curve length does not match the horizon's month grid");
            }
            column[b] = static_cast<double>(counts[k]);
        }
        std::sort(column.begin(), column.end());
        summary.curve.push_back({grid[k], stats::quantile_sorted(column, q_low),
                                 stats::quantile_sorted(column, 0.5), stats::quantile_sorted(column, q_high)});
    }
    return summary;
}

}  // namespace enrollcast
