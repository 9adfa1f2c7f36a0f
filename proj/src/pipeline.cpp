#include "enrollcast/pipeline.hpp"

#include <cstdio>
#include <sstream>

#include "enrollcast/data_io.hpp"

namespace enrollcast {

FittedHistory fit_history(std::span<const HistoricalStudy> studies, std::span<const ActivationRecord> records,
                          const FitOptions& options) {
    return {fit_accrual(studies, options.accrual), estimate_profiles(records, options.gap_overrides)};
}

FittedHistory load_and_fit(const HistoryPaths& paths, const FitOptions& options) {
    const auto studies = load_historical_studies(paths.studies, paths.site_groups);
    const auto records = load_activation_records(paths.activations);
    return fit_history(studies, records, options);
}

ForecastReport run_forecast(const Scenario& scenario, const FittedHistory& fitted, unsigned threads) {
    ForecastOptions options;
    options.threads = threads;
    ForecastRun run = forecast(scenario, fitted.profiles, fitted.model, options);
    return {summarize_forecast(run.replicates, scenario.pi_level, scenario.horizon_months),
            std::move(run.warnings)};
}

namespace {

std::string months(const std::optional<double>& x) {
    if (!x) return "Inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *x);
    return buf;
}

}  // namespace

std::string format_forecast_table(const Scenario& scenario, const FittedHistory& fitted,
                                  const ForecastSummary& summary) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "accrual: psm %.4f (intercept %.4f, se %.4f, dispersion %.3f, %ld studies)\n",
                  fitted.model.psm(), fitted.model.intercept(), fitted.model.intercept_se(),
                  fitted.model.dispersion(), fitted.model.n_studies_fit());
    out << buf;
    out << "country       sites   t_hat  gap_hat\n";
    for (const auto& alloc : scenario.countries) {
        for (const auto& p : fitted.profiles) {
            if (p.country() != alloc.country) continue;
            std::snprintf(buf, sizeof buf, "%-12s %6ld %7.2f %8.3f\n", alloc.country.c_str(), alloc.n_sites,
                          p.t_hat(), p.gap_hat());
            out << buf;
        }
    }
    const int pct = static_cast<int>(scenario.pi_level * 100.0 + 0.5);
    out << "mode " << to_string(scenario.mode) << ", " << scenario.replicates << " replicates, target "
        << scenario.target_enrollment << ", seed " << scenario.seed << "\n";
    out << "LSFD (mo)  " << months(summary.point_months) << "  " << pct << "% PI (" << months(summary.pi_low_months)
        << ", " << months(summary.pi_high_months) << ")\n";
    out << "FSFD (mo)  " << months(summary.fsfd_point) << "  " << pct << "% PI (" << months(summary.fsfd_pi_low)
        << ", " << months(summary.fsfd_pi_high) << ")\n";
    std::snprintf(buf, sizeof buf, "censored   %.1f%%\n", summary.censored_fraction * 100.0);
    out << buf;
    return out.str();
}

}  // namespace enrollcast
