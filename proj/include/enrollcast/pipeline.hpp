#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "enrollcast/accrual.hpp"
#include "enrollcast/domain.hpp"
#include "enrollcast/site_activation.hpp"
#include "enrollcast/simulator.hpp"

namespace enrollcast {

struct HistoryPaths {
    std::filesystem::path studies;
    std::filesystem::path site_groups;
    std::filesystem::path activations;
};

// Accrual model and country profiles fitted once from a loaded history.
struct FittedHistory {
    AccrualModel model;
    std::vector<CountryActivationProfile> profiles;
};

struct FitOptions {
    AccrualFitOptions accrual;
    GapOverrides gap_overrides;
};

FittedHistory fit_history(std::span<const HistoricalStudy> studies, std::span<const ActivationRecord> records,
                          const FitOptions& options = {});

FittedHistory load_and_fit(const HistoryPaths& paths, const FitOptions& options = {});

struct ForecastReport {
    ForecastSummary summary;
    std::vector<std::string> warnings;
};

// forecast() followed by summarize_forecast().
ForecastReport run_forecast(const Scenario& scenario, const FittedHistory& fitted, unsigned threads = 1);

// Plain-text table of a forecast for terminals.
std::string format_forecast_table(const Scenario& scenario, const FittedHistory& fitted,
                                  const ForecastSummary& summary);

}  // namespace enrollcast
