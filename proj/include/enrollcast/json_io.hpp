#pragma once

#include <nlohmann/json.hpp>

#include "enrollcast/domain.hpp"
#include "enrollcast/synthetic.hpp"

namespace enrollcast {

using Json = nlohmann::json;

// Scenario JSON uses the field names of Scenario in lower_snake_case.
// Missing `seed` is a ValidationError on field "seed" unless `seed_fallback`
// is given. Type errors are reported as ValidationError on the field.
Scenario scenario_from_json(const Json& j, std::optional<std::uint64_t> seed_fallback = std::nullopt);
Json to_json(const Scenario& scenario);

Json to_json(const ForecastSummary& summary);
Json to_json(const AccrualModel& model);
Json to_json(const CountryActivationProfile& profile);
Json to_json(const EvaluationRow& row);
Json to_json(const SummaryMetrics& metrics);
Json to_json(const SyntheticTruth& truth);

SyntheticConfig synthetic_config_from_json(const Json& j, std::optional<std::uint64_t> seed_fallback = std::nullopt);

// Pretty-printed (two-space indent); object keys are sorted.
std::string dump_pretty(const Json& j);

}  // namespace enrollcast
