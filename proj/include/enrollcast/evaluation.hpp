#pragma once

#include <span>
#include <string>
#include <vector>

#include "enrollcast/domain.hpp"

namespace enrollcast {

inline const std::vector<double> kDefaultWindows{1.0, 2.0, 3.0};

// Scores one prediction. Windows are inclusive: |predicted - actual| <= width.
// pi_high may be +infinity (an unbounded interval).
EvaluationRow score_prediction(std::string study_id, double actual_months, double predicted_months,
                               double pi_low, double pi_high,
                               const std::vector<double>& windows = kDefaultWindows);

// Scores a forecast against the observed duration. Censored forecasts (no
// point or a missing bound) are rejected rather than scored.
EvaluationRow evaluate_prediction(std::string study_id, double actual_months, const ForecastSummary& summary,
                                  const std::vector<double>& windows = kDefaultWindows);

// Study-set summary: medians use the midpoint rule, coverages are fractions
// of rows hitting each criterion. Every row must carry the same windows.
SummaryMetrics summarize_rows(std::span<const EvaluationRow> rows);

}  // namespace enrollcast
