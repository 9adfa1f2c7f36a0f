#include "enrollcast/evaluation.hpp"

#include <cmath>

#include "enrollcast/stats.hpp"

namespace enrollcast {

EvaluationRow score_prediction(std::string study_id, double actual_months, double predicted_months,
                               double pi_low, double pi_high, const std::vector<double>& windows) {
    if (!std::isfinite(actual_months) || !std::isfinite(predicted_months)) {
        throw ValidationError("predicted_months", "study " + study_id + ": durations must be finite");
    }
    if (std::isnan(pi_low) || std::isnan(pi_high) || std::isinf(pi_low) || pi_low > pi_high) {
        throw ValidationError("pi_low", "study " + study_id + ": prediction interval must satisfy pi_low <= pi_high");
    }
    EvaluationRow row;
    row.study_id = std::move(study_id);
    row.actual_months = actual_months;
    row.predicted_months = predicted_months;
    row.prediction_error = predicted_months - actual_months;
    row.pi_low = pi_low;
    row.pi_high = pi_high;
    row.within_pi = pi_low <= actual_months && actual_months <= pi_high;
    const double abs_error = std::abs(row.prediction_error);
    for (double width : windows) {
        if (!(width >= 0.0)) {
            throw ValidationError("windows", "window widths must be >= 0");
        }
        row.windows.emplace_back(width, abs_error <= width);
    }
    return row;
}

EvaluationRow evaluate_prediction(std::string study_id, double actual_months, const ForecastSummary& summary,
                                  const std::vector<double>& windows) {
    if (!summary.point_months) {
        throw ValidationError("point_months", "study " + study_id + ": forecast is majority-censored, no point prediction");
    }
    if (!summary.pi_low_months || !summary.pi_high_months) {
        throw ValidationError("pi_high_months", "study " + study_id + ": forecast interval is unbounded");
    }
    return score_prediction(std::move(study_id), actual_months, *summary.point_months, *summary.pi_low_months,
                            *summary.pi_high_months, windows);
}

SummaryMetrics summarize_rows(std::span<const EvaluationRow> rows) {
    if (rows.empty()) {
        throw ValidationError("rows", "cannot summarize an empty set of evaluation rows");
    }
    const auto n = static_cast<double>(rows.size());

    std::vector<double> lengths;
    std::vector<double> errors;
    std::vector<double> abs_errors;
    double pi_hits = 0.0;
    std::vector<std::pair<double, double>> window_hits;
    for (const auto& [width, hit] : rows.front().windows) {
        window_hits.emplace_back(width, 0.0);
    }

    for (const auto& row : rows) {
        lengths.push_back(row.pi_high - row.pi_low);
        errors.push_back(row.prediction_error);
        abs_errors.push_back(std::abs(row.prediction_error));
        pi_hits += row.within_pi ? 1.0 : 0.0;
        if (row.windows.size() != window_hits.size()) {
            throw ValidationError("windows", "rows were scored with different windows");
        }
        for (std::size_t k = 0; k < window_hits.size(); ++k) {
            if (row.windows[k].first != window_hits[k].first) {
                throw ValidationError("windows", "rows were scored with different windows");
            }
            window_hits[k].second += row.windows[k].second ? 1.0 : 0.0;
        }
    }

    SummaryMetrics m;
    m.n_rows = rows.size();
    const double length_median = stats::median(lengths);
    if (std::isfinite(length_median)) {
        m.pi_length_median = length_median;
    }
    const double length_mean = stats::mean(lengths);
    if (std::isfinite(length_mean)) {
        m.pi_length_mean = length_mean;
    }
    m.prediction_error_median = stats::median(errors);
    m.abs_error_median = stats::median(abs_errors);
    m.abs_error_mean = stats::mean(abs_errors);
    m.coverage_pi = pi_hits / n;
    for (auto& [width, hits] : window_hits) {
        m.coverage_windows.emplace_back(width, hits / n);
    }
    return m;
}

}  // namespace enrollcast
