#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace enrollcast {

// Raised when an input violates a domain invariant. `field` names the
// offending input so front ends (CLI, HTTP) can point at it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A block of sites in one country of a historical study. `open_month` is the
// group-level approximation of the sites' activation time; unknown when empty.
class SiteGroup {
public:
    SiteGroup(std::string country, long n_sites, std::optional<double> open_month = std::nullopt);

    const std::string& country() const noexcept { return country_; }
    long n_sites() const noexcept { return n_sites_; }
    const std::optional<double>& open_month() const noexcept { return open_month_; }

    bool operator==(const SiteGroup&) const = default;

private:
    std::string country_;
    long n_sites_;
    std::optional<double> open_month_;
};

// One study-level historical record used to fit the accrual rate.
class HistoricalStudy {
public:
    HistoricalStudy(std::string study_id, long n_subjects, double duration_months,
                    std::vector<SiteGroup> site_groups,
                    std::optional<double> offset_override = std::nullopt);

    const std::string& study_id() const noexcept { return study_id_; }
    long n_subjects() const noexcept { return n_subjects_; }
    double duration_months() const noexcept { return duration_months_; }
    const std::vector<SiteGroup>& site_groups() const noexcept { return site_groups_; }
    const std::optional<double>& offset_override() const noexcept { return offset_override_; }

    bool operator==(const HistoricalStudy&) const = default;

private:
    std::string study_id_;
    long n_subjects_;
    double duration_months_;
    std::vector<SiteGroup> site_groups_;
    std::optional<double> offset_override_;
};

// Per-site activation months of one country within one internal study.
// Months are sorted ascending on construction.
class ActivationRecord {
public:
    ActivationRecord(std::string study_id, std::string country, std::vector<double> activation_months);

    const std::string& study_id() const noexcept { return study_id_; }
    const std::string& country() const noexcept { return country_; }
    const std::vector<double>& activation_months() const noexcept { return activation_months_; }

    bool operator==(const ActivationRecord&) const = default;

private:
    std::string study_id_;
    std::string country_;
    std::vector<double> activation_months_;
};

// Country start-up time and inter-site opening spacing observed in one study.
struct ActivationPair {
    double start_months;
    double gap_months;

    bool operator==(const ActivationPair&) const = default;
};

class CountryActivationProfile {
public:
    // `n_studies` counts every study contributing a start-up time; `pairs`
    // holds only the studies with a defined spacing, so pairs.size() <= n_studies.
    CountryActivationProfile(std::string country, double t_hat, double gap_hat,
                             std::vector<ActivationPair> pairs, long n_studies);

    const std::string& country() const noexcept { return country_; }
    double t_hat() const noexcept { return t_hat_; }
    double gap_hat() const noexcept { return gap_hat_; }
    const std::vector<ActivationPair>& pairs() const noexcept { return pairs_; }
    long n_studies() const noexcept { return n_studies_; }

private:
    std::string country_;
    double t_hat_;
    double gap_hat_;
    std::vector<ActivationPair> pairs_;
    long n_studies_;
};

// Fitted intercept-only quasi-Poisson model. psm = exp(intercept).
class AccrualModel {
public:
    AccrualModel(double intercept, double intercept_se, double dispersion, long n_studies_fit);

    double intercept() const noexcept { return intercept_; }
    double intercept_se() const noexcept { return intercept_se_; }
    double dispersion() const noexcept { return dispersion_; }
    double psm() const noexcept { return psm_; }
    long n_studies_fit() const noexcept { return n_studies_fit_; }

private:
    double intercept_;
    double intercept_se_;
    double dispersion_;
    double psm_;
    long n_studies_fit_;
};

enum class ProjectionMode { fixed, perturbed, poisson };

std::string to_string(ProjectionMode mode);
ProjectionMode parse_projection_mode(const std::string& text);

struct CountryAllocation {
    std::string country;
    long n_sites;

    bool operator==(const CountryAllocation&) const = default;
};

// The planning question handed to the forecaster.
struct Scenario {
    std::vector<CountryAllocation> countries;
    long target_enrollment = 0;
    long replicates = 0;
    double pi_level = 0.95;
    ProjectionMode mode = ProjectionMode::fixed;
    std::uint64_t seed = 0;
    double horizon_months = 120.0;
    std::optional<double> psm_override;
    // Poisson mode only: draw the country start-up from the historical pairs
    // instead of using t_hat.
    bool bootstrap_start = false;

    // Throws ValidationError naming the first offending field.
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

struct ScheduledSite {
    std::string country;
    long site_index;  // 1-based within the country
    double open_month;

    bool operator==(const ScheduledSite&) const = default;
};

// Realized site opening times for one replicate.
class SiteSchedule {
public:
    SiteSchedule() = default;
    explicit SiteSchedule(std::vector<ScheduledSite> entries);

    const std::vector<ScheduledSite>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::vector<ScheduledSite> entries_;
};

struct ReplicateOutcome {
    std::optional<double> fsfd_month;
    std::optional<double> lsfd_month;  // absent = censored at the horizon
    long total_enrolled = 0;
    std::vector<long> monthly_cumulative;

    bool operator==(const ReplicateOutcome&) const = default;
};

struct CurvePoint {
    double month;
    double q_low;
    double q_median;
    double q_high;

    bool operator==(const CurvePoint&) const = default;
};

struct ForecastSummary {
    std::optional<double> point_months;
    std::optional<double> pi_low_months;
    std::optional<double> pi_high_months;  // absent = unbounded ("Inf")
    std::optional<double> fsfd_point;
    std::optional<double> fsfd_pi_low;
    std::optional<double> fsfd_pi_high;
    double censored_fraction = 0.0;
    double pi_level = 0.95;
    std::vector<CurvePoint> curve;
};

struct EvaluationRow {
    std::string study_id;
    double actual_months;
    double predicted_months;
    double prediction_error;
    double pi_low;
    double pi_high;
    bool within_pi;
    // (window width in months, |error| <= width)
    std::vector<std::pair<double, bool>> windows;

    // Throws std::out_of_range when the row was not scored at that width.
    bool within(double width_months) const;
};

struct SummaryMetrics {
    std::optional<double> pi_length_median;  // absent when the central length is unbounded
    std::optional<double> pi_length_mean;    // absent when any interval is unbounded
    double prediction_error_median;
    double abs_error_median;
    double abs_error_mean;
    double coverage_pi;
    std::vector<std::pair<double, double>> coverage_windows;
    std::size_t n_rows;

    double coverage_within(double width_months) const;
};

}  // namespace enrollcast
