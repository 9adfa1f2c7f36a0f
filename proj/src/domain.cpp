#include "enrollcast/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace enrollcast {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

SiteGroup::SiteGroup(std::string country, long n_sites, std::optional<double> open_month)
    : country_(std::move(country)), n_sites_(n_sites), open_month_(open_month) {
    if (country_.empty()) {
        throw ValidationError("country", "site group country must not be empty");
    }
    if (n_sites_ < 1) {
        throw ValidationError("n_sites", "site group for " + country_ + " must have at least one site");
    }
    if (open_month_ && (!finite(*open_month_) || *open_month_ < 0.0)) {
        throw ValidationError("group_open_month",
                              "site group for " + country_ + " has a negative or non-finite open month");
    }
}

HistoricalStudy::HistoricalStudy(std::string study_id, long n_subjects, double duration_months,
                                 std::vector<SiteGroup> site_groups,
                                 std::optional<double> offset_override)
    : study_id_(std::move(study_id)),
      n_subjects_(n_subjects),
      duration_months_(duration_months),
      site_groups_(std::move(site_groups)),
      offset_override_(offset_override) {
    if (study_id_.empty()) {
        throw ValidationError("study_id", "study id must not be empty");
    }
    if (n_subjects_ < 0) {
        throw ValidationError("n_subjects", "study " + study_id_ + ": n_subjects must be >= 0");
    }
    if (!finite(duration_months_) || duration_months_ <= 0.0) {
        throw ValidationError("duration_months", "study " + study_id_ + ": duration_months must be > 0");
    }
    if (offset_override_ && (!finite(*offset_override_) || *offset_override_ < 0.0)) {
        throw ValidationError("offset_override", "study " + study_id_ + ": offset_override must be >= 0");
    }
    if (site_groups_.empty() && !offset_override_) {
        throw ValidationError("site_groups",
                              "study " + study_id_ + " has neither site groups nor an offset_override");
    }
    for (const auto& group : site_groups_) {
        if (group.open_month() && *group.open_month() >= duration_months_) {
            throw ValidationError("group_open_month",
                                  "study " + study_id_ + ": group " + group.country() +
                                      " opens at or after the end of enrollment");
        }
    }
}

ActivationRecord::ActivationRecord(std::string study_id, std::string country,
                                   std::vector<double> activation_months)
    : study_id_(std::move(study_id)), country_(std::move(country)),
      activation_months_(std::move(activation_months)) {
    if (activation_months_.empty()) {
        throw ValidationError("activation_month",
                              "activation record " + study_id_ + "/" + country_ + " has no sites");
    }
    for (double m : activation_months_) {
        if (!finite(m) || m < 0.0) {
            throw ValidationError("activation_month", "activation record " + study_id_ + "/" + country_ +
                                                          " has a negative or non-finite month");
        }
    }
    std::sort(activation_months_.begin(), activation_months_.end());
}

CountryActivationProfile::CountryActivationProfile(std::string country, double t_hat, double gap_hat,
                                                   std::vector<ActivationPair> pairs, long n_studies)
    : country_(std::move(country)), t_hat_(t_hat), gap_hat_(gap_hat), pairs_(std::move(pairs)),
      n_studies_(n_studies) {
    if (!finite(t_hat_) || t_hat_ < 0.0) {
        throw ValidationError("t_hat", "profile " + country_ + ": t_hat must be >= 0");
    }
    if (!finite(gap_hat_) || gap_hat_ <= 0.0) {
        throw ValidationError("gap_hat", "profile " + country_ + ": gap_hat must be > 0");
    }
    if (n_studies_ < 1 || pairs_.empty() || static_cast<long>(pairs_.size()) > n_studies_) {
        throw ValidationError("pairs", "profile " + country_ + ": needs 1 <= pairs <= n_studies");
    }
    for (const auto& p : pairs_) {
        if (!finite(p.start_months) || p.start_months < 0.0 || !finite(p.gap_months) || p.gap_months <= 0.0) {
            throw ValidationError("pairs", "profile " + country_ + ": pair out of range");
        }
    }
}

AccrualModel::AccrualModel(double intercept, double intercept_se, double dispersion, long n_studies_fit)
    : intercept_(intercept), intercept_se_(intercept_se), dispersion_(dispersion),
      psm_(std::exp(intercept)), n_studies_fit_(n_studies_fit) {
    if (!finite(intercept_)) {
        throw ValidationError("intercept", "accrual intercept must be finite");
    }
    if (!finite(intercept_se_) || intercept_se_ < 0.0) {
        throw ValidationError("intercept_se", "accrual intercept_se must be >= 0");
    }
    if (!finite(dispersion_) || dispersion_ <= 0.0) {
        throw ValidationError("dispersion", "accrual dispersion must be > 0");
    }
    if (!(psm_ > 0.0) || !finite(psm_)) {
        throw ValidationError("psm", "accrual psm must be positive and finite");
    }
}

std::string to_string(ProjectionMode mode) {
    switch (mode) {
    case ProjectionMode::fixed: return "fixed";
    case ProjectionMode::perturbed: return "perturbed";
    case ProjectionMode::poisson: return "poisson";
    }
    return "fixed";
}

ProjectionMode parse_projection_mode(const std::string& text) {
    if (text == "fixed") return ProjectionMode::fixed;
    if (text == "perturbed") return ProjectionMode::perturbed;
    if (text == "poisson") return ProjectionMode::poisson;
    throw ValidationError("mode", "unknown mode '" + text + "' (expected fixed, perturbed or poisson)");
}

void Scenario::validate() const {
    if (countries.empty()) {
        throw ValidationError("countries", "scenario needs at least one country");
    }
    std::set<std::string> seen;
    for (const auto& c : countries) {
        if (c.country.empty()) {
            throw ValidationError("countries", "scenario country name must not be empty");
        }
        if (!seen.insert(c.country).second) {
            throw ValidationError("countries", "country " + c.country + " listed twice");
        }
        if (c.n_sites < 1) {
            throw ValidationError("n_sites", "country " + c.country + " needs n_sites >= 1");
        }
    }
    if (target_enrollment < 1) {
        throw ValidationError("target_enrollment", "target_enrollment must be >= 1");
    }
    if (replicates < 1) {
        throw ValidationError("replicates", "replicates must be >= 1");
    }
    if (!(pi_level > 0.0 && pi_level < 1.0)) {
        throw ValidationError("pi_level", "pi_level must lie strictly between 0 and 1");
    }
    if (!finite(horizon_months) || horizon_months <= 0.0) {
        throw ValidationError("horizon_months", "horizon_months must be > 0");
    }
    if (psm_override && (!finite(*psm_override) || *psm_override <= 0.0)) {
        throw ValidationError("psm_override", "psm_override must be > 0");
    }
}

SiteSchedule::SiteSchedule(std::vector<ScheduledSite> entries) : entries_(std::move(entries)) {
    std::map<std::string, std::pair<long, double>> last;
    for (const auto& e : entries_) {
        if (e.site_index < 1) {
            throw ValidationError("site_index", "schedule site index must be >= 1");
        }
        if (!finite(e.open_month) || e.open_month < 0.0) {
            throw ValidationError("open_month", "schedule open month must be >= 0");
        }
        auto it = last.find(e.country);
        if (it != last.end()) {
            const auto [prev_index, prev_open] = it->second;
            if (e.site_index <= prev_index || e.open_month < prev_open) {
                throw ValidationError("open_month", "schedule for " + e.country +
                                                        " must be ordered by site index with "
                                                        "non-decreasing open months");
            }
        }
        last[e.country] = {e.site_index, e.open_month};
    }
}

bool EvaluationRow::within(double width_months) const {
    for (const auto& [width, hit] : windows) {
        if (width == width_months) return hit;
    }
    throw std::out_of_range("row " + study_id + " was not scored at the requested window");
}

double SummaryMetrics::coverage_within(double width_months) const {
    for (const auto& [width, cov] : coverage_windows) {
        if (width == width_months) return cov;
    }
    throw std::out_of_range("summary has no coverage at the requested window");
}

}  // namespace enrollcast
