#include "enrollcast/accrual.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace enrollcast {

double compute_offset(const HistoricalStudy& study) {
    if (study.offset_override()) {
        return *study.offset_override();
    }
    const double w = study.duration_months();
    double offset = 0.0;
    for (const auto& group : study.site_groups()) {
        const double open = group.open_month().value_or(0.0);
        if (open >= w) {
            throw ValidationError("group_open_month", "study " + study.study_id() + ": group " +
                                                          group.country() +
                                                          " has non-positive exposure");
        }
        offset += static_cast<double>(group.n_sites()) * (w - open);
    }
    return offset;
}

IrlsResult fit_intercept_irls(std::span<const double> counts, std::span<const double> offsets,
                              int max_iterations, double tolerance) {
    if (counts.size() != offsets.size() || counts.empty()) {
        throw std::invalid_argument("IRLS needs matching, non-empty counts and offsets");
    }
    const std::size_t n = counts.size();

    // Start from eta = log(y + 0.1) as glm() does for the Poisson family.
    std::vector<double> eta(n);
    for (std::size_t s = 0; s < n; ++s) {
        eta[s] = std::log(counts[s] + 0.1);
    }

    double intercept = 0.0;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        // Working response z = eta - log d + (y - mu) / mu, weights w = mu.
        double wz = 0.0;
        double w_sum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const double mu = std::exp(eta[s]);
            const double z = eta[s] - std::log(offsets[s]) + (counts[s] - mu) / mu;
            wz += mu * z;
            w_sum += mu;
        }
        const double next = wz / w_sum;
        const bool done = iter > 1 && std::abs(next - intercept) <= tolerance * (1.0 + std::abs(next));
        intercept = next;
        for (std::size_t s = 0; s < n; ++s) {
            eta[s] = std::log(offsets[s]) + intercept;
        }
        if (done) {
            return {intercept, iter, true};
        }
    }
    return {intercept, max_iterations, false};
}

AccrualModel fit_accrual_counts(std::span<const double> counts, std::span<const double> offsets,
                                const AccrualFitOptions& options) {
    if (counts.empty() || counts.size() != offsets.size()) {
        throw ValidationError("studies", "accrual fit needs at least one study");
    }
    double x_total = 0.0;
    double d_total = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        if (!(offsets[s] > 0.0) || !std::isfinite(offsets[s])) {
            throw ValidationError("offset", "study " + std::to_string(s + 1) + " has a non-positive offset");
        }
        if (!(counts[s] >= 0.0)) {
            throw ValidationError("n_subjects", "negative subject count");
        }
        x_total += counts[s];
        d_total += offsets[s];
    }
    if (x_total <= 0.0) {
        throw ValidationError("n_subjects", "historical studies enrolled no subjects; the rate is log(0)");
    }

    const double intercept = std::log(x_total / d_total);
    const double rate = x_total / d_total;

    const IrlsResult irls = fit_intercept_irls(counts, offsets);
    if (!irls.converged || std::abs(irls.intercept - intercept) > options.cross_check_tolerance) {
        throw std::logic_error("IRLS and closed-form intercepts disagree");
    }

    const std::size_t s_count = counts.size();
    double dispersion = options.dispersion_floor;
    if (s_count > 1) {
        double pearson = 0.0;
        for (std::size_t s = 0; s < s_count; ++s) {
            const double fitted = offsets[s] * rate;
            const double r = counts[s] - fitted;
            pearson += r * r / fitted;
        }
        dispersion = std::max(pearson / static_cast<double>(s_count - 1), options.dispersion_floor);
    }
    if (!(dispersion > 0.0)) {
        throw ValidationError("dispersion",
                              "dispersion estimate is zero; use a positive dispersion floor for a perfect fit");
    }
    // Sum of fitted values equals sum of counts at the MLE.
    const double se = std::sqrt(dispersion / x_total);
    return AccrualModel(intercept, se, dispersion, static_cast<long>(s_count));
}

AccrualModel fit_accrual(std::span<const HistoricalStudy> studies, const AccrualFitOptions& options) {
    if (studies.empty()) {
        throw ValidationError("studies", "accrual fit needs at least one study");
    }
    std::vector<double> counts;
    std::vector<double> offsets;
    counts.reserve(studies.size());
    offsets.reserve(studies.size());
    for (const auto& study : studies) {
        const double d = compute_offset(study);
        if (!(d > 0.0)) {
            throw ValidationError("offset", "study " + study.study_id() + " has zero site-month exposure");
        }
        counts.push_back(static_cast<double>(study.n_subjects()));
        offsets.push_back(d);
    }
    return fit_accrual_counts(counts, offsets, options);
}

double sample_psm(const AccrualModel& model, RandomStream& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z = normal(rng);
    if (model.intercept_se() == 0.0) {
        return model.psm();
    }
    return std::exp(model.intercept() + model.intercept_se() * z);
}

}  // namespace enrollcast
