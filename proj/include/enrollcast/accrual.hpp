#pragma once

#include <span>

#include "enrollcast/domain.hpp"
#include "enrollcast/random.hpp"

namespace enrollcast {

/// Site-month exposure d_s of a historical study.
///
/// Returns the override when present; otherwise sums
/// n_sites * (duration - open_month) over the site groups, treating a group
/// with unknown opening as open for the whole duration.
double compute_offset(const HistoricalStudy& study);

struct AccrualFitOptions {
    // Lower clamp on the Pearson dispersion estimate; also used when S = 1.
    double dispersion_floor = 1.0;
    // Closed form and IRLS intercepts must agree within this tolerance.
    double cross_check_tolerance = 1e-8;
};

struct IrlsResult {
    double intercept;
    int iterations;
    bool converged;
};

/// Iteratively reweighted least squares for log(E X_s) = log d_s + mu.
/// Independent of the closed form used by fit_accrual; exposed for cross-checks.
IrlsResult fit_intercept_irls(std::span<const double> counts, std::span<const double> offsets,
                              int max_iterations = 100, double tolerance = 1e-13);

/// Intercept-only quasi-Poisson fit with site-month offsets.
///
/// The intercept is the closed-form maximizer log(sum X / sum d). Dispersion is
/// the Pearson statistic over S - 1 residual degrees of freedom, clamped below
/// at options.dispersion_floor. intercept_se = sqrt(phi / sum(fitted)).
/// The closed form is re-derived by IRLS on every call; disagreement throws
/// std::logic_error.
AccrualModel fit_accrual(std::span<const HistoricalStudy> studies, const AccrualFitOptions& options = {});

/// Same fit on raw counts and offsets.
AccrualModel fit_accrual_counts(std::span<const double> counts, std::span<const double> offsets,
                                const AccrualFitOptions& options = {});

/// Draws exp(z), z ~ Normal(intercept, intercept_se^2). Returns model.psm()
/// exactly when intercept_se is zero.
double sample_psm(const AccrualModel& model, RandomStream& rng);

}  // namespace enrollcast
