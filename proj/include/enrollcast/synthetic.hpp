#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enrollcast/domain.hpp"
#include "enrollcast/random.hpp"

namespace enrollcast {

struct SyntheticCountry {
    std::string name;
    double t_mean;    // mean country start-up, months
    double gap_mean;  // mean inter-site spacing, months per site
    long n_sites_min;
    long n_sites_max;
};

// Generator of study histories with known parameters.
//
// Per study and country, the start-up t and spacing gap are gamma draws with
// the configured means and coefficients of variation (cv 0 = constant).
// Sites open at t, then at spacings gap * Gamma(mean 1, cv = site_jitter).
// Sites opening at or after the study's enrollment duration never activate.
// Subject counts are gamma-mixed Poisson with mean true_psm * site-months and
// variance overdispersion * mean.
struct SyntheticConfig {
    long n_studies = 0;
    double true_psm = 0.0;
    double overdispersion = 1.0;
    std::vector<SyntheticCountry> countries;
    double duration_min = 0.0;
    double duration_max = 0.0;
    std::uint64_t seed = 0;
    double start_cv = 0.3;
    double gap_cv = 0.3;
    double site_jitter = 0.0;

    void validate() const;
};

struct SyntheticTruth {
    double true_psm;
    double overdispersion;
    std::vector<SyntheticCountry> countries;
};

struct SyntheticHistory {
    std::vector<HistoricalStudy> studies;
    std::vector<ActivationRecord> records;
    SyntheticTruth truth;
};

SyntheticHistory generate_synthetic_history(const SyntheticConfig& config);

// Opening months of `n_sites` sites of one country drawn from the generator's
// activation process, without truncation at a study duration. Used as the
// ground-truth schedule of a trial that has not happened yet.
std::vector<double> sample_country_openings(const SyntheticConfig& config, const SyntheticCountry& country,
                                            long n_sites, RandomStream& rng);

}  // namespace enrollcast
