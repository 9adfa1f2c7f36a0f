#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "enrollcast/domain.hpp"
#include "enrollcast/random.hpp"

namespace enrollcast {

// Per-country spacing supplied by the user for countries whose history only
// has single-site studies (months per site).
using GapOverrides = std::map<std::string, double>;

/// Start-up time and opening spacing per country from internal activation
/// records.
///
/// For each (study, country): t = first activation, gap = (last - first) / (n - 1)
/// when n >= 2. t_hat is the median of t over studies, gap_hat the median of
/// the defined gaps. Single-site studies count toward t_hat only. Profiles are
/// returned in order of first appearance of the country.
std::vector<CountryActivationProfile> estimate_profiles(std::span<const ActivationRecord> records,
                                                        const GapOverrides& gap_overrides = {});

/// Sorted opening months for `n_sites` sites of one country.
///
/// fixed:     t_hat + (j - 1) gap_hat
/// perturbed: one (t, gap) pair drawn with replacement from the profile,
///            then t + (j - 1) gap
/// poisson:   first site at t_hat (or a bootstrapped pair's t when
///            `bootstrap_start`), then exponential spacings with mean gap_hat
///            (or the pair's gap)
std::vector<double> project_activation(const CountryActivationProfile& profile, long n_sites,
                                       ProjectionMode mode, RandomStream& rng,
                                       bool bootstrap_start = false);

}  // namespace enrollcast
