#include "enrollcast/site_activation.hpp"

#include <random>

#include "enrollcast/stats.hpp"

namespace enrollcast {

namespace {

struct CountryHistory {
    std::vector<double> starts;
    std::vector<ActivationPair> pairs;
};

ActivationPair draw_pair(const CountryActivationProfile& profile, RandomStream& rng) {
    const auto& pairs = profile.pairs();
    if (pairs.empty()) {
        throw ValidationError("pairs", "country " + profile.country() + " has no historical pairs to resample");
    }
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    return pairs[pick(rng)];
}

}  // namespace

std::vector<CountryActivationProfile> estimate_profiles(std::span<const ActivationRecord> records,
                                                        const GapOverrides& gap_overrides) {
    if (records.empty()) {
        throw ValidationError("activations", "no activation records to estimate country profiles from");
    }

    std::vector<std::string> order;
    std::map<std::string, CountryHistory> by_country;
    for (const auto& record : records) {
        auto [it, inserted] = by_country.try_emplace(record.country());
        if (inserted) {
            order.push_back(record.country());
        }
        const auto& months = record.activation_months();
        const double first = months.front();
        it->second.starts.push_back(first);
        if (months.size() >= 2) {
            const double gap = (months.back() - first) / static_cast<double>(months.size() - 1);
            it->second.pairs.push_back({first, gap});
        }
    }

    std::vector<CountryActivationProfile> profiles;
    profiles.reserve(order.size());
    for (const auto& country : order) {
        auto& history = by_country.at(country);
        const double t_hat = stats::median(history.starts);
        const auto override_it = gap_overrides.find(country);

        std::vector<double> gaps;
        for (const auto& p : history.pairs) {
            if (p.gap_months > 0.0) {
                gaps.push_back(p.gap_months);
            }
        }
        std::erase_if(history.pairs, [](const ActivationPair& p) { return !(p.gap_months > 0.0); });

        double gap_hat = 0.0;
        if (override_it != gap_overrides.end()) {
            gap_hat = override_it->second;
            if (!(gap_hat > 0.0)) {
                throw ValidationError("gap_override", "gap override for " + country + " must be > 0");
            }
            if (history.pairs.empty()) {
                for (double t : history.starts) {
                    history.pairs.push_back({t, gap_hat});
                }
            }
        } else if (gaps.empty()) {
            throw ValidationError("activations",
                                  "country " + country +
                                      " has no study with two or more distinct site activations, so its "
                                      "opening spacing is undefined; supply a gap override for it");
        } else {
            gap_hat = stats::median(gaps);
        }
        profiles.emplace_back(country, t_hat, gap_hat, std::move(history.pairs),
                              static_cast<long>(history.starts.size()));
    }
    return profiles;
}

std::vector<double> project_activation(const CountryActivationProfile& profile, long n_sites,
                                       ProjectionMode mode, RandomStream& rng, bool bootstrap_start) {
    if (n_sites < 1) {
        throw ValidationError("n_sites", "country " + profile.country() + " needs n_sites >= 1");
    }
    std::vector<double> opens(static_cast<std::size_t>(n_sites));

    switch (mode) {
    case ProjectionMode::fixed:
        for (long j = 0; j < n_sites; ++j) {
            opens[j] = profile.t_hat() + static_cast<double>(j) * profile.gap_hat();
        }
        break;
    case ProjectionMode::perturbed: {
        const ActivationPair pair = draw_pair(profile, rng);
        for (long j = 0; j < n_sites; ++j) {
            opens[j] = pair.start_months + static_cast<double>(j) * pair.gap_months;
        }
        break;
    }
    case ProjectionMode::poisson: {
        ActivationPair pair{profile.t_hat(), profile.gap_hat()};
        if (bootstrap_start) {
            pair = draw_pair(profile, rng);
        }
        std::exponential_distribution<double> spacing(1.0 / pair.gap_months);
        opens[0] = pair.start_months;
        for (long j = 1; j < n_sites; ++j) {
            opens[j] = opens[j - 1] + spacing(rng);
        }
        break;
    }
    }
    return opens;
}

}  // namespace enrollcast
