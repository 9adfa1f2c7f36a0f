#include "enrollcast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace enrollcast {

namespace {

// Gamma draw with the given mean and coefficient of variation.
double gamma_mean_cv(double mean, double cv, RandomStream& rng) {
    if (cv <= 0.0 || mean <= 0.0) return mean;
    const double shape = 1.0 / (cv * cv);
    std::gamma_distribution<double> g(shape, mean / shape);
    return g(rng);
}

long draw_count(double mean, double overdispersion, RandomStream& rng) {
    if (mean <= 0.0) return 0;
    double rate = mean;
    if (overdispersion > 1.0) {
        // Gamma(k, theta) with k theta = mean and theta = overdispersion - 1
        // gives Var X = mean + mean * theta = overdispersion * mean.
        const double theta = overdispersion - 1.0;
        std::gamma_distribution<double> g(mean / theta, theta);
        rate = g(rng);
    }
    if (rate <= 0.0) return 0;
    std::poisson_distribution<long> p(rate);
    return p(rng);
}

std::string study_name(long index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "SYN%05ld", index + 1);
    return buf;
}

}  // namespace

void SyntheticConfig::validate() const {
    if (n_studies < 0) throw ValidationError("n_studies", "n_studies must be >= 0");
    if (!(true_psm > 0.0)) throw ValidationError("true_psm", "true_psm must be > 0");
    if (!(overdispersion >= 1.0)) throw ValidationError("overdispersion", "overdispersion must be >= 1");
    if (countries.empty()) throw ValidationError("countries", "synthetic config needs at least one country");
    for (const auto& c : countries) {
        if (c.name.empty()) throw ValidationError("countries", "country name must not be empty");
        if (!(c.t_mean >= 0.0)) throw ValidationError("t_mean", "country " + c.name + ": t_mean must be >= 0");
        if (!(c.gap_mean > 0.0)) throw ValidationError("gap_mean", "country " + c.name + ": gap_mean must be > 0");
        if (c.n_sites_min < 1 || c.n_sites_max < c.n_sites_min) {
            throw ValidationError("n_sites_range", "country " + c.name + ": need 1 <= n_sites_min <= n_sites_max");
        }
    }
    if (!(duration_min > 0.0) || duration_max < duration_min) {
        throw ValidationError("duration_range", "need 0 < duration_min <= duration_max");
    }
    if (start_cv < 0.0 || gap_cv < 0.0 || site_jitter < 0.0) {
        throw ValidationError("start_cv", "coefficients of variation must be >= 0");
    }
}

std::vector<double> sample_country_openings(const SyntheticConfig& config, const SyntheticCountry& country,
                                            long n_sites, RandomStream& rng) {
    const double start = gamma_mean_cv(country.t_mean, config.start_cv, rng);
    const double gap = gamma_mean_cv(country.gap_mean, config.gap_cv, rng);
    std::vector<double> opens(static_cast<std::size_t>(std::max<long>(n_sites, 0)));
    double t = start;
    for (std::size_t j = 0; j < opens.size(); ++j) {
        if (j > 0) t += gap * gamma_mean_cv(1.0, config.site_jitter, rng);
        opens[j] = t;
    }
    return opens;
}

SyntheticHistory generate_synthetic_history(const SyntheticConfig& config) {
    config.validate();
    SyntheticHistory out;
    out.truth = {config.true_psm, config.overdispersion, config.countries};

    constexpr int kMaxAttempts = 1000;
    for (long s = 0; s < config.n_studies; ++s) {
        RandomStream rng(derive_seed(config.seed, static_cast<std::uint64_t>(s), "synthetic-study"));
        const std::string id = study_name(s);

        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxAttempts) {
                throw ValidationError("duration_range",
                                      "no site opens within the configured durations; widen duration_range");
            }
            std::uniform_real_distribution<double> duration_dist(config.duration_min, config.duration_max);
            const double duration =
                config.duration_max > config.duration_min ? duration_dist(rng) : config.duration_min;

            std::vector<SiteGroup> groups;
            std::vector<ActivationRecord> records;
            double site_months = 0.0;
            for (const auto& country : config.countries) {
                std::uniform_int_distribution<long> n_dist(country.n_sites_min, country.n_sites_max);
                const long n_sites = n_dist(rng);
                auto opens = sample_country_openings(config, country, n_sites, rng);
                std::erase_if(opens, [&](double u) { return u >= duration; });
                if (opens.empty()) continue;

                double sum = 0.0;
                for (double u : opens) sum += u;
                const double mean_open = sum / static_cast<double>(opens.size());
                const auto n = static_cast<long>(opens.size());
                groups.emplace_back(country.name, n, mean_open);
                site_months += static_cast<double>(n) * (duration - mean_open);
                records.emplace_back(id, country.name, std::move(opens));
            }
            if (groups.empty()) continue;

            const long subjects = draw_count(config.true_psm * site_months, config.overdispersion, rng);
            out.studies.emplace_back(id, subjects, duration, std::move(groups));
            for (auto& r : records) out.records.push_back(std::move(r));
            break;
        }
    }
    return out;
}

}  // namespace enrollcast
