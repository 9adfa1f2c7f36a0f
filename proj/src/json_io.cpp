#include "enrollcast/json_io.hpp"

#include <cmath>

#include "enrollcast/data_io.hpp"

namespace enrollcast {

namespace {

Json opt(const std::optional<double>& x) {
    if (x && std::isfinite(*x)) return *x;
    return nullptr;
}

Json num(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

template <typename T>
T field(const Json& j, const char* name) {
    if (!j.contains(name)) {
        throw ValidationError(name, std::string("missing required field '") + name + "'");
    }
    try {
        return j.at(name).get<T>();
    } catch (const Json::exception&) {
        throw ValidationError(name, std::string("field '") + name + "' has the wrong type");
    }
}

template <typename T>
std::optional<T> optional_field(const Json& j, const char* name) {
    if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
    return field<T>(j, name);
}

// Signed JSON integers would otherwise wrap silently when read as unsigned.
long integer_field(const Json& j, const char* name) {
    if (!j.contains(name)) {
        throw ValidationError(name, std::string("missing required field '") + name + "'");
    }
    const auto& v = j.at(name);
    if (!v.is_number_integer()) {
        throw ValidationError(name, std::string("field '") + name + "' must be an integer");
    }
    return v.get<long>();
}

std::uint64_t seed_field(const Json& j, std::optional<std::uint64_t> fallback) {
    if (!j.contains("seed") || j.at("seed").is_null()) {
        if (fallback) return *fallback;
        throw ValidationError("seed", "missing 'seed': randomized runs need an explicit seed");
    }
    const auto& v = j.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ValidationError("seed", "'seed' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string window_key(double width) {
    return "coverage_" + format_number(width) + "mo";
}

}  // namespace

Scenario scenario_from_json(const Json& j, std::optional<std::uint64_t> seed_fallback) {
    if (!j.is_object()) {
        throw ValidationError("scenario", "scenario must be a JSON object");
    }
    Scenario s;
    if (!j.contains("countries") || !j.at("countries").is_array()) {
        throw ValidationError("countries", "'countries' must be an array of {country, n_sites}");
    }
    for (const auto& c : j.at("countries")) {
        if (!c.is_object()) {
            throw ValidationError("countries", "'countries' entries must be objects");
        }
        s.countries.push_back({field<std::string>(c, "country"), integer_field(c, "n_sites")});
    }
    s.target_enrollment = integer_field(j, "target_enrollment");
    s.replicates = integer_field(j, "replicates");
    s.pi_level = optional_field<double>(j, "pi_level").value_or(0.95);
    s.mode = parse_projection_mode(optional_field<std::string>(j, "mode").value_or("fixed"));
    s.seed = seed_field(j, seed_fallback);
    s.horizon_months = optional_field<double>(j, "horizon_months").value_or(120.0);
    s.psm_override = optional_field<double>(j, "psm_override");
    s.bootstrap_start = optional_field<bool>(j, "bootstrap_start").value_or(false);
    s.validate();
    return s;
}

Json to_json(const Scenario& s) {
    Json countries = Json::array();
    for (const auto& c : s.countries) {
        countries.push_back({{"country", c.country}, {"n_sites", c.n_sites}});
    }
    return {
        {"countries", countries},
        {"target_enrollment", s.target_enrollment},
        {"replicates", s.replicates},
        {"pi_level", s.pi_level},
        {"mode", to_string(s.mode)},
        {"seed", s.seed},
        {"horizon_months", s.horizon_months},
        {"psm_override", opt(s.psm_override)},
        {"bootstrap_start", s.bootstrap_start},
    };
}

Json to_json(const ForecastSummary& f) {
    Json curve = Json::array();
    for (const auto& p : f.curve) {
        curve.push_back({{"month", p.month}, {"q_low", p.q_low}, {"q_median", p.q_median}, {"q_high", p.q_high}});
    }
    return {
        {"point_months", opt(f.point_months)},
        {"pi_low_months", opt(f.pi_low_months)},
        {"pi_high_months", opt(f.pi_high_months)},
        {"fsfd_point", opt(f.fsfd_point)},
        {"fsfd_pi_low", opt(f.fsfd_pi_low)},
        {"fsfd_pi_high", opt(f.fsfd_pi_high)},
        {"censored_fraction", f.censored_fraction},
        {"pi_level", f.pi_level},
        {"curve", curve},
    };
}

Json to_json(const AccrualModel& m) {
    return {
        {"intercept", m.intercept()},
        {"intercept_se", m.intercept_se()},
        {"dispersion", m.dispersion()},
        {"psm", m.psm()},
        {"n_studies_fit", m.n_studies_fit()},
    };
}

Json to_json(const CountryActivationProfile& p) {
    Json pairs = Json::array();
    for (const auto& pr : p.pairs()) {
        pairs.push_back({{"t", pr.start_months}, {"gap", pr.gap_months}});
    }
    return {
        {"country", p.country()},
        {"t_hat", p.t_hat()},
        {"gap_hat", p.gap_hat()},
        {"n_studies", p.n_studies()},
        {"pairs", pairs},
    };
}

Json to_json(const EvaluationRow& r) {
    Json j{
        {"study_id", r.study_id},
        {"actual_months", r.actual_months},
        {"predicted_months", r.predicted_months},
        {"prediction_error", r.prediction_error},
        {"pi_low", num(r.pi_low)},
        {"pi_high", num(r.pi_high)},
        {"within_pi", r.within_pi},
    };
    for (const auto& [width, hit] : r.windows) {
        j["within_" + format_number(width) + "mo"] = hit;
    }
    return j;
}

Json to_json(const SummaryMetrics& m) {
    Json j{
        {"pi_length_median", opt(m.pi_length_median)},
        {"pi_length_mean", opt(m.pi_length_mean)},
        {"prediction_error_median", m.prediction_error_median},
        {"abs_error_median", m.abs_error_median},
        {"abs_error_mean", m.abs_error_mean},
        {"coverage_pi", m.coverage_pi},
        {"n_rows", m.n_rows},
    };
    for (const auto& [width, cov] : m.coverage_windows) {
        j[window_key(width)] = cov;
    }
    return j;
}

Json to_json(const SyntheticTruth& t) {
    Json countries = Json::array();
    for (const auto& c : t.countries) {
        countries.push_back({{"name", c.name}, {"t_mean", c.t_mean}, {"gap_mean", c.gap_mean}});
    }
    return {{"true_psm", t.true_psm}, {"overdispersion", t.overdispersion}, {"countries", countries}};
}

SyntheticConfig synthetic_config_from_json(const Json& j, std::optional<std::uint64_t> seed_fallback) {
    if (!j.is_object()) {
        throw ValidationError("config", "synthetic config must be a JSON object");
    }
    SyntheticConfig c;
    c.n_studies = integer_field(j, "n_studies");
    c.true_psm = field<double>(j, "true_psm");
    c.overdispersion = optional_field<double>(j, "overdispersion").value_or(1.0);
    const auto duration = field<std::vector<double>>(j, "duration_range");
    if (duration.size() != 2) {
        throw ValidationError("duration_range", "'duration_range' must be [min, max]");
    }
    c.duration_min = duration[0];
    c.duration_max = duration[1];
    c.seed = seed_field(j, seed_fallback);
    c.start_cv = optional_field<double>(j, "start_cv").value_or(c.start_cv);
    c.gap_cv = optional_field<double>(j, "gap_cv").value_or(c.gap_cv);
    c.site_jitter = optional_field<double>(j, "site_jitter").value_or(c.site_jitter);
    if (!j.contains("countries") || !j.at("countries").is_array()) {
        throw ValidationError("countries", "'countries' must be an array");
    }
    for (const auto& cj : j.at("countries")) {
        const auto range = field<std::vector<long>>(cj, "n_sites_range");
        if (range.size() != 2) {
            throw ValidationError("n_sites_range", "'n_sites_range' must be [min, max]");
        }
        c.countries.push_back({field<std::string>(cj, "name"), field<double>(cj, "t_mean"),
                               field<double>(cj, "gap_mean"), range[0], range[1]});
    }
    c.validate();
    return c;
}

std::string dump_pretty(const Json& j) {
    return j.dump(2) + "\n";
}

}  // namespace enrollcast
