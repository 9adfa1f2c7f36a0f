#include "enrollcast/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace enrollcast {

ParseError::ParseError(std::string file, std::size_t line, std::size_t column, const std::string& reason)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + reason),
      file_(std::move(file)), line_(line), column_(column) {}

std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, end);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Minimal CSV table: header row plus data rows, comma-delimited, no quoting.
class CsvTable {
public:
    CsvTable(std::istream& in, std::string name, const std::vector<std::string>& required,
             const std::vector<std::string>& optional)
        : name_(std::move(name)) {
        std::string line;
        std::size_t line_no = 0;
        bool have_header = false;
        while (std::getline(in, line)) {
            ++line_no;
            if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
                line.erase(0, 3);
            }
            if (trim(line).empty()) continue;
            auto fields = split(line);
            if (!have_header) {
                for (std::size_t k = 0; k < fields.size(); ++k) {
                    columns_[fields[k]] = k;
                }
                for (const auto& col : required) {
                    if (!columns_.contains(col)) {
                        throw ParseError(name_, line_no, 0, "header is missing column '" + col + "'");
                    }
                }
                for (const auto& [col, idx] : columns_) {
                    if (std::find(required.begin(), required.end(), col) == required.end() &&
                        std::find(optional.begin(), optional.end(), col) == optional.end()) {
                        throw ParseError(name_, line_no, idx + 1, "unexpected column '" + col + "'");
                    }
                }
                width_ = fields.size();
                have_header = true;
                continue;
            }
            if (fields.size() != width_) {
                throw ParseError(name_, line_no, 0,
                                 "expected " + std::to_string(width_) + " fields, found " +
                                     std::to_string(fields.size()));
            }
            rows_.push_back({line_no, std::move(fields)});
        }
    }

    struct Row {
        std::size_t line;
        std::vector<std::string> fields;
    };

    const std::vector<Row>& rows() const { return rows_; }
    const std::string& name() const { return name_; }

    bool has(const std::string& col) const { return columns_.contains(col); }

    const std::string& text(const Row& row, const std::string& col) const {
        return row.fields[columns_.at(col)];
    }

    std::string label(const Row& row, const std::string& col) const {
        const auto& value = text(row, col);
        if (value.empty()) {
            fail(row, col, "'" + col + "' must not be empty");
        }
        return value;
    }

    std::optional<double> maybe_number(const Row& row, const std::string& col) const {
        if (!has(col)) return std::nullopt;
        const auto& value = text(row, col);
        if (value.empty()) return std::nullopt;
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
        if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(x)) {
            fail(row, col, "'" + col + "' is not a number: '" + value + "'");
        }
        return x;
    }

    double number(const Row& row, const std::string& col) const {
        auto x = maybe_number(row, col);
        if (!x) fail(row, col, "'" + col + "' is required");
        return *x;
    }

    double non_negative(const Row& row, const std::string& col) const {
        const double x = number(row, col);
        if (x < 0.0) fail(row, col, "'" + col + "' must be >= 0");
        return x;
    }

    long count(const Row& row, const std::string& col) const {
        const auto& value = text(row, col);
        long n = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
        if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
            fail(row, col, "'" + col + "' is not an integer: '" + value + "'");
        }
        if (n < 0) fail(row, col, "'" + col + "' must be >= 0");
        return n;
    }

    [[noreturn]] void fail(const Row& row, const std::string& col, const std::string& reason) const {
        throw ParseError(name_, row.line, columns_.contains(col) ? columns_.at(col) + 1 : 0, reason);
    }

private:
    std::string name_;
    std::map<std::string, std::size_t> columns_;
    std::size_t width_ = 0;
    std::vector<Row> rows_;
};

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

}  // namespace

std::vector<HistoricalStudy> read_historical_studies(std::istream& studies_in, const std::string& studies_name,
                                                     std::istream& groups_in, const std::string& groups_name) {
    const CsvTable studies(studies_in, studies_name, {"study_id", "n_subjects", "duration_months"},
                           {"offset_override"});
    const CsvTable groups(groups_in, groups_name, {"study_id", "country", "n_sites"}, {"group_open_month"});

    struct Pending {
        const CsvTable::Row* row;
        std::vector<SiteGroup> groups;
    };
    std::vector<std::string> order;
    std::map<std::string, Pending> by_id;
    for (const auto& row : studies.rows()) {
        const auto id = studies.label(row, "study_id");
        if (!by_id.try_emplace(id, Pending{&row, {}}).second) {
            studies.fail(row, "study_id", "duplicate study_id '" + id + "'");
        }
        order.push_back(id);
    }

    for (const auto& row : groups.rows()) {
        const auto id = groups.label(row, "study_id");
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            groups.fail(row, "study_id", "site group references unknown study_id '" + id + "'");
        }
        const long n_sites = groups.count(row, "n_sites");
        auto open = groups.maybe_number(row, "group_open_month");
        if (open && *open < 0.0) {
            groups.fail(row, "group_open_month", "'group_open_month' must be >= 0");
        }
        try {
            it->second.groups.emplace_back(groups.label(row, "country"), n_sites, open);
        } catch (const ValidationError& e) {
            groups.fail(row, e.field(), e.what());
        }
    }

    std::vector<HistoricalStudy> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        auto& pending = by_id.at(id);
        const auto& row = *pending.row;
        const long n_subjects = studies.count(row, "n_subjects");
        const double duration = studies.number(row, "duration_months");
        if (duration <= 0.0) {
            studies.fail(row, "duration_months", "'duration_months' must be > 0");
        }
        auto override_value = studies.maybe_number(row, "offset_override");
        if (override_value && *override_value < 0.0) {
            studies.fail(row, "offset_override", "'offset_override' must be >= 0");
        }
        try {
            out.emplace_back(id, n_subjects, duration, std::move(pending.groups), override_value);
        } catch (const ValidationError& e) {
            studies.fail(row, e.field(), e.what());
        }
    }
    return out;
}

std::vector<HistoricalStudy> load_historical_studies(const std::filesystem::path& studies_path,
                                                     const std::filesystem::path& site_groups_path) {
    auto studies = open_input(studies_path);
    auto groups = open_input(site_groups_path);
    return read_historical_studies(studies, studies_path.string(), groups, site_groups_path.string());
}

std::vector<ActivationRecord> read_activation_records(std::istream& in, const std::string& name) {
    const CsvTable table(in, name, {"study_id", "country", "activation_month"}, {});
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<double>> months;
    for (const auto& row : table.rows()) {
        auto key = std::make_pair(table.label(row, "study_id"), table.label(row, "country"));
        const double month = table.non_negative(row, "activation_month");
        auto [it, inserted] = months.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(month);
    }
    std::vector<ActivationRecord> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        out.emplace_back(key.first, key.second, std::move(months.at(key)));
    }
    return out;
}

std::vector<ActivationRecord> load_activation_records(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_activation_records(in, path.string());
}

void write_studies_csv(std::ostream& out, const std::vector<HistoricalStudy>& studies) {
    out << "study_id,n_subjects,duration_months,offset_override\n";
    for (const auto& s : studies) {
        out << s.study_id() << ',' << s.n_subjects() << ',' << format_number(s.duration_months()) << ',';
        if (s.offset_override()) out << format_number(*s.offset_override());
        out << '\n';
    }
}

void write_site_groups_csv(std::ostream& out, const std::vector<HistoricalStudy>& studies) {
    out << "study_id,country,n_sites,group_open_month\n";
    for (const auto& s : studies) {
        for (const auto& g : s.site_groups()) {
            out << s.study_id() << ',' << g.country() << ',' << g.n_sites() << ',';
            if (g.open_month()) out << format_number(*g.open_month());
            out << '\n';
        }
    }
}

void write_activations_csv(std::ostream& out, const std::vector<ActivationRecord>& records) {
    out << "study_id,country,activation_month\n";
    for (const auto& r : records) {
        for (double m : r.activation_months()) {
            out << r.study_id() << ',' << r.country() << ',' << format_number(m) << '\n';
        }
    }
}

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& name) {
    const CsvTable table(in, name, {"study_id", "actual_months", "predicted_months", "pi_low", "pi_high"}, {});
    std::vector<PredictionRecord> out;
    for (const auto& row : table.rows()) {
        PredictionRecord rec;
        rec.study_id = table.label(row, "study_id");
        rec.actual_months = table.number(row, "actual_months");
        rec.predicted_months = table.number(row, "predicted_months");
        rec.pi_low = table.number(row, "pi_low");
        const auto& high = table.text(row, "pi_high");
        if (high.empty() || high == "Inf" || high == "inf" || high == "+Inf" || high == "+inf") {
            rec.pi_high = std::numeric_limits<double>::infinity();
        } else {
            rec.pi_high = table.number(row, "pi_high");
        }
        if (rec.pi_high < rec.pi_low) {
            table.fail(row, "pi_high", "'pi_high' is below 'pi_low'");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_predictions(in, path.string());
}

}  // namespace enrollcast
