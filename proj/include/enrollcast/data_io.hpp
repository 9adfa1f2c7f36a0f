#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "enrollcast/domain.hpp"

namespace enrollcast {

// Malformed input file. The message reads "<file>:<line>:<column>: <reason>";
// column is the 1-based field index (0 when the whole row is at fault).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, std::size_t column, const std::string& reason);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

// studies.csv:            study_id,n_subjects,duration_months[,offset_override]
// study_site_groups.csv:  study_id,country,n_sites[,group_open_month]
// One HistoricalStudy per studies row, in file order, with its site groups in
// group-file order.
std::vector<HistoricalStudy> load_historical_studies(const std::filesystem::path& studies_path,
                                                     const std::filesystem::path& site_groups_path);

// activations.csv: study_id,country,activation_month (one row per site).
// One record per (study_id, country) in order of first appearance.
std::vector<ActivationRecord> load_activation_records(const std::filesystem::path& path);

// Stream forms of the loaders; `name` labels errors.
std::vector<HistoricalStudy> read_historical_studies(std::istream& studies, const std::string& studies_name,
                                                     std::istream& groups, const std::string& groups_name);
std::vector<ActivationRecord> read_activation_records(std::istream& in, const std::string& name);

void write_studies_csv(std::ostream& out, const std::vector<HistoricalStudy>& studies);
void write_site_groups_csv(std::ostream& out, const std::vector<HistoricalStudy>& studies);
void write_activations_csv(std::ostream& out, const std::vector<ActivationRecord>& records);

struct PredictionRecord {
    std::string study_id;
    double actual_months;
    double predicted_months;
    double pi_low;
    double pi_high;  // "Inf", "inf" or blank read as +infinity
};

// predictions.csv: study_id,actual_months,predicted_months,pi_low,pi_high
std::vector<PredictionRecord> load_predictions(const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& name);

// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

}  // namespace enrollcast
