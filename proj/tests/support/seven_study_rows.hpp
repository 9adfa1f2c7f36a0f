#pragma once

#include <limits>
#include <string>
#include <vector>

// Published predictions for seven completed studies. Actual durations and
// point predictions carry the extra digit needed to reproduce the one-decimal
// error column; interval bounds are as printed.
namespace enrollcast::testdata {

struct PredictionRow {
    std::string study_id;
    double actual;
    double predicted;
    double pi_low;
    double pi_high;
};

inline const std::vector<PredictionRow> kFixedRows{
    {"1", 26.36, 19.34, 15.5, 24.0}, {"2", 17.5, 18.9, 15.8, 22.4}, {"3", 11.26, 9.2, 8.1, 10.3},
    {"4", 10.0, 8.7, 7.7, 9.9},      {"5", 21.12, 20.10, 16.0, 26.5}, {"6", 16.1, 19.0, 14.9, 24.1},
    {"7", 10.84, 11.16, 8.0, 18.1},
};

inline const std::vector<PredictionRow> kPerturbedRows{
    {"1", 26.36, 18.5, 14.7, 24.9}, {"2", 17.5, 18.8, 15.3, 23.1},   {"3", 11.26, 9.74, 6.7, 15.6},
    {"4", 10.0, 9.4, 6.1, 15.9},    {"5", 21.12, 20.06, 16.0, 26.5}, {"6", 16.1, 19.3, 15.4, 25.2},
    {"7", 10.84, 10.3, 6.0, 19.7},
};

// Rounded to one decimal as printed.
inline const std::vector<PredictionRow> kFixedRowsAsPrinted{
    {"1", 26.4, 19.3, 15.5, 24.0}, {"2", 17.5, 18.9, 15.8, 22.4}, {"3", 11.3, 9.2, 8.1, 10.3},
    {"4", 10.0, 8.7, 7.7, 9.9},    {"5", 21.1, 20.1, 16.0, 26.5}, {"6", 16.1, 19.0, 14.9, 24.1},
    {"7", 10.8, 11.2, 8.0, 18.1},
};

// A competing model whose sixth interval never closes.
inline const std::vector<PredictionRow> kUnboundedRows{
    {"1", 26.36, 20.5, 13.7, 31.3}, {"2", 17.5, 20.2, 13.5, 35.4},
    {"3", 11.26, 10.1, 6.4, 17.3},  {"4", 10.0, 10.0, 6.9, 17.3},
    {"5", 21.12, 22.1, 15.7, 36.7}, {"6", 16.1, 35.0, 16.2, std::numeric_limits<double>::infinity()},
    {"7", 10.84, 11.6, 8.11, 17.7},
};

}  // namespace enrollcast::testdata
