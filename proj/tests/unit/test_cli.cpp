#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "enrollcast/cli.hpp"
#include "enrollcast/json_io.hpp"

namespace enrollcast {
namespace {

namespace fs = std::filesystem;

const std::string kData = ENROLLCAST_TEST_DATA;
const std::string kHistory = kData + "/history";

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "enrollcast");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("enrollcast_cli_" + std::to_string(std::random_device{}()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::vector<std::string> forecast_args(const std::string& scenario, const std::string& out) const {
        return {"forecast",   "--studies",    kHistory + "/studies.csv", "--site-groups",
                kHistory + "/study_site_groups.csv", "--activations", kHistory + "/activations.csv",
                "--scenario", scenario,       "--out",                   out};
    }

    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }

    fs::path dir_;
};

TEST_F(CliTest, ForecastWritesSummary) {
    const auto out = (dir_ / "forecast.json").string();
    const auto r = run(forecast_args(kHistory + "/scenario.json", out));
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = Json::parse(slurp(out));
    const double point = doc.at("point_months");
    EXPECT_LE(doc.at("pi_low_months").get<double>(), point);
    EXPECT_LE(point, doc.at("pi_high_months").get<double>());
    EXPECT_EQ(doc.at("scenario").at("seed").get<std::uint64_t>(), 20240601u);
    EXPECT_TRUE(doc.at("accrual_model").contains("psm"));
    EXPECT_FALSE(doc.at("curve").empty());
    EXPECT_NE(r.out.find("US"), std::string::npos);
}

TEST_F(CliTest, ForecastIsIdenticalAcrossThreadCounts) {
    const auto a = (dir_ / "a.json").string();
    const auto b = (dir_ / "b.json").string();
    const auto c = (dir_ / "c.json").string();
    auto args = forecast_args(kHistory + "/scenario.json", a);
    ASSERT_EQ(run(args).code, 0);
    args = forecast_args(kHistory + "/scenario.json", b);
    ASSERT_EQ(run(args).code, 0);
    args = forecast_args(kHistory + "/scenario.json", c);
    args.insert(args.end(), {"--threads", "4"});
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a), slurp(c));
}

TEST_F(CliTest, SeedFlagOverridesScenario) {
    const auto a = (dir_ / "a.json").string();
    const auto b = (dir_ / "b.json").string();
    ASSERT_EQ(run(forecast_args(kHistory + "/scenario.json", a)).code, 0);
    auto args = forecast_args(kHistory + "/scenario.json", b);
    args.insert(args.end(), {"--seed", "5"});
    ASSERT_EQ(run(args).code, 0);
    EXPECT_NE(slurp(a), slurp(b));
    EXPECT_EQ(Json::parse(slurp(b)).at("scenario").at("seed").get<std::uint64_t>(), 5u);
}

TEST_F(CliTest, MissingSeedIsRejected) {
    const auto scenario = write("s.json", R"({"countries":[{"country":"US","n_sites":3}],
        "target_enrollment":10,"replicates":10,"mode":"fixed"})");
    const auto r = run(forecast_args(scenario.string(), (dir_ / "f.json").string()));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("seed"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir_ / "f.json"));
}

TEST_F(CliTest, UnknownCountryIsRejected) {
    const auto scenario = write("s.json", R"({"countries":[{"country":"XX","n_sites":3}],
        "target_enrollment":10,"replicates":10,"mode":"fixed","seed":1})");
    const auto r = run(forecast_args(scenario.string(), (dir_ / "f.json").string()));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("XX"), std::string::npos);
}

TEST_F(CliTest, BadArguments) {
    EXPECT_EQ(run({"forecast", "--bogus"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"nosuchcommand"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
    auto args = forecast_args(kHistory + "/scenario.json", (dir_ / "f.json").string());
    args.insert(args.end(), {"--gap-override", "DE"});
    EXPECT_EQ(run(args).code, 1);
}

TEST_F(CliTest, EvaluateSevenStudies) {
    const auto out = (dir_ / "metrics.json").string();
    const auto r = run({"evaluate", "--predictions", kData + "/fixed_predictions.csv", "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto m = Json::parse(slurp(out));
    EXPECT_NEAR(m.at("prediction_error_median").get<double>(), -1.02, 1e-9);
    EXPECT_NEAR(m.at("pi_length_median").get<double>(), 8.5, 1e-9);
    EXPECT_NEAR(m.at("coverage_pi").get<double>(), 4.0 / 7.0, 1e-12);
    EXPECT_NEAR(m.at("coverage_1mo").get<double>(), 1.0 / 7.0, 1e-12);
    EXPECT_NEAR(m.at("coverage_3mo").get<double>(), 6.0 / 7.0, 1e-12);
    EXPECT_NE(r.out.find("(15.5,24.0)"), std::string::npos);
}

TEST_F(CliTest, EvaluateUnboundedAndCustomWindows) {
    const auto out = (dir_ / "metrics.json").string();
    const auto r = run({"evaluate", "--predictions", kData + "/unbounded_predictions.csv", "--out", out,
                        "--windows", "0.5,6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto m = Json::parse(slurp(out));
    EXPECT_TRUE(m.at("pi_length_mean").is_null());
    EXPECT_NEAR(m.at("pi_length_median").get<double>(), 17.6, 1e-9);
    EXPECT_TRUE(m.contains("coverage_0.5mo"));
    EXPECT_TRUE(m.contains("coverage_6mo"));
    EXPECT_NE(r.out.find("Inf"), std::string::npos);
}

TEST_F(CliTest, SynthThenForecast) {
    const auto config = write("synth.json", R"({
        "n_studies": 30, "true_psm": 0.5, "overdispersion": 1.5, "duration_range": [12, 24], "seed": 3,
        "countries": [{"name": "US", "t_mean": 2, "gap_mean": 0.4, "n_sites_range": [5, 12]},
                      {"name": "JP", "t_mean": 5, "gap_mean": 1.0, "n_sites_range": [2, 6]}]
    })");
    const auto hist = dir_ / "hist";
    const auto r = run({"synth", "--config", config.string(), "--out-dir", hist.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"studies.csv", "study_site_groups.csv", "activations.csv", "truth.json"}) {
        EXPECT_TRUE(fs::exists(hist / f)) << f;
    }
    EXPECT_DOUBLE_EQ(Json::parse(slurp(hist / "truth.json")).at("true_psm").get<double>(), 0.5);

    const auto scenario = write("s.json", R"({"countries":[{"country":"US","n_sites":10},{"country":"JP","n_sites":4}],
        "target_enrollment":80,"replicates":200,"mode":"poisson","seed":4})");
    const auto out = dir_ / "f.json";
    const auto f = run({"forecast", "--studies", (hist / "studies.csv").string(), "--site-groups",
                        (hist / "study_site_groups.csv").string(), "--activations", (hist / "activations.csv").string(),
                        "--scenario", scenario.string(), "--out", out.string()});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_TRUE(Json::parse(slurp(out)).at("point_months").is_number());
}

}  // namespace
}  // namespace enrollcast
