#include "enrollcast/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "enrollcast/data_io.hpp"
#include "enrollcast/evaluation.hpp"
#include "enrollcast/json_io.hpp"
#include "enrollcast/pipeline.hpp"
#include "enrollcast/service.hpp"
#include "enrollcast/synthetic.hpp"

namespace enrollcast {

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

GapOverrides parse_gap_overrides(const std::vector<std::string>& items) {
    GapOverrides overrides;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ValidationError("gap_override", "--gap-override expects COUNTRY=MONTHS, got '" + item + "'");
        }
        try {
            std::size_t used = 0;
            const std::string value = item.substr(eq + 1);
            const double gap = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
            overrides[item.substr(0, eq)] = gap;
        } catch (const std::logic_error&) {
            throw ValidationError("gap_override", "--gap-override value is not a number in '" + item + "'");
        }
    }
    return overrides;
}

struct ForecastArgs {
    HistoryPaths paths;
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    double dispersion_floor = 1.0;
    std::vector<std::string> gap_overrides;
};

int cmd_forecast(const ForecastArgs& a, std::ostream& out, std::ostream& err) {
    Json scenario_json = read_json_file(a.scenario);
    if (a.seed) {
        scenario_json["seed"] = *a.seed;
    }
    const Scenario scenario = scenario_from_json(scenario_json);

    FitOptions fit;
    fit.accrual.dispersion_floor = a.dispersion_floor;
    fit.gap_overrides = parse_gap_overrides(a.gap_overrides);
    const FittedHistory fitted = load_and_fit(a.paths, fit);

    const ForecastReport report = run_forecast(scenario, fitted, a.threads);
    for (const auto& w : report.warnings) {
        err << "warning: " << w << "\n";
    }

    Json doc = to_json(report.summary);
    doc["scenario"] = to_json(scenario);
    doc["accrual_model"] = to_json(fitted.model);
    doc["warnings"] = report.warnings;
    write_text_file(a.out, dump_pretty(doc));
    out << format_forecast_table(scenario, fitted, report.summary);
    return 0;
}

int cmd_evaluate(const std::string& predictions, const std::string& out_path, const std::vector<double>& windows,
                 std::ostream& out) {
    const auto records = load_predictions(predictions);
    if (records.empty()) {
        throw ValidationError("predictions", predictions + " has no prediction rows");
    }
    std::vector<EvaluationRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        rows.push_back(score_prediction(r.study_id, r.actual_months, r.predicted_months, r.pi_low, r.pi_high, windows));
    }
    const SummaryMetrics metrics = summarize_rows(rows);
    write_text_file(out_path, dump_pretty(to_json(metrics)));

    char buf[200];
    out << "study        actual  predicted   error  PI              in PI";
    for (double w : windows) out << "  +/-" << format_number(w);
    out << "\n";
    for (const auto& row : rows) {
        char interval[64];
        if (std::isfinite(row.pi_high)) {
            std::snprintf(interval, sizeof interval, "(%.1f,%.1f)", row.pi_low, row.pi_high);
        } else {
            std::snprintf(interval, sizeof interval, "(%.1f,Inf)", row.pi_low);
        }
        std::snprintf(buf, sizeof buf, "%-12s %6.1f %10.1f %7.1f  %-15s %s", row.study_id.c_str(),
                      row.actual_months, row.predicted_months, row.prediction_error, interval,
                      row.within_pi ? "YES  " : "NO   ");
        out << buf;
        for (const auto& [width, hit] : row.windows) out << "  " << (hit ? "YES" : "NO ");
        out << "\n";
    }
    auto opt = [](const std::optional<double>& x) {
        if (!x) return std::string("Inf");
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", *x);
        return std::string(b);
    };
    out << "PI length median " << opt(metrics.pi_length_median) << ", mean " << opt(metrics.pi_length_mean) << "\n";
    std::snprintf(buf, sizeof buf, "prediction error median %.2f; |error| median %.2f, mean %.2f\n",
                  metrics.prediction_error_median, metrics.abs_error_median, metrics.abs_error_mean);
    out << buf;
    std::snprintf(buf, sizeof buf, "coverage: PI %.0f%%", metrics.coverage_pi * 100.0);
    out << buf;
    for (const auto& [width, cov] : metrics.coverage_windows) {
        std::snprintf(buf, sizeof buf, ", +/-%s mo %.0f%%", format_number(width).c_str(), cov * 100.0);
        out << buf;
    }
    out << "\n";
    return 0;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
              std::ostream& out) {
    Json j = read_json_file(config_path);
    if (seed) j["seed"] = *seed;
    const SyntheticConfig config = synthetic_config_from_json(j);
    const SyntheticHistory history = generate_synthetic_history(config);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream studies, groups, activations;
    write_studies_csv(studies, history.studies);
    write_site_groups_csv(groups, history.studies);
    write_activations_csv(activations, history.records);
    write_text_file(dir / "studies.csv", studies.str());
    write_text_file(dir / "study_site_groups.csv", groups.str());
    write_text_file(dir / "activations.csv", activations.str());
    write_text_file(dir / "truth.json", dump_pretty(to_json(history.truth)));
    out << "wrote " << history.studies.size() << " studies and " << history.records.size()
        << " activation records to " << dir.string() << "\n";
    return 0;
}

int cmd_serve(const HistoryPaths& paths, const std::string& host, int port, unsigned threads,
              const std::string& cors_origin, std::ostream& err) {
    ForecastService service({threads, cors_origin});
    httplib::Server server;
    service.bind(server);
    if (!server.bind_to_port(host, port)) {
        throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    }
    std::thread listener([&] { server.listen_after_bind(); });
    err << "listening on " << host << ":" << port << ", loading history...\n";
    try {
        service.install(load_and_fit(paths));
    } catch (...) {
        server.stop();
        listener.join();
        throw;
    }
    err << "history loaded; ready\n";
    listener.join();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clinical-trial enrollment forecasting from study-level history", "enrollcast"};
    app.require_subcommand(1);

    ForecastArgs fa;
    auto* forecast_cmd = app.add_subcommand("forecast", "Fit history, simulate a scenario, write forecast.json");
    forecast_cmd->add_option("--studies", fa.paths.studies, "studies.csv")->required()->check(CLI::ExistingFile);
    forecast_cmd->add_option("--site-groups", fa.paths.site_groups, "study_site_groups.csv")
        ->required()
        ->check(CLI::ExistingFile);
    forecast_cmd->add_option("--activations", fa.paths.activations, "activations.csv")
        ->required()
        ->check(CLI::ExistingFile);
    forecast_cmd->add_option("--scenario", fa.scenario, "scenario.json")->required()->check(CLI::ExistingFile);
    forecast_cmd->add_option("--out", fa.out, "output forecast.json")->required();
    forecast_cmd->add_option("--seed", fa.seed, "master seed (overrides the scenario's)");
    forecast_cmd->add_option("--threads", fa.threads, "worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    forecast_cmd->add_option("--dispersion-floor", fa.dispersion_floor, "lower clamp on the dispersion estimate")
        ->check(CLI::NonNegativeNumber);
    forecast_cmd->add_option("--gap-override", fa.gap_overrides, "COUNTRY=MONTHS opening spacing (repeatable)");

    std::string predictions, eval_out;
    std::vector<double> windows = {1.0, 2.0, 3.0};
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against actual durations");
    evaluate_cmd->add_option("--predictions", predictions, "predictions.csv")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--out", eval_out, "output metrics JSON")->required();
    evaluate_cmd->add_option("--windows", windows, "window widths in months")->delimiter(',');

    std::string synth_config, synth_dir;
    std::optional<std::uint64_t> synth_seed;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic history with known parameters");
    synth_cmd->add_option("--config", synth_config, "synthetic config JSON")->required()->check(CLI::ExistingFile);
    synth_cmd->add_option("--out-dir", synth_dir, "output directory")->required();
    synth_cmd->add_option("--seed", synth_seed, "seed (overrides the config's)");

    HistoryPaths serve_paths;
    int port = 8080;
    std::string host = "127.0.0.1";
    unsigned serve_threads = 1;
    std::string cors_origin = "*";
    auto* serve_cmd = app.add_subcommand("serve", "Serve the forecasting API over HTTP");
    serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--studies", serve_paths.studies)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--site-groups", serve_paths.site_groups)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--activations", serve_paths.activations)->required()->check(CLI::ExistingFile);
    serve_cmd->add_option("--threads", serve_threads)->check(CLI::PositiveNumber);
    serve_cmd->add_option("--cors-origin", cors_origin, "Access-Control-Allow-Origin value; empty disables");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*forecast_cmd) return cmd_forecast(fa, out, err);
        if (*evaluate_cmd) return cmd_evaluate(predictions, eval_out, windows, out);
        if (*synth_cmd) return cmd_synth(synth_config, synth_dir, synth_seed, out);
        if (*serve_cmd) return cmd_serve(serve_paths, host, port, serve_threads, cors_origin, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace enrollcast
