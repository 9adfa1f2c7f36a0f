#include "enrollcast/service.hpp"

#include <httplib.h>

#include "enrollcast/json_io.hpp"

namespace enrollcast {

namespace {

HttpResponse error_response(int status, const std::string& message, const std::string& field = {}) {
    Json body{{"error", message}};
    if (!field.empty()) body["field"] = field;
    return {status, body.dump()};
}

HttpResponse not_ready() { return error_response(503, "history is still loading"); }

}  // namespace

ForecastService::ForecastService(ServiceOptions options) : options_(std::move(options)) {}

void ForecastService::install(FittedHistory fitted) {
    auto state = std::make_shared<const FittedHistory>(std::move(fitted));
    std::lock_guard lock(mutex_);
    fitted_ = std::move(state);
}

std::shared_ptr<const FittedHistory> ForecastService::fitted() const {
    std::lock_guard lock(mutex_);
    return fitted_;
}

bool ForecastService::ready() const { return fitted() != nullptr; }

HttpResponse ForecastService::handle_healthz() const {
    if (!ready()) return not_ready();
    return {200, Json{{"status", "ok"}}.dump()};
}

HttpResponse ForecastService::handle_countries() const {
    const auto state = fitted();
    if (!state) return not_ready();
    Json countries = Json::array();
    for (const auto& p : state->profiles) {
        countries.push_back(to_json(p));
    }
    return {200, Json{{"countries", countries}}.dump()};
}

HttpResponse ForecastService::handle_accrual_model() const {
    const auto state = fitted();
    if (!state) return not_ready();
    return {200, to_json(state->model).dump()};
}

HttpResponse ForecastService::handle_forecast(const std::string& body) const {
    const auto state = fitted();
    if (!state) return not_ready();

    Scenario scenario;
    try {
        const Json request = Json::parse(body);
        scenario = scenario_from_json(request);
        ForecastReport report = run_forecast(scenario, *state, options_.threads);
        Json out = to_json(report.summary);
        out["warnings"] = report.warnings;
        if (!report.summary.point_months) {
            out["error"] = "target enrollment is not reached within the horizon in most replicates";
            return {422, out.dump()};
        }
        return {200, out.dump()};
    } catch (const Json::parse_error& e) {
        return error_response(400, std::string("request body is not valid JSON: ") + e.what(), "body");
    } catch (const ValidationError& e) {
        return error_response(400, e.what(), e.field());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

void ForecastService::bind(httplib::Server& server) const {
    auto send = [](httplib::Response& res, const HttpResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    if (!options_.cors_origin.empty()) {
        server.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                                    {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                    {"Access-Control-Allow-Headers", "Content-Type"}});
        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    }
    server.Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, handle_healthz());
    });
    server.Get("/api/countries", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, handle_countries());
    });
    server.Get("/api/accrual-model", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, handle_accrual_model());
    });
    server.Post("/api/forecast", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_forecast(req.body));
    });
}

}  // namespace enrollcast
