#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "enrollcast/pipeline.hpp"

namespace httplib {
class Server;
}

namespace enrollcast {

struct HttpResponse {
    int status;
    std::string body;  // JSON
};

struct ServiceOptions {
    unsigned threads = 1;
    std::string cors_origin = "*";  // empty disables CORS headers
};

// HTTP/JSON front end over a history fitted once at startup. Handlers are
// const and share the fitted state read-only; until install() is called every
// API endpoint answers 503.
class ForecastService {
public:
    explicit ForecastService(ServiceOptions options = {});

    void install(FittedHistory fitted);
    bool ready() const;

    // POST /api/forecast
    HttpResponse handle_forecast(const std::string& body) const;
    // GET /api/countries
    HttpResponse handle_countries() const;
    // GET /api/accrual-model
    HttpResponse handle_accrual_model() const;
    // GET /healthz
    HttpResponse handle_healthz() const;

    // Registers the routes (and CORS preflight) on `server`. The service must
    // outlive the server.
    void bind(httplib::Server& server) const;

private:
    std::shared_ptr<const FittedHistory> fitted() const;

    ServiceOptions options_;
    mutable std::mutex mutex_;
    std::shared_ptr<const FittedHistory> fitted_;
};

}  // namespace enrollcast
