#include "http_server.hpp"

#include <ostream>

#include <httplib.h>

namespace ydss::cli {

std::unique_ptr<httplib::Server> make_server(const PredictionService& service,
                                             const std::string& cors_origin)
{
    auto server = std::make_unique<httplib::Server>();
    server->set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                 {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});

    auto reply = [&service](const httplib::Request& req, httplib::Response& res) {
        const auto r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server->Get("/schema", reply);
    server->Post("/predict", reply);
    server->Post("/whatif", reply);
    server->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
    });
    // Unrouted paths still get a JSON error list.
    server->set_error_handler([&service](const httplib::Request& req, httplib::Response& res) {
        if (res.status != 404) return;
        const auto r = service.handle(req.method, req.path, req.body);
        res.set_content(r.body.dump(), "application/json");
    });
    return server;
}

int serve_http(const PredictionService& service, const std::string& host, int port,
               const std::string& cors_origin, std::ostream& log)
{
    auto server = make_server(service, cors_origin);
    if (!server->bind_to_port(host, port)) {
        log << "cannot bind " << host << ':' << port << '\n';
        return 1;
    }
    log << "serving on http://" << host << ':' << port << std::endl;
    return server->listen_after_bind() ? 0 : 1;
}

} // namespace ydss::cli
