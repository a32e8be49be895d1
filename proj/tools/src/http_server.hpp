#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "ydss/service.hpp"

namespace httplib {
class Server;
}

namespace ydss::cli {

/// Server with the three routes, CORS headers and JSON error bodies wired to
/// `service`, which must outlive it.
std::unique_ptr<httplib::Server> make_server(const PredictionService& service,
                                             const std::string& cors_origin);

/// Blocks serving `service` until the process is stopped. Returns 1 if the
/// socket cannot be bound.
int serve_http(const PredictionService& service, const std::string& host, int port,
               const std::string& cors_origin, std::ostream& log);

} // namespace ydss::cli
