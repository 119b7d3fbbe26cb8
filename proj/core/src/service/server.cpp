#include "cdcoach/service/server.hpp"

#include <httplib.h>

namespace cdcoach::service {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(ApiService& api) : impl_(std::make_unique<Impl>()) {
  auto route = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request;
    request.method = req.method;
    request.path = req.path;
    for (const auto& [key, value] : req.params) request.query.emplace(key, value);
    request.authorization = req.get_header_value("Authorization");
    request.body = req.body;

    const ApiResponse response = api.handle(request);
    res.status = response.status;
    if (!response.body.empty()) res.set_content(response.body, "application/json");
  };
  // httplib's default also sets SO_REUSEPORT, which would let a second
  // instance silently share an occupied port.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  const char* pattern = R"(/.*)";
  impl_->server.Get(pattern, route);
  impl_->server.Post(pattern, route);
  impl_->server.Put(pattern, route);
  impl_->server.Delete(pattern, route);
  impl_->server.Patch(pattern, route);
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    return port_ > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace cdcoach::service
