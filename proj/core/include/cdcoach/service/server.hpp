#pragma once

#include <memory>
#include <string>

#include "cdcoach/service/api.hpp"

namespace cdcoach::service {

// cpp-httplib front end for ApiService.
class HttpServer {
 public:
  explicit HttpServer(ApiService& api);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 binds an ephemeral port. Returns false if the address is taken.
  bool bind(const std::string& host, int port);
  int port() const { return port_; }

  /// Blocks until stop() is called.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = -1;
};

}  // namespace cdcoach::service
