// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>

#include "config.hpp"
#include "engine.hpp"

namespace pasa {

// HTTP facade over the engine. Request/response bodies use the canonical
// key/value text format. Authentication is bearer-token per agent; the token
// is returned by POST /v1/agents. Chunk status transitions require the admin
// token from the service config.
//
// Endpoints:
//   POST   /v1/agents
//   POST   /v1/chunks
//   POST   /v1/chunks/{id}/status
//   GET    /v1/chunks/{id}
//   POST   /v1/subscriptions
//   DELETE /v1/subscriptions/{id}
//   GET    /v1/notifications?since=N&limit=K&include_acked=bool
//   POST   /v1/notifications/ack
class HttpService {
 public:
  HttpService(Engine& engine, ServiceConfig config);
  ~HttpService();

  // Binds and serves on a background thread. Port 0 picks a free port.
  void start();
  void stop();
  void wait();  // blocks until stop() is called

  int port() const { return port_; }
  std::string agent_token(const std::string& agent_id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace pasa
