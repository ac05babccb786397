// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "http_server.hpp"

#include <httplib.h>

#include <condition_variable>

#include "digest.hpp"
#include "errors.hpp"

namespace pasa {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return 400;
    case ErrorCode::ssrf: return 400;
    case ErrorCode::state: return 409;
    case ErrorCode::not_found: return 404;
    case ErrorCode::authorization: return 403;
    case ErrorCode::io: return 500;
    case ErrorCode::internal: return 500;
  }
  return 500;
}

void set_error(httplib::Response& res, int status, std::string_view code,
               std::string_view detail) {
  Record r;
  r.put("error", std::string(code));
  r.put("detail", std::string(detail));
  res.status = status;
  res.set_content(r.encode(), "text/plain");
}

std::string bearer_token(const httplib::Request& req) {
  std::string auth = req.get_header_value("Authorization");
  const std::string prefix = "Bearer ";
  if (auth.rfind(prefix, 0) != 0) return "";
  return auth.substr(prefix.size());
}

}  // namespace

struct HttpService::Impl {
  Engine& engine;
  ServiceConfig config;
  httplib::Server server;
  std::thread serve_thread;
  std::thread pump_thread;
  std::atomic<bool> running{false};
  std::mutex stop_mutex;
  std::condition_variable stop_cv;

  mutable std::mutex token_mutex;
  std::unordered_map<std::string, std::string> token_to_agent;

  Impl(Engine& e, ServiceConfig c) : engine(e), config(std::move(c)) {}

  std::string derive_token(const std::string& agent_id) const {
    return sha256_hex(config.engine.admin_token + "|agent-token|" + agent_id);
  }

  void remember_agent(const std::string& agent_id) {
    std::lock_guard lock(token_mutex);
    token_to_agent[derive_token(agent_id)] = agent_id;
  }

  // Empty result means unauthenticated.
  std::string agent_for_request(const httplib::Request& req) const {
    std::string token = bearer_token(req);
    if (token.empty()) return "";
    std::lock_guard lock(token_mutex);
    auto it = token_to_agent.find(token);
    return it == token_to_agent.end() ? "" : it->second;
  }

  bool is_admin(const httplib::Request& req) const {
    return bearer_token(req) == config.engine.admin_token;
  }

  template <typename Fn>
  void handle(const httplib::Request& req, httplib::Response& res, Fn&& fn) {
    (void)req;
    try {
      fn();
    } catch (const Error& e) {
      set_error(res, status_for(e.code()), error_code_name(e.code()), e.what());
    } catch (const std::exception& e) {
      set_error(res, 500, "internal", e.what());
    }
  }

  void routes() {
    server.Post("/v1/agents", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        Record body = Record::parse(req.body);
        AgentProfile profile = agent_from_record(body);
        bool exists = false;
        try {
          engine.get_agent(profile.agent_id);
          exists = true;
        } catch (const NotFoundError&) {
        }
        if (exists) {
          // Profile updates require the agent's own token or the admin's.
          std::string caller = agent_for_request(req);
          if (caller != profile.agent_id && !is_admin(req)) {
            throw AuthorizationError("re-registration requires the agent's bearer token");
          }
        }
        engine.register_agent(profile);
        remember_agent(profile.agent_id);
        Record out;
        out.put("agent_id", profile.agent_id);
        out.put("token", derive_token(profile.agent_id));
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Post("/v1/chunks", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        Record body = Record::parse(req.body);
        SubmitChunkRequest request;
        if (auto id = body.find("chunk_id")) request.chunk_id = *id;
        if (auto content = body.find("content")) request.content = *content;
        request.contributor_id = caller;
        request.embedding = body.get_doubles("embedding");
        request.policy = raw_policy_from_record(body);
        std::string chunk_id = engine.submit_chunk(request);
        Record out;
        out.put("chunk_id", chunk_id);
        out.put("status", to_string(ChunkStatus::proposed));
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Post(R"(/v1/chunks/([^/]+)/status)",
                [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        if (!is_admin(req)) {
          throw AuthorizationError("status transitions require the admin token");
        }
        Record body = Record::parse(req.body);
        ChunkStatus to = chunk_status_from_string(body.get("status"));
        if (to == ChunkStatus::proposed) {
          throw ValidationError("cannot transition into proposed");
        }
        engine.transition_chunk(req.matches[1], to);
        Record out;
        out.put("chunk_id", req.matches[1]);
        out.put("status", to_string(to));
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Get(R"(/v1/chunks/([^/]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        Chunk chunk = engine.get_chunk(caller, req.matches[1]);
        res.set_content(to_record(chunk).encode(), "text/plain");
      });
    });

    server.Post("/v1/subscriptions", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        Record body = Record::parse(req.body);
        CreateSubscriptionRequest request;
        request.agent_id = caller;
        request.query_embedding = body.get_doubles("query_embedding");
        request.similarity_threshold = body.get_double("similarity_threshold");
        if (auto t = body.find("trigger_status")) {
          request.trigger_status = trigger_status_from_string(*t);
        }
        if (auto m = body.find("method")) {
          request.method = notification_method_from_string(*m);
        }
        if (auto url = body.find("webhook_url")) request.webhook_url = *url;
        if (auto max = body.find_int("requested_max_sensitivity")) {
          request.requested_max_sensitivity = int(*max);
        }
        std::string id = engine.create_subscription(request);
        Record out;
        out.put("subscription_id", id);
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Delete(R"(/v1/subscriptions/([^/]+))",
                  [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        engine.deactivate_subscription(req.matches[1], caller);
        Record out;
        out.put("subscription_id", req.matches[1]);
        out.put("active", "false");
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Get("/v1/notifications", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        uint64_t since = 0;
        size_t limit = 100;
        bool include_acked = false;
        if (req.has_param("since")) since = parse_uint_strict(req.get_param_value("since"));
        if (req.has_param("limit")) {
          limit = size_t(parse_uint_strict(req.get_param_value("limit")));
          if (limit > 1000) limit = 1000;
        }
        if (req.has_param("include_acked")) {
          include_acked = req.get_param_value("include_acked") == "true";
        }
        auto notifications = engine.poll_notifications(caller, since, limit, include_acked);
        std::vector<Record> records;
        Record head;
        head.put_uint("count", notifications.size());
        records.push_back(std::move(head));
        for (const auto& n : notifications) records.push_back(to_record(n));
        res.set_content(encode_records(records), "text/plain");
      });
    });

    server.Post("/v1/notifications/ack",
                [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] {
        std::string caller = agent_for_request(req);
        if (caller.empty()) {
          set_error(res, 401, "authorization", "missing or unknown bearer token");
          return;
        }
        Record body = Record::parse(req.body);
        std::vector<std::string> ids;
        for (auto& part : split(body.get("notification_ids"), ',')) {
          if (!part.empty()) ids.push_back(std::move(part));
        }
        uint32_t acked = engine.ack_notifications(caller, ids);
        Record out;
        out.put_uint("acked", acked);
        res.set_content(out.encode(), "text/plain");
      });
    });

    server.Get("/v1/stats", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [&] { res.set_content(engine.stats().encode(), "text/plain"); });
    });
  }
};

HttpService::HttpService(Engine& engine, ServiceConfig config)
    : impl_(std::make_unique<Impl>(engine, std::move(config))) {}

HttpService::~HttpService() { stop(); }

void HttpService::start() {
  impl_->routes();
  for (const auto& [id, _] : impl_->engine.agents_snapshot()) {
    impl_->remember_agent(id);
  }

  auto address = impl_->config.listen_address;
  std::string host = "127.0.0.1";
  int port = 8787;
  if (size_t colon = address.rfind(':'); colon != std::string::npos) {
    host = address.substr(0, colon);
    port = int(parse_int_strict(address.substr(colon + 1)));
  } else if (!address.empty()) {
    host = address;
  }

  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    if (port_ <= 0) throw IoError("cannot bind " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port)) {
      throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }

  impl_->running = true;
  impl_->serve_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->pump_thread = std::thread([this] {
    while (impl_->running) {
      impl_->engine.pump_deliveries();
      std::unique_lock lock(impl_->stop_mutex);
      impl_->stop_cv.wait_for(lock, std::chrono::milliseconds(100),
                              [this] { return !impl_->running; });
    }
  });
  impl_->server.wait_until_ready();
}

void HttpService::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  impl_->server.stop();
  impl_->stop_cv.notify_all();
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
  if (impl_->pump_thread.joinable()) impl_->pump_thread.join();
}

void HttpService::wait() {
  if (impl_->serve_thread.joinable()) impl_->serve_thread.join();
}

std::string HttpService::agent_token(const std::string& agent_id) const {
  return impl_->derive_token(agent_id);
}

}  // namespace pasa
