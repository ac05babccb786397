// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "config.hpp"

#include <cstdlib>

#include "errors.hpp"
#include "record.hpp"

namespace pasa {

namespace {

const char* kKnownKeys[] = {
    "embedding_dim",     "home_jurisdiction",       "hnsw.m",
    "hnsw.ef_construction", "hnsw.ef_search",       "log_path",
    "index_snapshot_path",  "admin_token",          "allow_private_webhooks",
    "webhook.max_attempts", "webhook.base_delay_ms", "webhook.request_timeout_ms",
    "listen_address",
};

}  // namespace

std::string config_env_name(const std::string& key) {
  std::string out = "PASA_";
  for (char c : key) {
    if (c == '.') {
      out.push_back('_');
    } else {
      out.push_back(char(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

ServiceConfig service_config_from_text(const std::string& text, bool apply_env) {
  Record r = text.empty() ? Record{} : Record::parse(text);
  if (apply_env) {
    for (const char* key : kKnownKeys) {
      if (const char* v = std::getenv(config_env_name(key).c_str())) {
        r.put(key, v);  // later entries win via last-match lookup below
      }
    }
  }
  // Last occurrence wins so env overrides stack after file values.
  auto last = [&r](std::string_view key) -> std::optional<std::string> {
    std::optional<std::string> found;
    for (const auto& [k, v] : r.entries()) {
      if (k == key) found = v;
    }
    return found;
  };

  ServiceConfig cfg;
  if (auto v = last("embedding_dim")) {
    uint64_t dim = parse_uint_strict(*v);
    if (dim == 0 || dim > 65536) throw ValidationError("embedding_dim out of range: " + *v);
    cfg.engine.embedding_dim = uint32_t(dim);
  }
  if (auto v = last("home_jurisdiction")) {
    if (v->empty()) throw ValidationError("home_jurisdiction must not be empty");
    cfg.engine.home_jurisdiction = *v;
  }
  if (auto v = last("hnsw.m")) cfg.engine.hnsw.m = int(parse_int_strict(*v));
  if (auto v = last("hnsw.ef_construction")) {
    cfg.engine.hnsw.ef_construction = int(parse_int_strict(*v));
  }
  if (auto v = last("hnsw.ef_search")) cfg.engine.hnsw.ef_search = int(parse_int_strict(*v));
  if (auto v = last("log_path")) cfg.engine.log_path = *v;
  if (auto v = last("index_snapshot_path")) cfg.engine.index_snapshot_path = *v;
  if (auto v = last("admin_token")) cfg.engine.admin_token = *v;
  if (auto v = last("allow_private_webhooks")) {
    if (*v != "true" && *v != "false") {
      throw ValidationError("allow_private_webhooks must be true or false");
    }
    cfg.engine.allow_private_webhooks = (*v == "true");
  }
  if (auto v = last("webhook.max_attempts")) {
    cfg.engine.webhook_retry.max_attempts = int(parse_int_strict(*v));
  }
  if (auto v = last("webhook.base_delay_ms")) {
    cfg.engine.webhook_retry.base_delay_ms = parse_int_strict(*v);
  }
  if (auto v = last("webhook.request_timeout_ms")) {
    cfg.engine.webhook_retry.request_timeout_ms = parse_int_strict(*v);
  }
  if (auto v = last("listen_address")) cfg.listen_address = *v;

  if (cfg.engine.hnsw.m < 2) throw ValidationError("hnsw.m must be >= 2");
  if (cfg.engine.hnsw.ef_search < 1) throw ValidationError("hnsw.ef_search must be >= 1");
  return cfg;
}

}  // namespace pasa
