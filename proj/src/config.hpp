// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <string>

#include "dispatch.hpp"
#include "hnsw_index.hpp"
#include "matcher.hpp"
#include "ssrf.hpp"

namespace pasa {

struct EngineConfig {
  uint32_t embedding_dim = 64;
  std::string home_jurisdiction = "EU";
  HnswParams hnsw{};
  std::string log_path;             // empty: volatile engine, no persistence
  std::string index_snapshot_path;  // optional cache of the subscription index
  std::string admin_token = "change-me";
  bool allow_private_webhooks = false;  // test/bench harnesses only
  RetryPolicy webhook_retry{};
  MatchOptions matching{};
  Resolver resolver;  // empty -> system DNS
};

struct ServiceConfig {
  EngineConfig engine;
  std::string listen_address = "127.0.0.1:8787";
};

// Config file is a canonical key/value record. Recognized keys:
//   embedding_dim, home_jurisdiction, hnsw.m, hnsw.ef_construction,
//   hnsw.ef_search, log_path, index_snapshot_path, admin_token,
//   allow_private_webhooks, webhook.max_attempts, webhook.base_delay_ms,
//   webhook.request_timeout_ms, listen_address
// Environment variables override file values: key `hnsw.m` maps to PASA_HNSW_M.
ServiceConfig service_config_from_text(const std::string& text, bool apply_env = true);
std::string config_env_name(const std::string& key);

}  // namespace pasa
