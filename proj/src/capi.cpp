// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "pasa/pasa.h"

#include <cstring>
#include <string>

#include "bench/report.hpp"
#include "config.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "http_server.hpp"

namespace {

thread_local std::string g_last_error;

pasa_status status_of(pasa::ErrorCode code) {
  using pasa::ErrorCode;
  switch (code) {
    case ErrorCode::validation: return PASA_ERR_VALIDATION;
    case ErrorCode::state: return PASA_ERR_STATE;
    case ErrorCode::not_found: return PASA_ERR_NOT_FOUND;
    case ErrorCode::authorization: return PASA_ERR_AUTHORIZATION;
    case ErrorCode::ssrf: return PASA_ERR_SSRF;
    case ErrorCode::io: return PASA_ERR_IO;
    case ErrorCode::internal: return PASA_ERR_INTERNAL;
  }
  return PASA_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

template <typename Fn>
pasa_status guarded(Fn&& fn) {
  try {
    fn();
    return PASA_OK;
  } catch (const pasa::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PASA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PASA_ERR_INTERNAL;
  }
}

}  // namespace

struct pasa_engine {
  std::unique_ptr<pasa::Engine> engine;
};

struct pasa_server {
  std::unique_ptr<pasa::HttpService> service;
};

extern "C" {

const char* pasa_version(void) { return "0.1.0"; }

const char* pasa_status_name(pasa_status status) {
  switch (status) {
    case PASA_OK: return "ok";
    case PASA_ERR_VALIDATION: return "validation";
    case PASA_ERR_STATE: return "state";
    case PASA_ERR_NOT_FOUND: return "not_found";
    case PASA_ERR_AUTHORIZATION: return "authorization";
    case PASA_ERR_SSRF: return "ssrf";
    case PASA_ERR_IO: return "io";
    case PASA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* pasa_last_error(void) { return g_last_error.c_str(); }

void pasa_string_free(char* s) { delete[] s; }

pasa_status pasa_engine_open(const char* config_text, pasa_engine** out_engine) {
  if (!out_engine) return PASA_ERR_VALIDATION;
  *out_engine = nullptr;
  return guarded([&] {
    auto config = pasa::service_config_from_text(config_text ? config_text : "");
    auto handle = new pasa_engine{pasa::Engine::open(std::move(config.engine))};
    *out_engine = handle;
  });
}

void pasa_engine_close(pasa_engine* engine) { delete engine; }

pasa_status pasa_register_agent(pasa_engine* engine, const char* agent_record,
                                char** out_agent_id) {
  if (!engine || !agent_record) return PASA_ERR_VALIDATION;
  return guarded([&] {
    auto profile = pasa::agent_from_record(pasa::Record::parse(agent_record));
    std::string id = engine->engine->register_agent(profile);
    if (out_agent_id) *out_agent_id = dup_string(id);
  });
}

pasa_status pasa_submit_chunk(pasa_engine* engine, const char* chunk_record,
                              char** out_chunk_id) {
  if (!engine || !chunk_record) return PASA_ERR_VALIDATION;
  return guarded([&] {
    pasa::Record r = pasa::Record::parse(chunk_record);
    pasa::SubmitChunkRequest request;
    if (auto id = r.find("chunk_id")) request.chunk_id = *id;
    if (auto content = r.find("content")) request.content = *content;
    if (auto contributor = r.find("contributor_id")) request.contributor_id = *contributor;
    request.embedding = r.get_doubles("embedding");
    request.policy = pasa::raw_policy_from_record(r);
    std::string id = engine->engine->submit_chunk(request);
    if (out_chunk_id) *out_chunk_id = dup_string(id);
  });
}

pasa_status pasa_transition_chunk(pasa_engine* engine, const char* chunk_id,
                                  const char* new_status) {
  if (!engine || !chunk_id || !new_status) return PASA_ERR_VALIDATION;
  return guarded([&] {
    engine->engine->transition_chunk(chunk_id, pasa::chunk_status_from_string(new_status));
  });
}

pasa_status pasa_get_chunk(pasa_engine* engine, const char* caller_agent_id,
                           const char* chunk_id, char** out_chunk_record) {
  if (!engine || !caller_agent_id || !chunk_id) return PASA_ERR_VALIDATION;
  return guarded([&] {
    pasa::Chunk chunk = engine->engine->get_chunk(caller_agent_id, chunk_id);
    if (out_chunk_record) *out_chunk_record = dup_string(pasa::to_record(chunk).encode());
  });
}

pasa_status pasa_create_subscription(pasa_engine* engine, const char* subscription_record,
                                     char** out_subscription_id) {
  if (!engine || !subscription_record) return PASA_ERR_VALIDATION;
  return guarded([&] {
    pasa::Record r = pasa::Record::parse(subscription_record);
    pasa::CreateSubscriptionRequest request;
    request.agent_id = r.get("agent_id");
    request.query_embedding = r.get_doubles("query_embedding");
    request.similarity_threshold = r.get_double("similarity_threshold");
    if (auto t = r.find("trigger_status")) {
      request.trigger_status = pasa::trigger_status_from_string(*t);
    }
    if (auto m = r.find("method")) request.method = pasa::notification_method_from_string(*m);
    if (auto url = r.find("webhook_url")) request.webhook_url = *url;
    if (auto max = r.find_int("requested_max_sensitivity")) {
      request.requested_max_sensitivity = int(*max);
    }
    std::string id = engine->engine->create_subscription(request);
    if (out_subscription_id) *out_subscription_id = dup_string(id);
  });
}

pasa_status pasa_deactivate_subscription(pasa_engine* engine, const char* subscription_id,
                                         const char* caller_agent_id) {
  if (!engine || !subscription_id) return PASA_ERR_VALIDATION;
  return guarded([&] {
    engine->engine->deactivate_subscription(subscription_id,
                                            caller_agent_id ? caller_agent_id : "");
  });
}

pasa_status pasa_poll_notifications(pasa_engine* engine, const char* agent_id,
                                    uint64_t since_sequence, uint32_t limit, int include_acked,
                                    char** out_records) {
  if (!engine || !agent_id) return PASA_ERR_VALIDATION;
  return guarded([&] {
    auto notifications = engine->engine->poll_notifications(agent_id, since_sequence, limit,
                                                            include_acked != 0);
    std::vector<pasa::Record> records;
    pasa::Record head;
    head.put_uint("count", notifications.size());
    records.push_back(std::move(head));
    for (const auto& n : notifications) records.push_back(pasa::to_record(n));
    if (out_records) *out_records = dup_string(pasa::encode_records(records));
  });
}

pasa_status pasa_ack_notifications(pasa_engine* engine, const char* agent_id,
                                   const char* ids_csv, uint32_t* out_acked) {
  if (!engine || !agent_id || !ids_csv) return PASA_ERR_VALIDATION;
  return guarded([&] {
    std::vector<std::string> ids;
    for (auto& part : pasa::split(ids_csv, ',')) {
      if (!part.empty()) ids.push_back(std::move(part));
    }
    uint32_t acked = engine->engine->ack_notifications(agent_id, ids);
    if (out_acked) *out_acked = acked;
  });
}

pasa_status pasa_pump_deliveries(pasa_engine* engine, uint32_t* out_attempts) {
  if (!engine) return PASA_ERR_VALIDATION;
  return guarded([&] {
    size_t attempts = engine->engine->pump_deliveries();
    if (out_attempts) *out_attempts = uint32_t(attempts);
  });
}

pasa_status pasa_engine_stats(pasa_engine* engine, char** out_record) {
  if (!engine || !out_record) return PASA_ERR_VALIDATION;
  return guarded([&] { *out_record = dup_string(engine->engine->stats().encode()); });
}

pasa_status pasa_server_start(pasa_engine* engine, const char* config_text,
                              const char* listen_address, pasa_server** out_server) {
  if (!engine || !out_server) return PASA_ERR_VALIDATION;
  *out_server = nullptr;
  return guarded([&] {
    auto config = pasa::service_config_from_text(config_text ? config_text : "");
    if (listen_address && *listen_address) config.listen_address = listen_address;
    auto handle = new pasa_server{};
    handle->service = std::make_unique<pasa::HttpService>(*engine->engine, config);
    try {
      handle->service->start();
    } catch (...) {
      delete handle;
      throw;
    }
    *out_server = handle;
  });
}

int pasa_server_port(pasa_server* server) { return server ? server->service->port() : -1; }

pasa_status pasa_server_wait(pasa_server* server) {
  if (!server) return PASA_ERR_VALIDATION;
  return guarded([&] { server->service->wait(); });
}

pasa_status pasa_server_stop(pasa_server* server) {
  if (!server) return PASA_ERR_VALIDATION;
  pasa_status status = guarded([&] { server->service->stop(); });
  delete server;
  return status;
}

pasa_status pasa_bench_run(const char* config_text, const char* experiment, const char* out_dir,
                           const char* format, char** out_summary, int* out_identities_pass) {
  if (!experiment || !out_dir) return PASA_ERR_VALIDATION;
  return guarded([&] {
    pasa::Record config_record =
        (config_text && *config_text) ? pasa::Record::parse(config_text) : pasa::Record{};
    auto config = pasa::bench::ScenarioConfig::from_record(config_record);

    std::string exp = experiment;
    if (exp == "gen") {
      auto scenario = pasa::bench::generate_scenario(config);
      std::string path = pasa::bench::write_scenario(scenario, out_dir);
      if (out_summary) *out_summary = dup_string("scenario written to " + path + "\n");
      if (out_identities_pass) *out_identities_pass = 1;
      return;
    }
    if (exp != "all" && exp != "compliance" && exp != "ablation" && exp != "curation" &&
        exp != "scalability" && exp != "adversarial") {
      throw pasa::ValidationError("unknown experiment: " + exp);
    }
    auto results = pasa::bench::run_bench(config, exp);
    pasa::bench::write_report(results, format && *format ? format : "table-text", out_dir);
    if (out_summary) *out_summary = dup_string(pasa::bench::render_text(results));
    if (out_identities_pass) *out_identities_pass = results.all_identities_pass() ? 1 : 0;
  });
}

}  // extern "C"
