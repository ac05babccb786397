/* Copyright (c) 2026 the pasa authors
 * Licensed under the Apache 2.0 license found in the LICENSE file or at:
 *     https://opensource.org/licenses/Apache-2.0
 *
 * C API for the pasa engine: a governance-aware semantic publish-subscribe
 * core. Agents subscribe to semantic regions of a curated knowledge base via
 * embedding queries; notifications fire only for chunks that clear the
 * subscription's similarity threshold, the five-dimension policy predicate,
 * and the curation status routing.
 *
 * All structured inputs and outputs use the canonical key/value text format:
 * one `key=value` per line, records separated by a blank line. Strings
 * returned through `char**` out-parameters are owned by the caller and must
 * be released with pasa_string_free().
 */
#ifndef PASA_H
#define PASA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define PASA_API __declspec(dllexport)
#else
#define PASA_API __attribute__((visibility("default")))
#endif

typedef enum pasa_status {
  PASA_OK = 0,
  PASA_ERR_VALIDATION = 1,
  PASA_ERR_STATE = 2,
  PASA_ERR_NOT_FOUND = 3,
  PASA_ERR_AUTHORIZATION = 4,
  PASA_ERR_SSRF = 5,
  PASA_ERR_IO = 6,
  PASA_ERR_INTERNAL = 7
} pasa_status;

typedef struct pasa_engine pasa_engine;
typedef struct pasa_server pasa_server;

PASA_API const char* pasa_version(void);
PASA_API const char* pasa_status_name(pasa_status status);

/* Human-readable detail for the most recent failing call on this thread. */
PASA_API const char* pasa_last_error(void);

PASA_API void pasa_string_free(char* s);

/* config_text: canonical key/value config (may be empty for defaults).
 * Recognized keys: embedding_dim, home_jurisdiction, hnsw.m,
 * hnsw.ef_construction, hnsw.ef_search, log_path, index_snapshot_path,
 * admin_token, allow_private_webhooks, webhook.max_attempts,
 * webhook.base_delay_ms, webhook.request_timeout_ms, listen_address.
 * When log_path names an existing log the engine recovers its state from it. */
PASA_API pasa_status pasa_engine_open(const char* config_text, pasa_engine** out_engine);
PASA_API void pasa_engine_close(pasa_engine* engine);

/* agent_record fields: agent_id, handling_level, purpose, training_use,
 * jurisdiction. Re-registering an agent_id updates the profile. */
PASA_API pasa_status pasa_register_agent(pasa_engine* engine, const char* agent_record,
                                         char** out_agent_id);

/* chunk_record fields: embedding (comma-separated reals; normalized on
 * ingest), content, contributor_id, optional chunk_id, optional policy.*
 * fields (missing ones take assume-worst defaults). The chunk enters the
 * lifecycle as proposed. */
PASA_API pasa_status pasa_submit_chunk(pasa_engine* engine, const char* chunk_record,
                                       char** out_chunk_id);

/* new_status: "active" or "superseded". */
PASA_API pasa_status pasa_transition_chunk(pasa_engine* engine, const char* chunk_id,
                                           const char* new_status);

/* Policy-checked read: a chunk the caller is not authorized for is
 * indistinguishable from a missing one (PASA_ERR_NOT_FOUND either way). */
PASA_API pasa_status pasa_get_chunk(pasa_engine* engine, const char* caller_agent_id,
                                    const char* chunk_id, char** out_chunk_record);

/* subscription_record fields: agent_id, query_embedding, similarity_threshold,
 * optional trigger_status (active|proposed|both), optional method
 * (polling_queue|webhook), webhook_url when method=webhook, optional
 * requested_max_sensitivity (rejected with PASA_ERR_AUTHORIZATION when above
 * the agent's declared handling level). */
PASA_API pasa_status pasa_create_subscription(pasa_engine* engine,
                                              const char* subscription_record,
                                              char** out_subscription_id);
PASA_API pasa_status pasa_deactivate_subscription(pasa_engine* engine,
                                                  const char* subscription_id,
                                                  const char* caller_agent_id);

/* Returns a record stream: first record `count=N`, then one record per
 * notification, oldest first, sequence > since_sequence, at most limit. */
PASA_API pasa_status pasa_poll_notifications(pasa_engine* engine, const char* agent_id,
                                             uint64_t since_sequence, uint32_t limit,
                                             int include_acked, char** out_records);

/* ids_csv: comma-separated notification ids, all owned by agent_id. */
PASA_API pasa_status pasa_ack_notifications(pasa_engine* engine, const char* agent_id,
                                            const char* ids_csv, uint32_t* out_acked);

/* Executes due webhook delivery attempts (retry/backoff schedule). */
PASA_API pasa_status pasa_pump_deliveries(pasa_engine* engine, uint32_t* out_attempts);

PASA_API pasa_status pasa_engine_stats(pasa_engine* engine, char** out_record);

/* HTTP service over the engine (see README for endpoints). listen_address
 * overrides the config value when non-NULL, e.g. "127.0.0.1:8787". */
PASA_API pasa_status pasa_server_start(pasa_engine* engine, const char* config_text,
                                       const char* listen_address, pasa_server** out_server);
PASA_API int pasa_server_port(pasa_server* server);
PASA_API pasa_status pasa_server_wait(pasa_server* server);
PASA_API pasa_status pasa_server_stop(pasa_server* server);

/* PASA benchmark runner.
 * experiment: gen | compliance | ablation | curation | scalability |
 *             adversarial | all
 * config_text: scenario config overrides (seed, n_chunks, ...), may be empty.
 * format: "table-text" or "machine-readable".
 * out_dir: report directory, created if missing.
 * out_summary (optional): the rendered table-text summary.
 * out_identities_pass (optional): 1 when every acceptance identity held. */
PASA_API pasa_status pasa_bench_run(const char* config_text, const char* experiment,
                                    const char* out_dir, const char* format, char** out_summary,
                                    int* out_identities_pass);

#ifdef __cplusplus
}
#endif

#endif /* PASA_H */
