// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "dispatch.hpp"
#include "event_log.hpp"
#include "hnsw_index.hpp"
#include "lifecycle.hpp"
#include "matcher.hpp"
#include "stores.hpp"

namespace pasa {

struct SubmitChunkRequest {
  std::string chunk_id;  // empty: engine assigns one
  std::string content;
  std::string contributor_id;
  std::vector<double> embedding;  // raw; normalized on ingest
  RawPolicy policy;               // partial; assume-worst normalized
};

struct CreateSubscriptionRequest {
  std::string agent_id;
  std::vector<double> query_embedding;  // raw; normalized on ingest
  double similarity_threshold = 0.7;
  TriggerStatus trigger_status = TriggerStatus::active;
  NotificationMethod method = NotificationMethod::polling_queue;
  std::string webhook_url;
  std::optional<int> requested_max_sensitivity;  // escalation check at creation
};

// The embeddable core: registries, chunk lifecycle, subscription index,
// matching, notification storage, dispatch, and append-log persistence.
//
// All mutations funnel through a single writer lock; log append order is the
// source of truth. Reads take a shared lock and see either the pre- or
// post-write state, never a torn one.
class Engine {
 public:
  static std::unique_ptr<Engine> open(EngineConfig config, Clock* clock = nullptr);
  ~Engine();

  // --- agents ---
  std::string register_agent(const AgentProfile& profile);
  AgentProfile get_agent(const std::string& agent_id) const;

  // --- chunks ---
  std::string submit_chunk(const SubmitChunkRequest& request);
  void transition_chunk(const std::string& chunk_id, ChunkStatus to);
  // Read with policy enforcement: a chunk the caller's profile fails on is
  // indistinguishable from a missing one (NotFoundError either way).
  Chunk get_chunk(const std::string& caller_agent_id, const std::string& chunk_id) const;

  // --- subscriptions ---
  std::string create_subscription(const CreateSubscriptionRequest& request);
  // Empty caller means a trusted embedder; otherwise the caller must own the
  // subscription.
  void deactivate_subscription(const std::string& subscription_id,
                               const std::string& caller_agent_id = "");
  Subscription get_subscription(const std::string& subscription_id) const;

  // --- notifications ---
  std::vector<Notification> poll_notifications(const std::string& agent_id,
                                               uint64_t since_sequence, size_t limit,
                                               bool include_acked = false) const;
  uint32_t ack_notifications(const std::string& agent_id, std::span<const std::string> ids);

  // Executes due webhook attempts; returns the number of attempts made.
  size_t pump_deliveries();
  int64_t next_delivery_due_us() const;
  std::vector<DeliveryAttempt> delivery_attempts(const std::string& notification_id) const;

  // --- introspection ---
  std::vector<Notification> notifications_snapshot() const;
  std::vector<Chunk> chunks_snapshot() const;
  std::vector<Subscription> subscriptions_snapshot() const;
  std::unordered_map<std::string, AgentProfile> agents_snapshot() const;
  std::vector<std::string> index_live_ids() const;
  std::vector<std::string> integrity_warnings() const;
  Record stats() const;
  std::string state_digest() const;
  const EngineConfig& config() const { return config_; }
  bool recovered_from_truncated_log() const { return recovery_truncated_; }
  std::string recovery_detail() const { return recovery_detail_; }

  void save_index_snapshot() const;  // no-op without index_snapshot_path

 private:
  Engine(EngineConfig config, Clock* clock);
  void recover();
  void apply_log_record(const LogRecord& record, bool log_writable);
  std::vector<Notification> run_matching(const ChunkEvent& event);
  void emit_notification(Notification n, bool log_it);
  bool recheck_notification(const Notification& n) const;
  std::string webhook_secret_for(const std::string& subscription_id) const;
  void log_append(LogRecordType type, const Record& payload);
  std::string next_chunk_id();
  std::string next_subscription_id();
  std::string next_notification_id();

  EngineConfig config_;
  Clock* clock_;
  std::unique_ptr<EventLog> log_;

  mutable std::shared_mutex mutex_;
  AgentRegistry agents_;
  ChunkStore chunks_;
  SubscriptionStore subscriptions_;
  NotificationStore notifications_;
  Matcher matcher_;
  std::unique_ptr<HnswIndex> index_;
  std::unique_ptr<Dispatcher> dispatcher_;
  std::vector<std::string> warnings_;

  uint64_t chunk_counter_ = 0;
  uint64_t subscription_counter_ = 0;
  uint64_t notification_counter_ = 0;
  bool recovery_truncated_ = false;
  std::string recovery_detail_;
};

}  // namespace pasa
