// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hnsw_index.hpp"
#include "lifecycle.hpp"
#include "policy.hpp"
#include "stores.hpp"

namespace pasa {

struct MatchOptions {
  // Bench hooks: governed runs use all five dimensions; the ungoverned
  // baseline uses none; ablation uses subsets.
  DimensionSet enabled_dims = DimensionSet::all();
};

struct MatchOutcome {
  std::vector<Notification> notifications;  // ids/sequences not yet assigned
  std::vector<std::string> warnings;        // dangling references, skipped candidates
};

// One pass per chunk event: index query, trigger routing, policy filter,
// idempotence. Emission ids and persistence belong to the engine.
class Matcher {
 public:
  // created events consider trigger_status in {proposed, both}; activated
  // events {active, both}; superseded events match nothing. The same
  // (chunk, subscription, trigger) never yields two notifications.
  MatchOutcome process_event(const ChunkEvent& event, const ChunkStore& chunks,
                             const SubscriptionStore& subs, const AgentRegistry& agents,
                             const HnswIndex& index, const MatchOptions& options);

  bool already_emitted(const std::string& chunk_id, const std::string& subscription_id,
                       NotificationTrigger trigger) const;
  void mark_emitted(const std::string& chunk_id, const std::string& subscription_id,
                    NotificationTrigger trigger);

  size_t emitted_count() const { return emitted_.size(); }

 private:
  std::unordered_set<std::string> emitted_;  // "chunk|sub|trigger"
};

// ---- Brute-force oracle -----------------------------------------------------

enum class OracleMode { governed, ungoverned };

struct OracleKey {
  std::string chunk_id;
  std::string subscription_id;
  NotificationTrigger trigger = NotificationTrigger::active;

  auto operator<=>(const OracleKey&) const = default;
};

// Nested-loop evaluation over final snapshots, no index involved. Every chunk
// was once proposed, so each contributes a created trigger; chunks with
// activated_at contribute an activated trigger as well. governed applies the
// enabled policy dimensions; ungoverned skips policy entirely. Inactive
// subscriptions never match.
std::set<OracleKey> oracle_notifications(const std::vector<Chunk>& chunks,
                                         const std::vector<Subscription>& subscriptions,
                                         const std::unordered_map<std::string, AgentProfile>& agents,
                                         OracleMode mode,
                                         DimensionSet enabled_dims = DimensionSet::all());

// Bench-only curation-off baseline: chunks in status {proposed, active} are
// matched against active-trigger subscriptions regardless of status (policy
// still applies). The trigger in each key records the chunk's status, which
// is what "from proposed" counts in the curation experiment.
std::set<OracleKey> oracle_without_curation(const std::vector<Chunk>& chunks,
                                            const std::vector<Subscription>& subscriptions,
                                            const std::unordered_map<std::string, AgentProfile>& agents,
                                            DimensionSet enabled_dims = DimensionSet::all());

std::set<OracleKey> notification_keys(const std::vector<Notification>& notifications);

// ---- Metrics ----------------------------------------------------------------

struct MetricsReport {
  uint64_t actual_total = 0;
  uint64_t violations = 0;           // actual notifications failing >=1 policy dimension
  uint64_t authorized_delivered = 0; // |actual ∩ oracle_governed|
  uint64_t oracle_governed_total = 0;
  uint64_t oracle_ungoverned_total = 0;
  double compliance_rate = 1.0;      // 1 - violations / actual (1.0 when actual empty)
  double recall = 1.0;               // authorized_delivered / oracle (1.0 when oracle empty)

  Record to_record(const std::string& prefix) const;
};

MetricsReport compute_metrics(const std::vector<Notification>& actual,
                              const std::set<OracleKey>& oracle_governed,
                              const std::set<OracleKey>& oracle_ungoverned,
                              const std::unordered_map<std::string, Chunk>& chunks,
                              const std::unordered_map<std::string, AgentProfile>& agents);

}  // namespace pasa
