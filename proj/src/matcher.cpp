// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "matcher.hpp"

#include "errors.hpp"

namespace pasa {

namespace {

std::string emitted_key(const std::string& chunk_id, const std::string& subscription_id,
                        NotificationTrigger trigger) {
  return chunk_id + "|" + subscription_id + "|" + to_string(trigger);
}

bool trigger_accepts(TriggerStatus trigger_status, NotificationTrigger trigger) {
  if (trigger_status == TriggerStatus::both) return true;
  if (trigger == NotificationTrigger::proposed) return trigger_status == TriggerStatus::proposed;
  return trigger_status == TriggerStatus::active;
}

}  // namespace

MatchOutcome Matcher::process_event(const ChunkEvent& event, const ChunkStore& chunks,
                                    const SubscriptionStore& subs, const AgentRegistry& agents,
                                    const HnswIndex& index, const MatchOptions& options) {
  MatchOutcome outcome;
  if (event.type == ChunkEvent::Type::superseded) return outcome;

  NotificationTrigger trigger = event.type == ChunkEvent::Type::created
                                    ? NotificationTrigger::proposed
                                    : NotificationTrigger::active;
  const Chunk& chunk = chunks.get(event.chunk_id);

  for (const MatchCandidate& candidate : index.match(chunk.embedding)) {
    const Subscription* sub = subs.find(candidate.subscription_id);
    if (!sub || !sub->active) continue;
    if (!trigger_accepts(sub->trigger_status, trigger)) continue;
    if (already_emitted(chunk.chunk_id, sub->subscription_id, trigger)) continue;

    const AgentProfile* agent = agents.find(sub->agent_id);
    if (!agent) {
      outcome.warnings.push_back("subscription " + sub->subscription_id +
                                 " references unknown agent " + sub->agent_id +
                                 "; candidate skipped");
      continue;
    }
    if (!evaluate_dimension_subset(*agent, chunk.policy, options.enabled_dims).overall) continue;

    // Emission-time soundness recheck against the full predicate, modulo the
    // configured dimension subset. Failure here is an engine bug, not input error.
    double exact = round_similarity(cosine_similarity(chunk.embedding, sub->query_embedding));
    bool sound = meets_threshold(exact, sub->similarity_threshold) &&
                 curation_matches(chunk.status, sub->trigger_status) &&
                 evaluate_dimension_subset(*agent, chunk.policy, options.enabled_dims).overall;
    if (!sound) {
      throw InternalError("soundness recheck failed for chunk " + chunk.chunk_id +
                          ", subscription " + sub->subscription_id);
    }

    Notification n;
    n.chunk_id = chunk.chunk_id;
    n.subscription_id = sub->subscription_id;
    n.agent_id = sub->agent_id;
    n.similarity = candidate.similarity;
    n.trigger = trigger;
    n.created_at_us = event.timestamp_us;
    n.method = sub->method;
    n.delivery_state = DeliveryState::pending;
    outcome.notifications.push_back(std::move(n));
    mark_emitted(chunk.chunk_id, sub->subscription_id, trigger);
  }
  return outcome;
}

bool Matcher::already_emitted(const std::string& chunk_id, const std::string& subscription_id,
                              NotificationTrigger trigger) const {
  return emitted_.count(emitted_key(chunk_id, subscription_id, trigger)) > 0;
}

void Matcher::mark_emitted(const std::string& chunk_id, const std::string& subscription_id,
                           NotificationTrigger trigger) {
  emitted_.insert(emitted_key(chunk_id, subscription_id, trigger));
}

std::set<OracleKey> oracle_notifications(
    const std::vector<Chunk>& chunks, const std::vector<Subscription>& subscriptions,
    const std::unordered_map<std::string, AgentProfile>& agents, OracleMode mode,
    DimensionSet enabled_dims) {
  std::set<OracleKey> out;
  for (const Chunk& chunk : chunks) {
    for (const Subscription& sub : subscriptions) {
      if (!sub.active) continue;
      auto agent_it = agents.find(sub.agent_id);
      if (agent_it == agents.end()) continue;

      double sim = round_similarity(cosine_similarity(chunk.embedding, sub.query_embedding));
      if (!meets_threshold(sim, sub.similarity_threshold)) continue;
      if (mode == OracleMode::governed &&
          !evaluate_dimension_subset(agent_it->second, chunk.policy, enabled_dims).overall) {
        continue;
      }

      // created fired for every chunk; activated fired iff the chunk was ever active.
      if (trigger_accepts(sub.trigger_status, NotificationTrigger::proposed)) {
        out.insert(OracleKey{chunk.chunk_id, sub.subscription_id, NotificationTrigger::proposed});
      }
      if (chunk.activated_at_us &&
          trigger_accepts(sub.trigger_status, NotificationTrigger::active)) {
        out.insert(OracleKey{chunk.chunk_id, sub.subscription_id, NotificationTrigger::active});
      }
    }
  }
  return out;
}

std::set<OracleKey> oracle_without_curation(
    const std::vector<Chunk>& chunks, const std::vector<Subscription>& subscriptions,
    const std::unordered_map<std::string, AgentProfile>& agents, DimensionSet enabled_dims) {
  std::set<OracleKey> out;
  for (const Chunk& chunk : chunks) {
    if (chunk.status == ChunkStatus::superseded) continue;
    NotificationTrigger source = chunk.status == ChunkStatus::proposed
                                     ? NotificationTrigger::proposed
                                     : NotificationTrigger::active;
    for (const Subscription& sub : subscriptions) {
      if (!sub.active) continue;
      if (!trigger_accepts(sub.trigger_status, NotificationTrigger::active)) continue;
      auto agent_it = agents.find(sub.agent_id);
      if (agent_it == agents.end()) continue;
      double sim = round_similarity(cosine_similarity(chunk.embedding, sub.query_embedding));
      if (!meets_threshold(sim, sub.similarity_threshold)) continue;
      if (!evaluate_dimension_subset(agent_it->second, chunk.policy, enabled_dims).overall) {
        continue;
      }
      out.insert(OracleKey{chunk.chunk_id, sub.subscription_id, source});
    }
  }
  return out;
}

std::set<OracleKey> notification_keys(const std::vector<Notification>& notifications) {
  std::set<OracleKey> out;
  for (const Notification& n : notifications) {
    out.insert(OracleKey{n.chunk_id, n.subscription_id, n.trigger});
  }
  return out;
}

Record MetricsReport::to_record(const std::string& prefix) const {
  Record r;
  r.put_uint(prefix + "notifications", actual_total);
  r.put_uint(prefix + "violations", violations);
  r.put_uint(prefix + "authorized_delivered", authorized_delivered);
  r.put_uint(prefix + "oracle_governed", oracle_governed_total);
  r.put_uint(prefix + "oracle_ungoverned", oracle_ungoverned_total);
  r.put_double(prefix + "compliance_rate", compliance_rate);
  r.put_double(prefix + "recall", recall);
  return r;
}

MetricsReport compute_metrics(const std::vector<Notification>& actual,
                              const std::set<OracleKey>& oracle_governed,
                              const std::set<OracleKey>& oracle_ungoverned,
                              const std::unordered_map<std::string, Chunk>& chunks,
                              const std::unordered_map<std::string, AgentProfile>& agents) {
  MetricsReport m;
  m.actual_total = actual.size();
  m.oracle_governed_total = oracle_governed.size();
  m.oracle_ungoverned_total = oracle_ungoverned.size();

  for (const Notification& n : actual) {
    auto chunk_it = chunks.find(n.chunk_id);
    auto agent_it = agents.find(n.agent_id);
    if (chunk_it == chunks.end()) throw NotFoundError("unknown chunk: " + n.chunk_id);
    if (agent_it == agents.end()) throw NotFoundError("unknown agent: " + n.agent_id);
    const Chunk& chunk = chunk_it->second;
    const AgentProfile& agent = agent_it->second;
    if (!evaluate_policy(agent, chunk.policy).overall) ++m.violations;
    if (oracle_governed.count(OracleKey{n.chunk_id, n.subscription_id, n.trigger})) {
      ++m.authorized_delivered;
    }
  }
  m.compliance_rate =
      m.actual_total == 0 ? 1.0 : 1.0 - double(m.violations) / double(m.actual_total);
  m.recall = m.oracle_governed_total == 0
                 ? 1.0
                 : double(m.authorized_delivered) / double(m.oracle_governed_total);
  return m;
}

}  // namespace pasa
