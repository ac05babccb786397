// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "engine.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "digest.hpp"
#include "errors.hpp"

namespace pasa {

namespace {

std::string format_counter_id(const char* prefix, uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*llu", width, static_cast<unsigned long long>(value));
  return std::string(prefix) + buf;
}

}  // namespace

Engine::Engine(EngineConfig config, Clock* clock)
    : config_(std::move(config)), clock_(clock ? clock : &SystemClock::instance()) {
  SsrfPolicy ssrf;
  ssrf.allow_private = config_.allow_private_webhooks;
  ssrf.resolver = config_.resolver;
  dispatcher_ = std::make_unique<Dispatcher>(*clock_, ssrf, config_.webhook_retry);
  index_ = std::make_unique<HnswIndex>(config_.embedding_dim, config_.hnsw);
}

std::unique_ptr<Engine> Engine::open(EngineConfig config, Clock* clock) {
  auto engine = std::unique_ptr<Engine>(new Engine(std::move(config), clock));
  if (!engine->config_.log_path.empty()) {
    engine->recover();
  }
  return engine;
}

Engine::~Engine() {
  if (!config_.index_snapshot_path.empty()) {
    try {
      save_index_snapshot();
    } catch (const std::exception&) {
      // Snapshot is a cache; losing it only costs a rebuild.
    }
  }
}

void Engine::save_index_snapshot() const {
  if (config_.index_snapshot_path.empty()) return;
  std::shared_lock lock(mutex_);
  index_->save_snapshot(config_.index_snapshot_path);
}

void Engine::log_append(LogRecordType type, const Record& payload) {
  if (log_) log_->append(type, payload.encode());
}

std::string Engine::next_chunk_id() {
  std::string id;
  do {
    id = format_counter_id("ck-", ++chunk_counter_, 8);
  } while (chunks_.find(id) != nullptr);
  return id;
}

std::string Engine::next_subscription_id() {
  std::string id;
  do {
    id = format_counter_id("sub-", ++subscription_counter_, 6);
  } while (subscriptions_.find(id) != nullptr);
  return id;
}

std::string Engine::next_notification_id() {
  return format_counter_id("ntf-", notification_counter_, 8);
}

std::string Engine::webhook_secret_for(const std::string& subscription_id) const {
  // Deterministic derivation keeps secrets recoverable from config + id; they
  // are also persisted in the subscription_create log record.
  return sha256_hex(config_.admin_token + "|whsec|" + subscription_id);
}

// ---- agents -----------------------------------------------------------------

std::string Engine::register_agent(const AgentProfile& profile) {
  validate(profile);
  std::unique_lock lock(mutex_);
  log_append(LogRecordType::agent_upsert, to_record(profile));
  agents_.upsert(profile);
  return profile.agent_id;
}

AgentProfile Engine::get_agent(const std::string& agent_id) const {
  std::shared_lock lock(mutex_);
  return agents_.get(agent_id);
}

// ---- chunks -----------------------------------------------------------------

std::string Engine::submit_chunk(const SubmitChunkRequest& request) {
  Embedding embedding = Embedding::unit(request.embedding);
  if (embedding.dim() != config_.embedding_dim) {
    throw ValidationError("embedding dimension " + std::to_string(embedding.dim()) +
                          " does not match configured dimension " +
                          std::to_string(config_.embedding_dim));
  }

  std::unique_lock lock(mutex_);
  // Assume-worst default jurisdiction: the contributor's when known, else home.
  std::string default_jurisdiction = config_.home_jurisdiction;
  if (const AgentProfile* contributor = agents_.find(request.contributor_id)) {
    default_jurisdiction = contributor->jurisdiction;
  }

  Chunk chunk;
  chunk.chunk_id = request.chunk_id.empty() ? next_chunk_id() : request.chunk_id;
  chunk.embedding = std::move(embedding);
  chunk.status = ChunkStatus::proposed;
  chunk.policy = normalize_policy(request.policy, default_jurisdiction);
  chunk.contributor_id = request.contributor_id;
  chunk.content = request.content;
  chunk.created_at_us = clock_->now_us();

  if (chunks_.find(chunk.chunk_id)) {
    throw StateError("duplicate chunk_id: " + chunk.chunk_id);
  }

  Record payload = to_record(chunk);
  payload.put_uint("event_sequence", chunks_.last_event_sequence() + 1);
  log_append(LogRecordType::chunk_create, payload);

  ChunkEvent event = chunks_.create(std::move(chunk), config_.embedding_dim);
  std::string chunk_id = event.chunk_id;
  run_matching(event);
  return chunk_id;
}

void Engine::transition_chunk(const std::string& chunk_id, ChunkStatus to) {
  std::unique_lock lock(mutex_);
  const Chunk& existing = chunks_.get(chunk_id);
  bool legal = (existing.status == ChunkStatus::proposed && to == ChunkStatus::active) ||
               (existing.status == ChunkStatus::proposed && to == ChunkStatus::superseded) ||
               (existing.status == ChunkStatus::active && to == ChunkStatus::superseded);
  if (!legal) {
    throw StateError(std::string("illegal transition ") + to_string(existing.status) + " -> " +
                     to_string(to) + " for chunk " + chunk_id);
  }

  int64_t now = clock_->now_us();
  Record payload;
  payload.put("chunk_id", chunk_id);
  payload.put("to_status", to_string(to));
  payload.put_int("timestamp_us", now);
  payload.put_uint("event_sequence", chunks_.last_event_sequence() + 1);
  log_append(LogRecordType::chunk_transition, payload);

  ChunkEvent event = chunks_.transition(chunk_id, to, now);
  run_matching(event);
}

Chunk Engine::get_chunk(const std::string& caller_agent_id, const std::string& chunk_id) const {
  std::shared_lock lock(mutex_);
  const AgentProfile* agent = agents_.find(caller_agent_id);
  if (!agent) throw NotFoundError("unknown agent: " + caller_agent_id);
  const Chunk* chunk = chunks_.find(chunk_id);
  // Denied reads are indistinguishable from missing chunks: same error, same
  // message, no policy detail.
  if (!chunk || !evaluate_policy(*agent, chunk->policy).overall) {
    throw NotFoundError("chunk not found: " + chunk_id);
  }
  return *chunk;
}

// ---- subscriptions ----------------------------------------------------------

std::string Engine::create_subscription(const CreateSubscriptionRequest& request) {
  if (request.similarity_threshold < 0.0 || request.similarity_threshold > 1.0) {
    throw ValidationError("similarity_threshold must be in [0, 1], got " +
                          format_double(request.similarity_threshold));
  }
  Embedding query = Embedding::unit(request.query_embedding);
  if (query.dim() != config_.embedding_dim) {
    throw ValidationError("query dimension " + std::to_string(query.dim()) +
                          " does not match configured dimension " +
                          std::to_string(config_.embedding_dim));
  }

  std::unique_lock lock(mutex_);
  const AgentProfile& agent = [&]() -> const AgentProfile& {
    const AgentProfile* a = agents_.find(request.agent_id);
    if (!a) throw ValidationError("agent not registered: " + request.agent_id);
    return *a;
  }();

  if (request.requested_max_sensitivity) {
    int requested = *request.requested_max_sensitivity;
    if (requested < 1 || requested > 5) {
      throw ValidationError("requested_max_sensitivity must be in [1, 5], got " +
                            std::to_string(requested));
    }
    // Escalation: asking to subscribe above the declared handling level is
    // rejected at creation time and never reaches the index.
    if (requested > agent.handling_level) {
      throw AuthorizationError("requested_max_sensitivity " + std::to_string(requested) +
                               " exceeds declared handling level " +
                               std::to_string(agent.handling_level));
    }
  }

  Subscription sub;
  sub.subscription_id = next_subscription_id();
  sub.agent_id = request.agent_id;
  sub.query_embedding = std::move(query);
  sub.similarity_threshold = request.similarity_threshold;
  sub.trigger_status = request.trigger_status;
  sub.active = true;
  sub.method = request.method;
  if (request.method == NotificationMethod::webhook) {
    SsrfPolicy ssrf;
    ssrf.allow_private = config_.allow_private_webhooks;
    ssrf.resolver = config_.resolver;
    validate_webhook_url(request.webhook_url, ssrf);
    sub.webhook_url = request.webhook_url;
    sub.webhook_secret = webhook_secret_for(sub.subscription_id);
  }

  log_append(LogRecordType::subscription_create, to_record(sub));
  std::string id = sub.subscription_id;
  index_->insert(id, sub.query_embedding, sub.similarity_threshold);
  subscriptions_.insert(std::move(sub));
  return id;
}

void Engine::deactivate_subscription(const std::string& subscription_id,
                                     const std::string& caller_agent_id) {
  std::unique_lock lock(mutex_);
  const Subscription& sub = subscriptions_.get(subscription_id);
  if (!caller_agent_id.empty() && sub.agent_id != caller_agent_id) {
    throw AuthorizationError("subscription " + subscription_id + " is not owned by " +
                             caller_agent_id);
  }
  if (!sub.active) throw StateError("subscription already inactive: " + subscription_id);

  Record payload;
  payload.put("subscription_id", subscription_id);
  log_append(LogRecordType::subscription_deactivate, payload);
  subscriptions_.deactivate(subscription_id);
  index_->remove(subscription_id);
}

Subscription Engine::get_subscription(const std::string& subscription_id) const {
  std::shared_lock lock(mutex_);
  return subscriptions_.get(subscription_id);
}

// ---- matching ---------------------------------------------------------------

std::vector<Notification> Engine::run_matching(const ChunkEvent& event) {
  MatchOutcome outcome =
      matcher_.process_event(event, chunks_, subscriptions_, agents_, *index_, config_.matching);
  for (const std::string& w : outcome.warnings) warnings_.push_back(w);

  std::vector<Notification> emitted;
  emitted.reserve(outcome.notifications.size());
  for (Notification& n : outcome.notifications) {
    n.sequence = ++notification_counter_;
    n.notification_id = next_notification_id();
    if (n.method == NotificationMethod::polling_queue) {
      // Queue append is the delivery: visible to poll immediately.
      n.delivery_state = DeliveryState::delivered;
    }
    emit_notification(n, /*log_it=*/true);
    emitted.push_back(std::move(n));
  }
  return emitted;
}

void Engine::emit_notification(Notification n, bool log_it) {
  if (log_it) log_append(LogRecordType::notification_emit, to_record(n));
  if (n.method == NotificationMethod::webhook && n.delivery_state == DeliveryState::pending) {
    const Subscription* sub = subscriptions_.find(n.subscription_id);
    if (sub) {
      int attempts_done = int(dispatcher_->history(n.notification_id).size());
      dispatcher_->enqueue(n, sub->webhook_url, sub->webhook_secret, to_record(n).encode(),
                           attempts_done);
    }
  }
  notifications_.insert(std::move(n));
}

// ---- notifications ----------------------------------------------------------

std::vector<Notification> Engine::poll_notifications(const std::string& agent_id,
                                                     uint64_t since_sequence, size_t limit,
                                                     bool include_acked) const {
  std::shared_lock lock(mutex_);
  if (!agents_.find(agent_id)) throw NotFoundError("unknown agent: " + agent_id);
  return notifications_.poll(agent_id, since_sequence, limit, include_acked);
}

uint32_t Engine::ack_notifications(const std::string& agent_id,
                                   std::span<const std::string> ids) {
  std::unique_lock lock(mutex_);
  // Validate ownership of the whole batch first; foreign and unknown ids are
  // indistinguishable to the caller.
  for (const std::string& id : ids) {
    const Notification* n = notifications_.find(id);
    if (!n || n->agent_id != agent_id) {
      throw AuthorizationError("notification " + id + " does not belong to " + agent_id);
    }
  }
  uint32_t acked = 0;
  for (const std::string& id : ids) {
    const Notification* n = notifications_.find(id);
    if (n->delivery_state == DeliveryState::acked) continue;  // repeat ack is a no-op
    Record payload;
    payload.put("notification_id", id);
    payload.put("delivery_state", to_string(DeliveryState::acked));
    payload.put_int("timestamp_us", clock_->now_us());
    log_append(LogRecordType::delivery_update, payload);
    notifications_.set_delivery_state(id, DeliveryState::acked);
    ++acked;
  }
  return acked;
}

bool Engine::recheck_notification(const Notification& n) const {
  std::shared_lock lock(mutex_);
  const Subscription* sub = subscriptions_.find(n.subscription_id);
  if (!sub || !sub->active) return false;
  const AgentProfile* agent = agents_.find(n.agent_id);
  if (!agent) return false;
  const Chunk* chunk = chunks_.find(n.chunk_id);
  if (!chunk) return false;
  double sim = round_similarity(cosine_similarity(chunk->embedding, sub->query_embedding));
  if (!meets_threshold(sim, sub->similarity_threshold)) return false;
  if (!evaluate_dimension_subset(*agent, chunk->policy, config_.matching.enabled_dims).overall) {
    return false;
  }
  return curation_matches(chunk->status, sub->trigger_status);
}

size_t Engine::pump_deliveries() {
  return dispatcher_->pump(
      [this](const Notification& n) { return recheck_notification(n); },
      [this](const std::string& notification_id, DeliveryState state,
             const DeliveryAttempt& attempt) {
        std::unique_lock lock(mutex_);
        Record payload;
        payload.put("notification_id", notification_id);
        payload.put("delivery_state", to_string(state));
        payload.put_int("attempt_number", attempt.attempt_number);
        payload.put("outcome", to_string(attempt.outcome));
        payload.put("detail", attempt.detail);
        payload.put_int("timestamp_us", attempt.timestamp_us);
        log_append(LogRecordType::delivery_update, payload);
        notifications_.set_delivery_state(notification_id, state);
      });
}

int64_t Engine::next_delivery_due_us() const { return dispatcher_->next_due_us(); }

std::vector<DeliveryAttempt> Engine::delivery_attempts(
    const std::string& notification_id) const {
  return dispatcher_->history(notification_id);
}

// ---- recovery ---------------------------------------------------------------

void Engine::recover() {
  EventLog::ReadResult read = EventLog::read(config_.log_path);
  recovery_truncated_ = read.truncated;
  recovery_detail_ = read.truncation_detail;
  log_ = EventLog::open(config_.log_path);  // cuts any corrupt tail

  // Index snapshot is a cache: load it if compatible, fall back to rebuild.
  if (!config_.index_snapshot_path.empty() &&
      std::filesystem::exists(config_.index_snapshot_path)) {
    try {
      auto loaded = HnswIndex::load_snapshot(config_.index_snapshot_path);
      if (loaded->dim() == config_.embedding_dim && loaded->params() == config_.hnsw) {
        index_ = std::move(loaded);
      }
    } catch (const std::exception&) {
      // unusable snapshot: rebuilt from the log below
    }
  }

  // Replay is grouped: a chunk event record, then its contiguous
  // notification_emit block, then matching. Matching after the block means
  // idempotence suppresses everything already logged; anything the pre-crash
  // run matched but never durably emitted is re-derived here, which can only
  // happen at the log tail.
  size_t i = 0;
  const auto& records = read.records;
  while (i < records.size()) {
    const LogRecord& rec = records[i];
    if (rec.type == LogRecordType::chunk_create || rec.type == LogRecordType::chunk_transition) {
      ChunkEvent event;
      uint64_t logged_sequence;
      if (rec.type == LogRecordType::chunk_create) {
        Record payload = Record::parse(rec.payload);
        logged_sequence = payload.get_uint("event_sequence");
        Chunk chunk = chunk_from_record(payload);
        chunk.status = ChunkStatus::proposed;
        chunk.activated_at_us.reset();
        event = chunks_.create(std::move(chunk), config_.embedding_dim);
      } else {
        Record payload = Record::parse(rec.payload);
        logged_sequence = payload.get_uint("event_sequence");
        event = chunks_.transition(payload.get("chunk_id"),
                                   chunk_status_from_string(payload.get("to_status")),
                                   payload.get_int("timestamp_us"));
      }
      if (event.sequence != logged_sequence) {
        throw InternalError("replayed event sequence " + std::to_string(event.sequence) +
                            " diverges from logged sequence " +
                            std::to_string(logged_sequence));
      }
      ++i;
      while (i < records.size() && records[i].type == LogRecordType::notification_emit) {
        apply_log_record(records[i], true);
        ++i;
      }
      run_matching(event);
    } else {
      apply_log_record(rec, true);
      ++i;
    }
  }

  // Verify the (possibly snapshot-seeded) index against the replayed store;
  // rebuild when they disagree.
  {
    auto live = index_->live_ids();
    std::set<std::string> index_ids(live.begin(), live.end());
    std::set<std::string> store_ids;
    for (const auto& sub : subscriptions_.snapshot()) {
      if (sub.active) store_ids.insert(sub.subscription_id);
    }
    if (index_ids != store_ids) {
      index_ = std::make_unique<HnswIndex>(config_.embedding_dim, config_.hnsw);
      for (const auto& sub : subscriptions_.snapshot()) {
        if (sub.active) {
          index_->insert(sub.subscription_id, sub.query_embedding, sub.similarity_threshold);
        }
      }
    }
  }
}

void Engine::apply_log_record(const LogRecord& record, bool) {
  Record payload = Record::parse(record.payload);
  switch (record.type) {
    case LogRecordType::agent_upsert: {
      agents_.upsert(agent_from_record(payload));
      break;
    }
    case LogRecordType::subscription_create: {
      Subscription sub = subscription_from_record(payload);
      ++subscription_counter_;
      if (!index_->contains(sub.subscription_id)) {
        index_->insert(sub.subscription_id, sub.query_embedding, sub.similarity_threshold);
      }
      subscriptions_.insert(std::move(sub));
      break;
    }
    case LogRecordType::subscription_deactivate: {
      std::string id = payload.get("subscription_id");
      subscriptions_.deactivate(id);
      if (index_->contains(id)) index_->remove(id);
      break;
    }
    case LogRecordType::notification_emit: {
      Notification n = notification_from_record(payload);
      if (n.sequence > notification_counter_) notification_counter_ = n.sequence;
      matcher_.mark_emitted(n.chunk_id, n.subscription_id, n.trigger);
      emit_notification(std::move(n), /*log_it=*/false);
      break;
    }
    case LogRecordType::delivery_update: {
      notifications_.set_delivery_state(
          payload.get("notification_id"),
          delivery_state_from_string(payload.get("delivery_state")));
      break;
    }
    case LogRecordType::chunk_create:
    case LogRecordType::chunk_transition:
      throw InternalError("chunk events must be applied through grouped replay");
  }
}

// ---- introspection ----------------------------------------------------------

std::vector<Notification> Engine::notifications_snapshot() const {
  std::shared_lock lock(mutex_);
  return notifications_.snapshot();
}

std::vector<Chunk> Engine::chunks_snapshot() const {
  std::shared_lock lock(mutex_);
  return chunks_.snapshot();
}

std::vector<Subscription> Engine::subscriptions_snapshot() const {
  std::shared_lock lock(mutex_);
  return subscriptions_.snapshot();
}

std::unordered_map<std::string, AgentProfile> Engine::agents_snapshot() const {
  std::shared_lock lock(mutex_);
  return agents_.snapshot();
}

std::vector<std::string> Engine::index_live_ids() const {
  std::shared_lock lock(mutex_);
  return index_->live_ids();
}

std::vector<std::string> Engine::integrity_warnings() const {
  std::shared_lock lock(mutex_);
  return warnings_;
}

Record Engine::stats() const {
  std::shared_lock lock(mutex_);
  Record r;
  r.put_uint("agents", agents_.size());
  r.put_uint("chunks", chunks_.size());
  r.put_uint("chunks_proposed", chunks_.count_with_status(ChunkStatus::proposed));
  r.put_uint("chunks_active", chunks_.count_with_status(ChunkStatus::active));
  r.put_uint("chunks_superseded", chunks_.count_with_status(ChunkStatus::superseded));
  r.put_uint("subscriptions", subscriptions_.size());
  r.put_uint("subscriptions_active", subscriptions_.active_count());
  r.put_uint("index_live", index_->live_size());
  r.put_uint("notifications", notifications_.size());
  r.put_uint("notifications_pending", notifications_.count_with_state(DeliveryState::pending));
  r.put_uint("notifications_delivered",
             notifications_.count_with_state(DeliveryState::delivered));
  r.put_uint("notifications_failed", notifications_.count_with_state(DeliveryState::failed));
  r.put_uint("notifications_acked", notifications_.count_with_state(DeliveryState::acked));
  r.put_uint("integrity_warnings", warnings_.size());
  r.put_uint("pending_deliveries", dispatcher_->pending());
  return r;
}

std::string Engine::state_digest() const {
  std::shared_lock lock(mutex_);
  std::string input;

  input += "agents\n";
  auto agent_list = agents_.list();
  std::sort(agent_list.begin(), agent_list.end(),
            [](const AgentProfile& a, const AgentProfile& b) { return a.agent_id < b.agent_id; });
  for (const auto& a : agent_list) input += to_record(a).encode();

  input += "chunks\n";
  auto chunk_list = chunks_.snapshot();
  std::sort(chunk_list.begin(), chunk_list.end(),
            [](const Chunk& a, const Chunk& b) { return a.chunk_id < b.chunk_id; });
  for (const auto& c : chunk_list) input += to_record(c).encode();

  input += "subscriptions\n";
  for (const auto& s : subscriptions_.snapshot()) input += to_record(s).encode();

  input += "notifications\n";
  for (const auto& n : notifications_.snapshot()) input += to_record(n).encode();

  return sha256_hex(input);
}

}  // namespace pasa
