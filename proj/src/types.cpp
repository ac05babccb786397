// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "types.hpp"

#include "errors.hpp"

namespace pasa {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::state: return "state";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::authorization: return "authorization";
    case ErrorCode::ssrf: return "ssrf";
    case ErrorCode::io: return "io";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

const char* to_string(ChunkStatus s) {
  switch (s) {
    case ChunkStatus::proposed: return "proposed";
    case ChunkStatus::active: return "active";
    case ChunkStatus::superseded: return "superseded";
  }
  return "unknown";
}

const char* to_string(Purpose p) {
  switch (p) {
    case Purpose::scientific: return "scientific";
    case Purpose::marketing: return "marketing";
    case Purpose::mixed: return "mixed";
  }
  return "unknown";
}

const char* to_string(TriggerStatus t) {
  switch (t) {
    case TriggerStatus::active: return "active";
    case TriggerStatus::proposed: return "proposed";
    case TriggerStatus::both: return "both";
  }
  return "unknown";
}

const char* to_string(NotificationTrigger t) {
  switch (t) {
    case NotificationTrigger::proposed: return "proposed";
    case NotificationTrigger::active: return "active";
  }
  return "unknown";
}

const char* to_string(DeliveryState s) {
  switch (s) {
    case DeliveryState::pending: return "pending";
    case DeliveryState::delivered: return "delivered";
    case DeliveryState::failed: return "failed";
    case DeliveryState::acked: return "acked";
  }
  return "unknown";
}

const char* to_string(NotificationMethod m) {
  switch (m) {
    case NotificationMethod::webhook: return "webhook";
    case NotificationMethod::polling_queue: return "polling_queue";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad_enum(std::string_view kind, std::string_view value) {
  throw ValidationError("unknown " + std::string(kind) + ": " + std::string(value));
}

}  // namespace

ChunkStatus chunk_status_from_string(std::string_view s) {
  if (s == "proposed") return ChunkStatus::proposed;
  if (s == "active") return ChunkStatus::active;
  if (s == "superseded") return ChunkStatus::superseded;
  bad_enum("chunk status", s);
}

Purpose purpose_from_string(std::string_view s) {
  if (s == "scientific") return Purpose::scientific;
  if (s == "marketing") return Purpose::marketing;
  if (s == "mixed") return Purpose::mixed;
  bad_enum("purpose", s);
}

TriggerStatus trigger_status_from_string(std::string_view s) {
  if (s == "active") return TriggerStatus::active;
  if (s == "proposed") return TriggerStatus::proposed;
  if (s == "both") return TriggerStatus::both;
  bad_enum("trigger_status", s);
}

NotificationTrigger notification_trigger_from_string(std::string_view s) {
  if (s == "proposed") return NotificationTrigger::proposed;
  if (s == "active") return NotificationTrigger::active;
  bad_enum("notification trigger", s);
}

DeliveryState delivery_state_from_string(std::string_view s) {
  if (s == "pending") return DeliveryState::pending;
  if (s == "delivered") return DeliveryState::delivered;
  if (s == "failed") return DeliveryState::failed;
  if (s == "acked") return DeliveryState::acked;
  bad_enum("delivery state", s);
}

NotificationMethod notification_method_from_string(std::string_view s) {
  if (s == "webhook") return NotificationMethod::webhook;
  if (s == "polling_queue") return NotificationMethod::polling_queue;
  bad_enum("notification method", s);
}

JurisdictionSet JurisdictionSet::of(std::set<std::string> codes) {
  if (codes.empty()) throw ValidationError("jurisdiction set must not be empty");
  for (const auto& c : codes) {
    if (c.empty()) throw ValidationError("empty jurisdiction code");
    if (c == "*") throw ValidationError("wildcard cannot appear inside a jurisdiction set");
  }
  return JurisdictionSet{false, std::move(codes)};
}

std::string JurisdictionSet::encode() const {
  if (wildcard) return "*";
  std::vector<std::string> sorted(codes.begin(), codes.end());
  return join(sorted, ',');
}

JurisdictionSet JurisdictionSet::decode(std::string_view s) {
  if (s == "*") return all();
  if (s.empty()) throw ValidationError("jurisdiction set must not be empty");
  std::set<std::string> codes;
  for (auto& part : split(s, ',')) {
    if (part.empty()) throw ValidationError("empty jurisdiction code in set");
    codes.insert(std::move(part));
  }
  return of(std::move(codes));
}

void validate(const PolicyProfile& p) {
  if (p.sensitivity_level < 1 || p.sensitivity_level > 5) {
    throw ValidationError("sensitivity_level must be in [1, 5], got " +
                          std::to_string(p.sensitivity_level));
  }
  if (!p.allowed_jurisdictions.wildcard && p.allowed_jurisdictions.codes.empty()) {
    throw ValidationError("allowed_jurisdictions must not be empty");
  }
}

void validate(const AgentProfile& a) {
  if (a.agent_id.empty()) throw ValidationError("agent_id must not be empty");
  if (a.handling_level < 1 || a.handling_level > 5) {
    throw ValidationError("handling_level must be in [1, 5], got " +
                          std::to_string(a.handling_level));
  }
  if (a.jurisdiction.empty()) throw ValidationError("jurisdiction must not be empty");
}

Record to_record(const AgentProfile& a) {
  Record r;
  r.put("agent_id", a.agent_id);
  r.put_int("handling_level", a.handling_level);
  r.put("purpose", to_string(a.purpose));
  r.put_bool("training_use", a.training_use);
  r.put("jurisdiction", a.jurisdiction);
  return r;
}

AgentProfile agent_from_record(const Record& r) {
  AgentProfile a;
  a.agent_id = r.get("agent_id");
  a.handling_level = static_cast<int>(r.get_int("handling_level"));
  a.purpose = purpose_from_string(r.get("purpose"));
  a.training_use = r.get_bool("training_use");
  a.jurisdiction = r.get("jurisdiction");
  validate(a);
  return a;
}

void put_policy(Record& r, const PolicyProfile& p, const std::string& prefix) {
  r.put_int(prefix + "sensitivity_level", p.sensitivity_level);
  r.put_bool(prefix + "marketing_opt_out", p.marketing_opt_out);
  r.put_bool(prefix + "training_opt_out", p.training_opt_out);
  r.put_bool(prefix + "scientific_opt_out", p.scientific_opt_out);
  r.put(prefix + "allowed_jurisdictions", p.allowed_jurisdictions.encode());
}

PolicyProfile policy_from_record(const Record& r, const std::string& prefix) {
  PolicyProfile p;
  p.sensitivity_level = static_cast<int>(r.get_int(prefix + "sensitivity_level"));
  p.marketing_opt_out = r.get_bool(prefix + "marketing_opt_out");
  p.training_opt_out = r.get_bool(prefix + "training_opt_out");
  p.scientific_opt_out = r.get_bool(prefix + "scientific_opt_out");
  p.allowed_jurisdictions = JurisdictionSet::decode(r.get(prefix + "allowed_jurisdictions"));
  validate(p);
  return p;
}

Record to_record(const Chunk& c) {
  Record r;
  r.put("chunk_id", c.chunk_id);
  r.put("status", to_string(c.status));
  r.put("contributor_id", c.contributor_id);
  r.put("content", c.content);
  r.put_int("created_at_us", c.created_at_us);
  if (c.activated_at_us) r.put_int("activated_at_us", *c.activated_at_us);
  put_policy(r, c.policy);
  r.put_doubles("embedding", c.embedding.components());
  return r;
}

Chunk chunk_from_record(const Record& r) {
  Chunk c;
  c.chunk_id = r.get("chunk_id");
  c.status = chunk_status_from_string(r.get("status"));
  c.contributor_id = r.get("contributor_id");
  c.content = r.get("content");
  c.created_at_us = r.get_int("created_at_us");
  if (auto t = r.find_int("activated_at_us")) c.activated_at_us = *t;
  c.policy = policy_from_record(r);
  c.embedding = Embedding::require_unit(r.get_doubles("embedding"));
  return c;
}

Record to_record(const Subscription& s) {
  Record r;
  r.put("subscription_id", s.subscription_id);
  r.put("agent_id", s.agent_id);
  r.put_double("similarity_threshold", s.similarity_threshold);
  r.put("trigger_status", to_string(s.trigger_status));
  r.put_bool("active", s.active);
  r.put("method", to_string(s.method));
  if (s.method == NotificationMethod::webhook) {
    r.put("webhook_url", s.webhook_url);
    r.put("webhook_secret", s.webhook_secret);
  }
  r.put_doubles("query_embedding", s.query_embedding.components());
  return r;
}

Subscription subscription_from_record(const Record& r) {
  Subscription s;
  s.subscription_id = r.get("subscription_id");
  s.agent_id = r.get("agent_id");
  s.similarity_threshold = r.get_double("similarity_threshold");
  s.trigger_status = trigger_status_from_string(r.get("trigger_status"));
  s.active = r.get_bool("active");
  s.method = notification_method_from_string(r.get("method"));
  if (s.method == NotificationMethod::webhook) {
    s.webhook_url = r.get("webhook_url");
    s.webhook_secret = r.get("webhook_secret");
  }
  s.query_embedding = Embedding::require_unit(r.get_doubles("query_embedding"));
  return s;
}

Record to_record(const Notification& n) {
  Record r;
  r.put("notification_id", n.notification_id);
  r.put_uint("sequence", n.sequence);
  r.put("chunk_id", n.chunk_id);
  r.put("subscription_id", n.subscription_id);
  r.put("agent_id", n.agent_id);
  r.put_double("similarity", n.similarity);
  r.put("trigger", to_string(n.trigger));
  r.put_int("created_at_us", n.created_at_us);
  r.put("delivery_state", to_string(n.delivery_state));
  r.put("method", to_string(n.method));
  return r;
}

Notification notification_from_record(const Record& r) {
  Notification n;
  n.notification_id = r.get("notification_id");
  n.sequence = r.get_uint("sequence");
  n.chunk_id = r.get("chunk_id");
  n.subscription_id = r.get("subscription_id");
  n.agent_id = r.get("agent_id");
  n.similarity = r.get_double("similarity");
  n.trigger = notification_trigger_from_string(r.get("trigger"));
  n.created_at_us = r.get_int("created_at_us");
  n.delivery_state = delivery_state_from_string(r.get("delivery_state"));
  n.method = notification_method_from_string(r.get("method"));
  return n;
}

}  // namespace pasa
