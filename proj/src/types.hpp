// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "record.hpp"

namespace pasa {

enum class ChunkStatus { proposed, active, superseded };
enum class Purpose { scientific, marketing, mixed };
enum class TriggerStatus { active, proposed, both };
enum class NotificationTrigger { proposed, active };
enum class DeliveryState { pending, delivered, failed, acked };
enum class NotificationMethod { webhook, polling_queue };

const char* to_string(ChunkStatus s);
const char* to_string(Purpose p);
const char* to_string(TriggerStatus t);
const char* to_string(NotificationTrigger t);
const char* to_string(DeliveryState s);
const char* to_string(NotificationMethod m);

ChunkStatus chunk_status_from_string(std::string_view s);
Purpose purpose_from_string(std::string_view s);
TriggerStatus trigger_status_from_string(std::string_view s);
NotificationTrigger notification_trigger_from_string(std::string_view s);
DeliveryState delivery_state_from_string(std::string_view s);
NotificationMethod notification_method_from_string(std::string_view s);

// Set of allowed processing jurisdictions. The wildcard ("*" on the wire)
// accepts every code; the set is never empty otherwise.
struct JurisdictionSet {
  bool wildcard = false;
  std::set<std::string> codes;

  bool contains(const std::string& code) const {
    return wildcard || codes.count(code) > 0;
  }
  bool operator==(const JurisdictionSet&) const = default;

  static JurisdictionSet all() { return JurisdictionSet{true, {}}; }
  static JurisdictionSet of(std::set<std::string> codes);

  std::string encode() const;                         // "*" or sorted CSV
  static JurisdictionSet decode(std::string_view s);  // ValidationError on empty
};

// The five-dimension data handling declaration carried by every chunk.
struct PolicyProfile {
  int sensitivity_level = 5;
  bool marketing_opt_out = true;
  bool training_opt_out = true;
  bool scientific_opt_out = true;
  JurisdictionSet allowed_jurisdictions;

  bool operator==(const PolicyProfile&) const = default;
};

void validate(const PolicyProfile& p);

struct AgentProfile {
  std::string agent_id;
  int handling_level = 1;
  Purpose purpose = Purpose::mixed;
  bool training_use = false;
  std::string jurisdiction;
};

void validate(const AgentProfile& a);

struct Chunk {
  std::string chunk_id;
  Embedding embedding;
  ChunkStatus status = ChunkStatus::proposed;
  PolicyProfile policy;
  std::string contributor_id;
  std::string content;
  int64_t created_at_us = 0;
  std::optional<int64_t> activated_at_us;
};

struct Subscription {
  std::string subscription_id;
  std::string agent_id;
  Embedding query_embedding;
  double similarity_threshold = 0.7;
  TriggerStatus trigger_status = TriggerStatus::active;
  bool active = true;
  NotificationMethod method = NotificationMethod::polling_queue;
  std::string webhook_url;     // set when method == webhook
  std::string webhook_secret;  // HMAC key for webhook payload signatures
};

struct Notification {
  std::string notification_id;
  uint64_t sequence = 0;  // global emission order, drives polling pagination
  std::string chunk_id;
  std::string subscription_id;
  std::string agent_id;
  double similarity = 0.0;
  NotificationTrigger trigger = NotificationTrigger::active;
  int64_t created_at_us = 0;
  DeliveryState delivery_state = DeliveryState::pending;
  NotificationMethod method = NotificationMethod::polling_queue;
};

// Canonical record serialization. Field names are stable: they are the wire
// format, the log format, and the report format.
Record to_record(const AgentProfile& a);
AgentProfile agent_from_record(const Record& r);

void put_policy(Record& r, const PolicyProfile& p, const std::string& prefix = "policy.");
PolicyProfile policy_from_record(const Record& r, const std::string& prefix = "policy.");

Record to_record(const Chunk& c);
Chunk chunk_from_record(const Record& r);

Record to_record(const Subscription& s);
Subscription subscription_from_record(const Record& r);

Record to_record(const Notification& n);
Notification notification_from_record(const Record& r);

}  // namespace pasa
