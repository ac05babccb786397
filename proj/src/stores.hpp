// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "types.hpp"

namespace pasa {

class AgentRegistry {
 public:
  // Registration and re-registration; re-registration replaces the profile,
  // which affects future matching only.
  void upsert(AgentProfile profile);

  const AgentProfile* find(const std::string& agent_id) const;
  const AgentProfile& get(const std::string& agent_id) const;  // NotFoundError
  size_t size() const { return agents_.size(); }
  std::unordered_map<std::string, AgentProfile> snapshot() const { return agents_; }
  std::vector<AgentProfile> list() const;  // insertion order

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, AgentProfile> agents_;
};

class SubscriptionStore {
 public:
  void insert(Subscription sub);  // StateError on duplicate id
  // Soft delete; StateError if already inactive, NotFoundError if unknown.
  void deactivate(const std::string& subscription_id);

  const Subscription* find(const std::string& subscription_id) const;
  const Subscription& get(const std::string& subscription_id) const;
  size_t size() const { return subs_.size(); }
  size_t active_count() const;
  uint64_t created_total() const { return created_total_; }
  std::vector<Subscription> snapshot() const;  // insertion order

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, Subscription> subs_;
  uint64_t created_total_ = 0;
};

class NotificationStore {
 public:
  // Notifications arrive in sequence order; sequence gaps are an internal error.
  void insert(Notification n);

  const Notification* find(const std::string& notification_id) const;
  void set_delivery_state(const std::string& notification_id, DeliveryState state);

  // Oldest-first page of an agent's notifications with sequence > since.
  // Reads never consume; acked entries are skipped unless include_acked.
  std::vector<Notification> poll(const std::string& agent_id, uint64_t since_sequence,
                                 size_t limit, bool include_acked) const;

  size_t size() const { return all_.size(); }
  uint64_t last_sequence() const { return all_.empty() ? 0 : all_.back().sequence; }
  size_t count_with_state(DeliveryState s) const;
  std::vector<Notification> snapshot() const { return all_; }

 private:
  std::vector<Notification> all_;  // sequence order
  std::unordered_map<std::string, size_t> by_id_;
  std::unordered_map<std::string, std::vector<size_t>> by_agent_;
};

}  // namespace pasa
