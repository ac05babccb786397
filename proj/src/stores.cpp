// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "stores.hpp"

#include <algorithm>

#include "errors.hpp"

namespace pasa {

void AgentRegistry::upsert(AgentProfile profile) {
  validate(profile);
  auto it = agents_.find(profile.agent_id);
  if (it == agents_.end()) {
    order_.push_back(profile.agent_id);
    agents_.emplace(profile.agent_id, std::move(profile));
  } else {
    it->second = std::move(profile);
  }
}

const AgentProfile* AgentRegistry::find(const std::string& agent_id) const {
  auto it = agents_.find(agent_id);
  return it == agents_.end() ? nullptr : &it->second;
}

const AgentProfile& AgentRegistry::get(const std::string& agent_id) const {
  const AgentProfile* a = find(agent_id);
  if (!a) throw NotFoundError("unknown agent: " + agent_id);
  return *a;
}

std::vector<AgentProfile> AgentRegistry::list() const {
  std::vector<AgentProfile> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(agents_.at(id));
  return out;
}

void SubscriptionStore::insert(Subscription sub) {
  if (sub.subscription_id.empty()) throw ValidationError("subscription_id must not be empty");
  if (subs_.count(sub.subscription_id)) {
    throw StateError("duplicate subscription_id: " + sub.subscription_id);
  }
  order_.push_back(sub.subscription_id);
  subs_.emplace(sub.subscription_id, std::move(sub));
  ++created_total_;
}

void SubscriptionStore::deactivate(const std::string& subscription_id) {
  auto it = subs_.find(subscription_id);
  if (it == subs_.end()) throw NotFoundError("unknown subscription: " + subscription_id);
  if (!it->second.active) throw StateError("subscription already inactive: " + subscription_id);
  it->second.active = false;
}

const Subscription* SubscriptionStore::find(const std::string& subscription_id) const {
  auto it = subs_.find(subscription_id);
  return it == subs_.end() ? nullptr : &it->second;
}

const Subscription& SubscriptionStore::get(const std::string& subscription_id) const {
  const Subscription* s = find(subscription_id);
  if (!s) throw NotFoundError("unknown subscription: " + subscription_id);
  return *s;
}

size_t SubscriptionStore::active_count() const {
  size_t n = 0;
  for (const auto& [_, s] : subs_) {
    if (s.active) ++n;
  }
  return n;
}

std::vector<Subscription> SubscriptionStore::snapshot() const {
  std::vector<Subscription> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(subs_.at(id));
  return out;
}

void NotificationStore::insert(Notification n) {
  if (by_id_.count(n.notification_id)) {
    throw StateError("duplicate notification_id: " + n.notification_id);
  }
  if (!all_.empty() && n.sequence <= all_.back().sequence) {
    throw InternalError("notification sequence must increase");
  }
  by_id_[n.notification_id] = all_.size();
  by_agent_[n.agent_id].push_back(all_.size());
  all_.push_back(std::move(n));
}

const Notification* NotificationStore::find(const std::string& notification_id) const {
  auto it = by_id_.find(notification_id);
  return it == by_id_.end() ? nullptr : &all_[it->second];
}

void NotificationStore::set_delivery_state(const std::string& notification_id,
                                           DeliveryState state) {
  auto it = by_id_.find(notification_id);
  if (it == by_id_.end()) throw NotFoundError("unknown notification: " + notification_id);
  all_[it->second].delivery_state = state;
}

std::vector<Notification> NotificationStore::poll(const std::string& agent_id,
                                                  uint64_t since_sequence, size_t limit,
                                                  bool include_acked) const {
  std::vector<Notification> out;
  auto it = by_agent_.find(agent_id);
  if (it == by_agent_.end()) return out;
  for (size_t idx : it->second) {
    const Notification& n = all_[idx];
    if (n.sequence <= since_sequence) continue;
    if (!include_acked && n.delivery_state == DeliveryState::acked) continue;
    out.push_back(n);
    if (out.size() >= limit) break;
  }
  return out;
}

size_t NotificationStore::count_with_state(DeliveryState s) const {
  return size_t(std::count_if(all_.begin(), all_.end(),
                              [s](const Notification& n) { return n.delivery_state == s; }));
}

}  // namespace pasa
