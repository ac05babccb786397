// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "clock.hpp"
#include "ssrf.hpp"
#include "types.hpp"

namespace pasa {

struct DeliveryAttempt {
  std::string notification_id;
  int attempt_number = 0;  // starts at 1
  enum class Outcome { success, retryable_failure, permanent_failure } outcome;
  int64_t timestamp_us = 0;
  std::string detail;
};

const char* to_string(DeliveryAttempt::Outcome o);

struct RetryPolicy {
  int max_attempts = 5;
  int64_t base_delay_ms = 1000;  // doubles per retry
  int factor = 2;
  int64_t request_timeout_ms = 5000;
};

// Webhook delivery with retry/backoff. Jobs become due by clock time; pump()
// performs every due attempt. HTTP happens outside any engine lock; outcomes
// flow back through the callbacks.
//
// 2xx -> success; 5xx, 408, 429, timeouts and connection errors -> retryable;
// other 4xx -> permanent failure. After max_attempts the notification fails.
class Dispatcher {
 public:
  using Recheck = std::function<bool(const Notification&)>;
  using StateUpdate = std::function<void(const std::string& notification_id, DeliveryState state,
                                         const DeliveryAttempt& attempt)>;

  Dispatcher(Clock& clock, SsrfPolicy ssrf, RetryPolicy retry);

  void enqueue(const Notification& notification, std::string url, std::string secret,
               std::string payload, int attempts_already_made = 0);

  // Runs every due attempt once. `recheck` is the defense-in-depth predicate
  // recomputation: a notification that fails it is never sent and is marked
  // failed permanently.
  size_t pump(const Recheck& recheck, const StateUpdate& update);

  size_t pending() const;
  int64_t next_due_us() const;  // INT64_MAX when idle
  std::vector<DeliveryAttempt> history(const std::string& notification_id) const;

  // Signature header sent with each webhook POST.
  static constexpr const char* kSignatureHeader = "X-Pasa-Signature";
  static std::string sign_payload(const std::string& secret, const std::string& payload);

 private:
  struct Job {
    Notification notification;
    std::string url;
    std::string secret;
    std::string payload;
    int attempts_done = 0;
    int64_t next_attempt_us = 0;
  };

  DeliveryAttempt attempt_http(const Job& job, int attempt_number);

  Clock& clock_;
  SsrfPolicy ssrf_;
  RetryPolicy retry_;

  mutable std::mutex mutex_;
  std::vector<Job> jobs_;
  std::map<std::string, std::vector<DeliveryAttempt>> attempts_;
};

}  // namespace pasa
