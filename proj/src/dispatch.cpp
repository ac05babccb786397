// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "dispatch.hpp"

#include <algorithm>
#include <limits>

#include <httplib.h>

#include "digest.hpp"
#include "errors.hpp"

namespace pasa {

const char* to_string(DeliveryAttempt::Outcome o) {
  switch (o) {
    case DeliveryAttempt::Outcome::success: return "success";
    case DeliveryAttempt::Outcome::retryable_failure: return "retryable_failure";
    case DeliveryAttempt::Outcome::permanent_failure: return "permanent_failure";
  }
  return "unknown";
}

Dispatcher::Dispatcher(Clock& clock, SsrfPolicy ssrf, RetryPolicy retry)
    : clock_(clock), ssrf_(std::move(ssrf)), retry_(retry) {}

std::string Dispatcher::sign_payload(const std::string& secret, const std::string& payload) {
  return "sha256=" + hmac_sha256_hex(secret, payload);
}

void Dispatcher::enqueue(const Notification& notification, std::string url, std::string secret,
                         std::string payload, int attempts_already_made) {
  std::lock_guard lock(mutex_);
  Job job;
  job.notification = notification;
  job.url = std::move(url);
  job.secret = std::move(secret);
  job.payload = std::move(payload);
  job.attempts_done = attempts_already_made;
  job.next_attempt_us = clock_.now_us();  // first (or next) attempt is due immediately
  jobs_.push_back(std::move(job));
}

DeliveryAttempt Dispatcher::attempt_http(const Job& job, int attempt_number) {
  DeliveryAttempt attempt;
  attempt.notification_id = job.notification.notification_id;
  attempt.attempt_number = attempt_number;
  attempt.timestamp_us = clock_.now_us();

  WebhookTarget target;
  try {
    // Re-validated per attempt; connecting to the validated address (not the
    // hostname) closes the DNS rebinding window.
    target = validate_webhook_url(job.url, ssrf_);
  } catch (const Error& e) {
    attempt.outcome = DeliveryAttempt::Outcome::permanent_failure;
    attempt.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    return attempt;
  }

  const IpAddress& addr = target.addresses.front();
  std::string host_for_connect = addr.v6 ? "[" + addr.to_string() + "]" : addr.to_string();
  if (target.url.scheme == "https") {
    // Built without TLS support; https targets are validated but cannot be
    // delivered by this client.
    attempt.outcome = DeliveryAttempt::Outcome::permanent_failure;
    attempt.detail = "https delivery requires a TLS-enabled build";
    return attempt;
  }

  httplib::Client client(host_for_connect, target.url.port);
  client.set_connection_timeout(int(retry_.request_timeout_ms / 1000),
                                int((retry_.request_timeout_ms % 1000) * 1000));
  client.set_read_timeout(int(retry_.request_timeout_ms / 1000),
                          int((retry_.request_timeout_ms % 1000) * 1000));
  httplib::Headers headers = {
      {"Host", target.url.host},
      {kSignatureHeader, sign_payload(job.secret, job.payload)},
      {"X-Pasa-Notification-Id", job.notification.notification_id},
  };
  auto res = client.Post(target.url.target, headers, job.payload, "text/plain");

  if (!res) {
    attempt.outcome = DeliveryAttempt::Outcome::retryable_failure;
    attempt.detail = "connection error: " + httplib::to_string(res.error());
    return attempt;
  }
  int status = res->status;
  attempt.detail = "http status " + std::to_string(status);
  if (status >= 200 && status < 300) {
    attempt.outcome = DeliveryAttempt::Outcome::success;
  } else if (status >= 500 || status == 408 || status == 429) {
    attempt.outcome = DeliveryAttempt::Outcome::retryable_failure;
  } else {
    attempt.outcome = DeliveryAttempt::Outcome::permanent_failure;
  }
  return attempt;
}

size_t Dispatcher::pump(const Recheck& recheck, const StateUpdate& update) {
  // Pull due jobs out under the lock, run HTTP unlocked, then reschedule.
  std::vector<Job> due;
  {
    std::lock_guard lock(mutex_);
    int64_t now = clock_.now_us();
    auto split_point = std::stable_partition(jobs_.begin(), jobs_.end(), [&](const Job& j) {
      return j.next_attempt_us > now;
    });
    due.assign(std::make_move_iterator(split_point), std::make_move_iterator(jobs_.end()));
    jobs_.erase(split_point, jobs_.end());
  }

  size_t attempts_made = 0;
  std::vector<Job> requeue;
  for (Job& job : due) {
    int attempt_number = job.attempts_done + 1;

    if (recheck && !recheck(job.notification)) {
      DeliveryAttempt attempt;
      attempt.notification_id = job.notification.notification_id;
      attempt.attempt_number = attempt_number;
      attempt.timestamp_us = clock_.now_us();
      attempt.outcome = DeliveryAttempt::Outcome::permanent_failure;
      attempt.detail = "notification predicate recheck failed; not sent";
      {
        std::lock_guard lock(mutex_);
        attempts_.try_emplace(attempt.notification_id).first->second.push_back(attempt);
      }
      update(job.notification.notification_id, DeliveryState::failed, attempt);
      ++attempts_made;
      continue;
    }

    DeliveryAttempt attempt = attempt_http(job, attempt_number);
    ++attempts_made;
    job.attempts_done = attempt_number;
    {
      std::lock_guard lock(mutex_);
      attempts_.try_emplace(attempt.notification_id).first->second.push_back(attempt);
    }

    switch (attempt.outcome) {
      case DeliveryAttempt::Outcome::success:
        update(job.notification.notification_id, DeliveryState::delivered, attempt);
        break;
      case DeliveryAttempt::Outcome::permanent_failure:
        update(job.notification.notification_id, DeliveryState::failed, attempt);
        break;
      case DeliveryAttempt::Outcome::retryable_failure:
        if (job.attempts_done >= retry_.max_attempts) {
          update(job.notification.notification_id, DeliveryState::failed, attempt);
        } else {
          int64_t delay_ms = retry_.base_delay_ms;
          for (int i = 1; i < job.attempts_done; ++i) delay_ms *= retry_.factor;
          job.next_attempt_us = clock_.now_us() + delay_ms * 1000;
          requeue.push_back(std::move(job));
        }
        break;
    }
  }

  if (!requeue.empty()) {
    std::lock_guard lock(mutex_);
    for (Job& j : requeue) jobs_.push_back(std::move(j));
  }
  return attempts_made;
}

size_t Dispatcher::pending() const {
  std::lock_guard lock(mutex_);
  return jobs_.size();
}

int64_t Dispatcher::next_due_us() const {
  std::lock_guard lock(mutex_);
  int64_t next = std::numeric_limits<int64_t>::max();
  for (const Job& j : jobs_) next = std::min(next, j.next_attempt_us);
  return next;
}

std::vector<DeliveryAttempt> Dispatcher::history(const std::string& notification_id) const {
  std::lock_guard lock(mutex_);
  auto it = attempts_.find(notification_id);
  return it == attempts_.end() ? std::vector<DeliveryAttempt>{} : it->second;
}

}  // namespace pasa
