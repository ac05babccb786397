// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>

namespace pasa {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual int64_t now_us() = 0;
};

class SystemClock : public Clock {
 public:
  int64_t now_us() override;
  static SystemClock& instance();
};

// Deterministic clock for benches and tests: fixed start, fixed step per reading.
class LogicalClock : public Clock {
 public:
  explicit LogicalClock(int64_t start_us = 1767225600000000 /* 2026-01-01T00:00:00Z */,
                        int64_t step_us = 1000)
      : t_(start_us), step_(step_us) {}

  int64_t now_us() override {
    t_ += step_;
    return t_;
  }

  void advance_us(int64_t delta) { t_ += delta; }

 private:
  int64_t t_;
  int64_t step_;
};

}  // namespace pasa
