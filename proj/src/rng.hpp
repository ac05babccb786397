// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace pasa {

// splitmix64 generator. Hand-rolled so that seeded scenarios are byte-identical
// across standard libraries and platforms (std::normal_distribution is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n). Rejection sampling keeps it unbiased.
  uint32_t next_below(uint32_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return static_cast<uint32_t>(v % n);
  }

  // Uniform integer in [lo, hi], inclusive.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<uint32_t>(hi - lo + 1)));
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Standard normal via Box-Muller.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Independent child stream; forking does not disturb this generator.
  Rng fork(uint64_t stream) const {
    return Rng(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 0x632be59bd9b4e019ULL)));
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pasa
