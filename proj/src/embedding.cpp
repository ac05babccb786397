// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "embedding.hpp"

#include <cmath>

#include "errors.hpp"

namespace pasa {

namespace {

double l2_norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void check_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ValidationError("embedding has a non-finite component");
  }
}

}  // namespace

Embedding Embedding::unit(std::vector<double> raw) {
  if (raw.empty()) throw ValidationError("embedding is empty");
  check_finite(raw);
  double norm = l2_norm(raw);
  if (norm <= 0.0 || !std::isfinite(norm)) {
    throw ValidationError("cannot normalize a zero vector");
  }
  for (double& x : raw) x /= norm;
  return Embedding(std::move(raw));
}

Embedding Embedding::require_unit(std::vector<double> components) {
  if (components.empty()) throw ValidationError("embedding is empty");
  check_finite(components);
  double norm = l2_norm(components);
  if (std::fabs(norm - 1.0) > kUnitNormTolerance) {
    throw ValidationError("embedding is not unit-norm (|v| = " + std::to_string(norm) + ")");
  }
  return Embedding(std::move(components));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("embedding dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
  double d = dot(a.components(), b.components());
  if (d > 1.0) return 1.0;
  if (d < -1.0) return -1.0;
  return d;
}

double round_similarity(double sim) { return std::round(sim * 1e9) / 1e9; }

bool meets_threshold(double similarity, double threshold) {
  // Both sides rounded: equality at the boundary is stable no matter how many
  // decimals the declared threshold carries.
  return round_similarity(similarity) >= round_similarity(threshold);
}

}  // namespace pasa
