// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace pasa {

inline constexpr double kUnitNormTolerance = 1e-6;

// Unit-L2-norm vector of doubles. Construction is the only validation point;
// downstream code can assume finite components and unit norm.
class Embedding {
 public:
  Embedding() = default;

  // Normalizes a raw vector. Rejects zero vectors and non-finite components.
  static Embedding unit(std::vector<double> raw);

  // Accepts an already-normalized vector; rejects if the norm is off by more
  // than kUnitNormTolerance.
  static Embedding require_unit(std::vector<double> components);

  size_t dim() const { return components_.size(); }
  bool empty() const { return components_.empty(); }
  std::span<const double> components() const { return components_; }

  bool operator==(const Embedding& other) const = default;

 private:
  explicit Embedding(std::vector<double> c) : components_(std::move(c)) {}
  std::vector<double> components_;
};

// Plain dot product; throws ValidationError on dimension mismatch.
double dot(std::span<const double> a, std::span<const double> b);

// Cosine similarity clamped to [-1, 1]. For unit vectors this is the dot
// product; the general form divides by both norms.
double cosine_similarity(const Embedding& a, const Embedding& b);

// Similarity values are rounded to 9 decimal places before any threshold
// comparison so that the engine and the brute-force oracle agree bit-for-bit
// regardless of evaluation order.
double round_similarity(double sim);

// rounded(similarity) >= threshold, the single thresholding rule everywhere.
bool meets_threshold(double similarity, double threshold);

}  // namespace pasa
