// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "embedding.hpp"

namespace pasa {

struct MatchCandidate {
  std::string subscription_id;
  double similarity = 0.0;  // rounded to 9 decimals, in [-1, 1]
};

// Shared ordering contract for all index results: similarity descending,
// subscription_id ascending.
void sort_candidates(std::vector<MatchCandidate>& candidates);

// Brute-force index over subscription query embeddings; the correctness
// reference the approximate index is measured against.
class ExactIndex {
 public:
  explicit ExactIndex(uint32_t dim) : dim_(dim) {}

  void insert(const std::string& subscription_id, const Embedding& embedding, double threshold);
  void remove(const std::string& subscription_id);
  bool contains(const std::string& subscription_id) const;

  // Every subscription whose rounded cosine similarity with `query` meets its
  // own threshold.
  std::vector<MatchCandidate> match(const Embedding& query) const;

  size_t size() const { return entries_.size(); }
  uint32_t dim() const { return dim_; }
  std::vector<std::string> ids() const;

 private:
  struct Entry {
    std::string id;
    Embedding embedding;
    double threshold;
  };
  uint32_t dim_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> by_id_;
};

}  // namespace pasa
