// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "exact_index.hpp"

#include <algorithm>

#include "errors.hpp"

namespace pasa {

void sort_candidates(std::vector<MatchCandidate>& candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const MatchCandidate& a, const MatchCandidate& b) {
              if (a.similarity != b.similarity) return a.similarity > b.similarity;
              return a.subscription_id < b.subscription_id;
            });
}

void ExactIndex::insert(const std::string& subscription_id, const Embedding& embedding,
                        double threshold) {
  if (embedding.dim() != dim_) {
    throw ValidationError("index dimension mismatch: expected " + std::to_string(dim_) +
                          ", got " + std::to_string(embedding.dim()));
  }
  if (by_id_.count(subscription_id)) {
    throw StateError("subscription already indexed: " + subscription_id);
  }
  by_id_[subscription_id] = entries_.size();
  entries_.push_back(Entry{subscription_id, embedding, round_similarity(threshold)});
}

void ExactIndex::remove(const std::string& subscription_id) {
  auto it = by_id_.find(subscription_id);
  if (it == by_id_.end()) {
    throw StateError("subscription not indexed: " + subscription_id);
  }
  size_t pos = it->second;
  by_id_.erase(it);
  if (pos != entries_.size() - 1) {
    entries_[pos] = std::move(entries_.back());
    by_id_[entries_[pos].id] = pos;
  }
  entries_.pop_back();
}

bool ExactIndex::contains(const std::string& subscription_id) const {
  return by_id_.count(subscription_id) > 0;
}

std::vector<MatchCandidate> ExactIndex::match(const Embedding& query) const {
  std::vector<MatchCandidate> out;
  for (const auto& e : entries_) {
    double sim = round_similarity(cosine_similarity(query, e.embedding));
    if (sim >= e.threshold) {
      out.push_back(MatchCandidate{e.id, sim});
    }
  }
  sort_candidates(out);
  return out;
}

std::vector<std::string> ExactIndex::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

}  // namespace pasa
