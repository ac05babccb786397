// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "exact_index.hpp"
#include "rng.hpp"

namespace pasa {

struct HnswParams {
  int m = 16;
  int ef_construction = 200;
  int ef_search = 100;

  bool operator==(const HnswParams&) const = default;
};

// Hierarchical navigable small-world graph over subscription query embeddings.
// Unlike plain top-k ANN, every entry carries its own similarity threshold, so
// match() runs a range expansion at layer 0: the frontier keeps growing while
// the best remaining candidate stays above the minimum live threshold (minus a
// small slack that bridges shallow similarity valleys), and every visited node
// clearing the minimum threshold is collected, then filtered against its own
// threshold. Queries far from every entry pay only a bounded rescue budget.
// Removal is by tombstone; tombstoned nodes stay traversable but never appear
// in results.
//
// Concurrency: many readers, single writer (shared_mutex).
class HnswIndex {
 public:
  explicit HnswIndex(uint32_t dim, HnswParams params = {});

  void insert(const std::string& subscription_id, const Embedding& embedding, double threshold);
  void remove(const std::string& subscription_id);
  bool contains(const std::string& subscription_id) const;

  // Same contract and result ordering as ExactIndex::match.
  std::vector<MatchCandidate> match(const Embedding& query) const;

  size_t live_size() const;
  size_t total_size() const;
  std::vector<std::string> live_ids() const;

  uint32_t dim() const { return dim_; }
  const HnswParams& params() const { return params_; }

  // Index snapshot file: header (dim, params, count) followed by one entry per
  // live subscription (id, threshold, components as little-endian 64-bit
  // floats). The snapshot is a cache: load rebuilds the graph from entries.
  void save_snapshot(const std::string& path) const;
  static std::unique_ptr<HnswIndex> load_snapshot(const std::string& path);

  // Digest over (id, threshold) pairs; used to decide whether a snapshot still
  // matches the authoritative subscription store.
  std::string entries_digest() const;

 private:
  struct Node {
    std::string id;
    double threshold = 0.0;
    bool deleted = false;
    std::vector<std::vector<int>> layers;  // neighbor lists, layer 0 upward
  };

  struct Scored {
    double sim;
    int node;
  };

  const double* vec(int node) const { return &vectors_[size_t(node) * dim_]; }
  double sim_to(const double* query, int node) const;
  int random_level();
  int greedy_descent(const double* query, int start, int layer) const;
  std::vector<Scored> search_layer(const double* query, int entry, size_t ef, int layer) const;
  std::vector<Scored> range_search_layer0(const double* query, std::span<const int> seeds,
                                          double min_threshold) const;
  size_t max_degree(int layer) const;
  // Diversity-pruned neighbor selection over candidates scored against a base
  // vector: a candidate survives only if it is more similar to the base than
  // to every neighbor already kept, which preserves bridge links between
  // clusters; pruned candidates refill remaining slots.
  std::vector<int> select_neighbors(const std::vector<Scored>& candidates, size_t m) const;
  void shrink_links(int node, int layer);
  std::vector<MatchCandidate> match_locked(const Embedding& query) const;

  uint32_t dim_;
  HnswParams params_;
  std::vector<Node> nodes_;
  std::vector<double> vectors_;
  std::unordered_map<std::string, int> by_id_;
  int entry_ = -1;
  int entry_level_ = -1;
  std::vector<int> upper_nodes_;  // nodes with level >= 1: extra search seeds
  size_t live_count_ = 0;
  std::multiset<double> live_thresholds_;
  Rng level_rng_;

  mutable std::shared_mutex mutex_;
};

}  // namespace pasa
