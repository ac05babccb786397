// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "hnsw_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <queue>
#include <set>

#include "digest.hpp"
#include "errors.hpp"
#include "record.hpp"

namespace pasa {

namespace {

constexpr uint64_t kLevelSeed = 0x7061736168747377ULL;  // fixed: deterministic rebuilds
constexpr int kMaxLevel = 24;
constexpr double kRangeSlack = 0.05;  // frontier may dip this far below the threshold
constexpr char kSnapshotMagic[8] = {'P', 'A', 'S', 'A', 'I', 'D', 'X', '1'};

void write_u16_le(std::string& out, uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char(v >> 8));
}

void write_u32_le(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (i * 8)) & 0xff));
}

void write_u64_le(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (i * 8)) & 0xff));
}

void write_f64_le(std::string& out, double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  write_u64_le(out, bits);
}

class SnapshotReader {
 public:
  explicit SnapshotReader(std::string data) : data_(std::move(data)) {}

  uint16_t u16() { return uint16_t(byte()) | uint16_t(byte()) << 8; }

  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(byte()) << (i * 8);
    return v;
  }

  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(byte()) << (i * 8);
    return v;
  }

  double f64() {
    uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, sizeof(d));
    return d;
  }

  std::string bytes(size_t n) {
    if (pos_ + n > data_.size()) throw IoError("index snapshot truncated");
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  uint8_t byte() {
    if (pos_ >= data_.size()) throw IoError("index snapshot truncated");
    return uint8_t(data_[pos_++]);
  }

  std::string data_;
  size_t pos_ = 0;
};

}  // namespace

HnswIndex::HnswIndex(uint32_t dim, HnswParams params)
    : dim_(dim), params_(params), level_rng_(kLevelSeed) {
  if (dim_ == 0) throw ValidationError("index dimension must be positive");
  if (params_.m < 2) throw ValidationError("hnsw m must be >= 2");
  if (params_.ef_search < 1) throw ValidationError("hnsw ef_search must be >= 1");
  if (params_.ef_construction < params_.m) params_.ef_construction = params_.m;
}

double HnswIndex::sim_to(const double* query, int node) const {
  const double* v = vec(node);
  double sum = 0.0;
  for (uint32_t i = 0; i < dim_; ++i) sum += query[i] * v[i];
  if (sum > 1.0) return 1.0;
  if (sum < -1.0) return -1.0;
  return sum;
}

int HnswIndex::random_level() {
  double u = level_rng_.next_unit();
  double ml = 1.0 / std::log(double(params_.m));
  int level = int(std::floor(-std::log(1.0 - u) * ml));
  return std::min(level, kMaxLevel);
}

size_t HnswIndex::max_degree(int layer) const {
  return layer == 0 ? size_t(params_.m) * 2 : size_t(params_.m);
}

int HnswIndex::greedy_descent(const double* query, int start, int layer) const {
  int current = start;
  double best = sim_to(query, current);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int nb : nodes_[current].layers[layer]) {
      double s = sim_to(query, nb);
      if (s > best) {
        best = s;
        current = nb;
        improved = true;
      }
    }
  }
  return current;
}

std::vector<HnswIndex::Scored> HnswIndex::search_layer(const double* query, int entry, size_t ef,
                                                       int layer) const {
  std::vector<char> visited(nodes_.size(), 0);
  // candidates: best-first; results: worst-on-top so the frontier is cheap to read
  std::priority_queue<std::pair<double, int>> candidates;
  std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>>
      results;

  visited[entry] = 1;
  double es = sim_to(query, entry);
  candidates.emplace(es, entry);
  results.emplace(es, entry);

  while (!candidates.empty()) {
    auto [cs, c] = candidates.top();
    candidates.pop();
    if (results.size() >= ef && cs < results.top().first) break;
    for (int nb : nodes_[c].layers[layer]) {
      if (visited[nb]) continue;
      visited[nb] = 1;
      double s = sim_to(query, nb);
      if (results.size() < ef || s > results.top().first) {
        candidates.emplace(s, nb);
        results.emplace(s, nb);
        if (results.size() > ef) results.pop();
      }
    }
  }

  std::vector<Scored> out;
  out.reserve(results.size());
  while (!results.empty()) {
    out.push_back(Scored{results.top().first, results.top().second});
    results.pop();
  }
  std::reverse(out.begin(), out.end());  // similarity descending
  return out;
}

std::vector<int> HnswIndex::select_neighbors(const std::vector<Scored>& candidates,
                                             size_t m) const {
  std::vector<int> result;
  std::vector<int> pruned;
  for (const Scored& c : candidates) {  // best-first
    if (result.size() >= m) break;
    bool diverse = true;
    const double* cv = vec(c.node);
    for (int kept : result) {
      if (sim_to(cv, kept) > c.sim) {
        diverse = false;
        break;
      }
    }
    if (diverse) {
      result.push_back(c.node);
    } else {
      pruned.push_back(c.node);
    }
  }
  for (int node : pruned) {
    if (result.size() >= m) break;
    result.push_back(node);
  }
  return result;
}

void HnswIndex::shrink_links(int node, int layer) {
  auto& links = nodes_[node].layers[layer];
  size_t cap = max_degree(layer);
  if (links.size() <= cap) return;
  const double* v = vec(node);
  std::vector<Scored> candidates;
  candidates.reserve(links.size());
  for (int nb : links) candidates.push_back(Scored{sim_to(v, nb), nb});
  std::sort(candidates.begin(), candidates.end(),
            [](const Scored& a, const Scored& b) { return a.sim > b.sim; });
  links = select_neighbors(candidates, cap);
}

void HnswIndex::insert(const std::string& subscription_id, const Embedding& embedding,
                       double threshold) {
  std::unique_lock lock(mutex_);
  if (embedding.dim() != dim_) {
    throw ValidationError("index dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                          std::to_string(embedding.dim()));
  }
  if (by_id_.count(subscription_id)) {
    throw StateError("subscription already indexed: " + subscription_id);
  }

  int level = random_level();
  int node = int(nodes_.size());
  Node n;
  n.id = subscription_id;
  n.threshold = round_similarity(threshold);
  n.layers.resize(size_t(level) + 1);
  nodes_.push_back(std::move(n));
  if (level >= 1) upper_nodes_.push_back(node);
  vectors_.insert(vectors_.end(), embedding.components().begin(), embedding.components().end());
  by_id_[subscription_id] = node;
  live_thresholds_.insert(nodes_.back().threshold);
  ++live_count_;

  if (entry_ < 0) {
    entry_ = node;
    entry_level_ = level;
    return;
  }

  const double* q = vec(node);
  int ep = entry_;
  for (int lc = entry_level_; lc > level; --lc) {
    ep = greedy_descent(q, ep, lc);
  }
  for (int lc = std::min(level, entry_level_); lc >= 0; --lc) {
    auto found = search_layer(q, ep, size_t(params_.ef_construction), lc);
    for (int nb : select_neighbors(found, size_t(params_.m))) {
      nodes_[node].layers[lc].push_back(nb);
      nodes_[nb].layers[lc].push_back(node);
      shrink_links(nb, lc);
    }
    if (!found.empty()) ep = found.front().node;
  }
  if (level > entry_level_) {
    entry_ = node;
    entry_level_ = level;
  }
}

void HnswIndex::remove(const std::string& subscription_id) {
  std::unique_lock lock(mutex_);
  auto it = by_id_.find(subscription_id);
  if (it == by_id_.end()) {
    throw StateError("subscription not indexed: " + subscription_id);
  }
  Node& n = nodes_[it->second];
  n.deleted = true;
  live_thresholds_.erase(live_thresholds_.find(n.threshold));
  --live_count_;
  by_id_.erase(it);
  // The node stays in the graph as a traversable tombstone.
}

bool HnswIndex::contains(const std::string& subscription_id) const {
  std::shared_lock lock(mutex_);
  return by_id_.count(subscription_id) > 0;
}

std::vector<MatchCandidate> HnswIndex::match(const Embedding& query) const {
  std::shared_lock lock(mutex_);
  return match_locked(query);
}

std::vector<HnswIndex::Scored> HnswIndex::range_search_layer0(const double* query,
                                                              std::span<const int> seeds,
                                                              double min_threshold) const {
  // Expansion above the cutoff is free: the walk covers every qualifying
  // region it can reach. Exploration below the cutoff (crossing similarity
  // valleys between regions, or leaving a fruitless landing zone) draws from
  // a bounded rescue budget, so queries with no qualifying region anywhere
  // pay at most that budget. The slack lets the walk cross shallow dips
  // without touching the budget at all.
  const double cutoff = min_threshold - kRangeSlack;
  const size_t rescue_visit_budget =
      std::max(size_t(params_.m) * 2, size_t(params_.ef_search) / 4);

  // Epoch-stamped scratch: no per-query allocation or clearing.
  thread_local std::vector<uint64_t> visited_marks;
  thread_local uint64_t epoch = 0;
  thread_local std::vector<std::pair<double, int>> heap_storage;
  if (visited_marks.size() < nodes_.size()) visited_marks.resize(nodes_.size(), 0);
  ++epoch;
  heap_storage.clear();
  heap_storage.reserve(rescue_visit_budget * 2);
  std::priority_queue<std::pair<double, int>> candidates(
      std::less<std::pair<double, int>>{}, std::move(heap_storage));
  std::vector<Scored> collected;

  for (int seed : seeds) {
    if (visited_marks[seed] == epoch) continue;
    visited_marks[seed] = epoch;
    double s = sim_to(query, seed);
    candidates.emplace(s, seed);
    if (round_similarity(s) >= min_threshold) collected.push_back({s, seed});
  }

  size_t rescue_visits = 0;
  while (!candidates.empty()) {
    auto [cs, c] = candidates.top();
    candidates.pop();
    bool below_cutoff = cs < cutoff;
    if (below_cutoff && rescue_visits >= rescue_visit_budget) break;
    for (int nb : nodes_[c].layers[0]) {
      if (visited_marks[nb] == epoch) continue;
      visited_marks[nb] = epoch;
      if (below_cutoff) ++rescue_visits;
      double s = sim_to(query, nb);
      candidates.emplace(s, nb);
      if (round_similarity(s) >= min_threshold) collected.push_back({s, nb});
    }
  }
  return collected;
}

std::vector<MatchCandidate> HnswIndex::match_locked(const Embedding& query) const {
  if (query.dim() != dim_) {
    throw ValidationError("query dimension mismatch: expected " + std::to_string(dim_) + ", got " +
                          std::to_string(query.dim()));
  }
  if (live_count_ == 0) return {};

  const double* q = query.components().data();
  const double min_threshold = *live_thresholds_.begin();

  std::vector<MatchCandidate> out;
  int ep = entry_;
  for (int lc = entry_level_; lc > 0; --lc) {
    ep = greedy_descent(q, ep, lc);
  }
  // Seed the range walk with the descent result plus every upper-layer node:
  // each region with an upper-layer representative is reachable without
  // crossing a similarity valley at layer 0.
  thread_local std::vector<int> seeds;
  seeds.clear();
  seeds.push_back(ep);
  seeds.insert(seeds.end(), upper_nodes_.begin(), upper_nodes_.end());
  for (const Scored& s : range_search_layer0(q, seeds, min_threshold)) {
    const Node& n = nodes_[s.node];
    if (n.deleted) continue;
    double rounded = round_similarity(s.sim);
    if (rounded >= n.threshold) out.push_back(MatchCandidate{n.id, rounded});
  }
  sort_candidates(out);
  return out;
}

size_t HnswIndex::live_size() const {
  std::shared_lock lock(mutex_);
  return live_count_;
}

size_t HnswIndex::total_size() const {
  std::shared_lock lock(mutex_);
  return nodes_.size();
}

std::vector<std::string> HnswIndex::live_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  out.reserve(live_count_);
  for (const auto& n : nodes_) {
    if (!n.deleted) out.push_back(n.id);
  }
  return out;
}

void HnswIndex::save_snapshot(const std::string& path) const {
  std::shared_lock lock(mutex_);
  std::string data;
  data.append(kSnapshotMagic, sizeof(kSnapshotMagic));
  write_u32_le(data, dim_);
  write_u32_le(data, uint32_t(params_.m));
  write_u32_le(data, uint32_t(params_.ef_construction));
  write_u32_le(data, uint32_t(params_.ef_search));
  write_u64_le(data, live_count_);
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.deleted) continue;
    if (n.id.size() > 0xffff) throw InternalError("subscription id too long for snapshot");
    write_u16_le(data, uint16_t(n.id.size()));
    data.append(n.id);
    write_f64_le(data, n.threshold);
    const double* v = vec(int(i));
    for (uint32_t d = 0; d < dim_; ++d) write_f64_le(data, v[d]);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open index snapshot for writing: " + path);
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw IoError("failed writing index snapshot: " + path);
}

std::unique_ptr<HnswIndex> HnswIndex::load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open index snapshot: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  SnapshotReader r(std::move(data));
  std::string magic = r.bytes(sizeof(kSnapshotMagic));
  if (std::memcmp(magic.data(), kSnapshotMagic, sizeof(kSnapshotMagic)) != 0) {
    throw IoError("bad index snapshot magic");
  }
  uint32_t dim = r.u32();
  HnswParams params;
  params.m = int(r.u32());
  params.ef_construction = int(r.u32());
  params.ef_search = int(r.u32());
  uint64_t count = r.u64();
  auto index = std::make_unique<HnswIndex>(dim, params);
  for (uint64_t i = 0; i < count; ++i) {
    uint16_t id_len = r.u16();
    std::string id = r.bytes(id_len);
    double threshold = r.f64();
    std::vector<double> comps(dim);
    for (uint32_t d = 0; d < dim; ++d) comps[d] = r.f64();
    index->insert(id, Embedding::require_unit(std::move(comps)), threshold);
  }
  if (!r.at_end()) throw IoError("trailing bytes in index snapshot");
  return index;
}

std::string HnswIndex::entries_digest() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> lines;
  for (const auto& n : nodes_) {
    if (!n.deleted) lines.insert(n.id + "|" + format_double(n.threshold));
  }
  std::string joined = "dim=" + std::to_string(dim_) + "\n";
  for (const auto& l : lines) {
    joined += l;
    joined.push_back('\n');
  }
  return sha256_hex(joined);
}

}  // namespace pasa
