// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "types.hpp"

namespace pasa {

struct ChunkEvent {
  enum class Type { created, activated, superseded };

  Type type = Type::created;
  std::string chunk_id;
  int64_t timestamp_us = 0;
  uint64_t sequence = 0;  // strictly increasing across all chunk events
};

const char* to_string(ChunkEvent::Type t);
ChunkEvent::Type chunk_event_type_from_string(std::string_view s);

// The chunk state machine. Legal status paths: P, P->A, P->S, P->A->S.
// created fires on create, activated on proposed->active, superseded on any
// transition to superseded. Only created and activated drive matching.
class ChunkStore {
 public:
  // Chunk arrives with status forced to proposed; duplicate ids are a
  // StateError, dimension mismatches a ValidationError.
  ChunkEvent create(Chunk chunk, uint32_t expected_dim);

  // Legal: proposed->active, proposed->superseded, active->superseded.
  ChunkEvent transition(const std::string& chunk_id, ChunkStatus to, int64_t now_us);

  const Chunk* find(const std::string& chunk_id) const;
  const Chunk& get(const std::string& chunk_id) const;  // NotFoundError

  size_t size() const { return chunks_.size(); }
  size_t count_with_status(ChunkStatus s) const;
  std::vector<Chunk> snapshot() const;  // insertion order

  uint64_t last_event_sequence() const { return event_sequence_; }
  void restore_event_sequence(uint64_t seq) { event_sequence_ = seq; }

 private:
  std::vector<std::string> order_;
  std::unordered_map<std::string, Chunk> chunks_;
  uint64_t event_sequence_ = 0;
};

}  // namespace pasa
