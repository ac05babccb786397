// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "lifecycle.hpp"

#include "errors.hpp"

namespace pasa {

const char* to_string(ChunkEvent::Type t) {
  switch (t) {
    case ChunkEvent::Type::created: return "created";
    case ChunkEvent::Type::activated: return "activated";
    case ChunkEvent::Type::superseded: return "superseded";
  }
  return "unknown";
}

ChunkEvent::Type chunk_event_type_from_string(std::string_view s) {
  if (s == "created") return ChunkEvent::Type::created;
  if (s == "activated") return ChunkEvent::Type::activated;
  if (s == "superseded") return ChunkEvent::Type::superseded;
  throw ValidationError("unknown chunk event type: " + std::string(s));
}

ChunkEvent ChunkStore::create(Chunk chunk, uint32_t expected_dim) {
  if (chunk.chunk_id.empty()) throw ValidationError("chunk_id must not be empty");
  if (chunk.embedding.dim() != expected_dim) {
    throw ValidationError("chunk embedding dimension " + std::to_string(chunk.embedding.dim()) +
                          " does not match configured dimension " + std::to_string(expected_dim));
  }
  validate(chunk.policy);
  if (chunks_.count(chunk.chunk_id)) {
    throw StateError("duplicate chunk_id: " + chunk.chunk_id);
  }
  chunk.status = ChunkStatus::proposed;
  chunk.activated_at_us.reset();

  ChunkEvent event;
  event.type = ChunkEvent::Type::created;
  event.chunk_id = chunk.chunk_id;
  event.timestamp_us = chunk.created_at_us;
  event.sequence = ++event_sequence_;

  order_.push_back(chunk.chunk_id);
  chunks_.emplace(chunk.chunk_id, std::move(chunk));
  return event;
}

ChunkEvent ChunkStore::transition(const std::string& chunk_id, ChunkStatus to, int64_t now_us) {
  auto it = chunks_.find(chunk_id);
  if (it == chunks_.end()) throw NotFoundError("unknown chunk: " + chunk_id);
  Chunk& chunk = it->second;

  bool legal = (chunk.status == ChunkStatus::proposed && to == ChunkStatus::active) ||
               (chunk.status == ChunkStatus::proposed && to == ChunkStatus::superseded) ||
               (chunk.status == ChunkStatus::active && to == ChunkStatus::superseded);
  if (!legal) {
    throw StateError(std::string("illegal transition ") + to_string(chunk.status) + " -> " +
                     to_string(to) + " for chunk " + chunk_id);
  }

  chunk.status = to;
  ChunkEvent event;
  event.chunk_id = chunk_id;
  event.timestamp_us = now_us;
  event.sequence = ++event_sequence_;
  if (to == ChunkStatus::active) {
    chunk.activated_at_us = now_us;
    event.type = ChunkEvent::Type::activated;
  } else {
    event.type = ChunkEvent::Type::superseded;
  }
  return event;
}

const Chunk* ChunkStore::find(const std::string& chunk_id) const {
  auto it = chunks_.find(chunk_id);
  return it == chunks_.end() ? nullptr : &it->second;
}

const Chunk& ChunkStore::get(const std::string& chunk_id) const {
  const Chunk* c = find(chunk_id);
  if (!c) throw NotFoundError("unknown chunk: " + chunk_id);
  return *c;
}

size_t ChunkStore::count_with_status(ChunkStatus s) const {
  size_t n = 0;
  for (const auto& [_, c] : chunks_) {
    if (c.status == s) ++n;
  }
  return n;
}

std::vector<Chunk> ChunkStore::snapshot() const {
  std::vector<Chunk> out;
  out.reserve(order_.size());
  for (const auto& id : order_) out.push_back(chunks_.at(id));
  return out;
}

}  // namespace pasa
