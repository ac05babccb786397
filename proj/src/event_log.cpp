// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "event_log.hpp"

#include <filesystem>

#include "digest.hpp"
#include "errors.hpp"
#include "record.hpp"

namespace pasa {

const char* to_string(LogRecordType t) {
  switch (t) {
    case LogRecordType::agent_upsert: return "agent_upsert";
    case LogRecordType::chunk_create: return "chunk_create";
    case LogRecordType::chunk_transition: return "chunk_transition";
    case LogRecordType::subscription_create: return "subscription_create";
    case LogRecordType::subscription_deactivate: return "subscription_deactivate";
    case LogRecordType::notification_emit: return "notification_emit";
    case LogRecordType::delivery_update: return "delivery_update";
  }
  return "unknown";
}

LogRecordType log_record_type_from_string(std::string_view s) {
  if (s == "agent_upsert") return LogRecordType::agent_upsert;
  if (s == "chunk_create") return LogRecordType::chunk_create;
  if (s == "chunk_transition") return LogRecordType::chunk_transition;
  if (s == "subscription_create") return LogRecordType::subscription_create;
  if (s == "subscription_deactivate") return LogRecordType::subscription_deactivate;
  if (s == "notification_emit") return LogRecordType::notification_emit;
  if (s == "delivery_update") return LogRecordType::delivery_update;
  throw ValidationError("unknown log record type: " + std::string(s));
}

namespace {

std::string frame_record(uint64_t sequence, LogRecordType type, std::string_view payload) {
  char crc_hex[9];
  std::snprintf(crc_hex, sizeof(crc_hex), "%08x", crc32(payload));
  std::string frame = "rec " + std::to_string(sequence) + " " + to_string(type) + " " +
                      std::to_string(payload.size()) + " " + crc_hex + "\n";
  frame.append(payload);
  frame.push_back('\n');
  return frame;
}

}  // namespace

EventLog::ReadResult EventLog::read(const std::string& path) {
  ReadResult result;
  std::ifstream in(path, std::ios::binary);
  if (!in) return result;  // no log yet: empty state
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  size_t pos = 0;
  uint64_t expected_sequence = 1;
  auto stop = [&](std::string detail) {
    result.truncated = true;
    result.truncation_detail = std::move(detail);
  };

  while (pos < data.size()) {
    size_t eol = data.find('\n', pos);
    if (eol == std::string::npos) {
      stop("unterminated header at byte " + std::to_string(pos));
      return result;
    }
    std::string_view header(data.data() + pos, eol - pos);
    auto parts = split(header, ' ');
    if (parts.size() != 5 || parts[0] != "rec") {
      stop("malformed header at byte " + std::to_string(pos));
      return result;
    }
    uint64_t sequence, payload_len;
    LogRecordType type;
    uint32_t crc_expected;
    try {
      sequence = parse_uint_strict(parts[1]);
      type = log_record_type_from_string(parts[2]);
      payload_len = parse_uint_strict(parts[3]);
      crc_expected = uint32_t(std::stoul(parts[4], nullptr, 16));
    } catch (const std::exception&) {
      stop("unparseable header at byte " + std::to_string(pos));
      return result;
    }
    size_t payload_start = eol + 1;
    if (payload_start + payload_len + 1 > data.size()) {
      stop("truncated payload at record " + std::to_string(sequence));
      return result;
    }
    std::string_view payload(data.data() + payload_start, payload_len);
    if (data[payload_start + payload_len] != '\n') {
      stop("missing frame terminator at record " + std::to_string(sequence));
      return result;
    }
    if (crc32(payload) != crc_expected) {
      stop("checksum mismatch at record " + std::to_string(sequence));
      return result;
    }
    if (sequence != expected_sequence) {
      stop("sequence gap: expected " + std::to_string(expected_sequence) + ", found " +
           std::to_string(sequence));
      return result;
    }
    result.records.push_back(LogRecord{sequence, type, std::string(payload)});
    pos = payload_start + payload_len + 1;
    result.valid_bytes = pos;
    ++expected_sequence;
  }
  return result;
}

EventLog::EventLog(std::string path, uint64_t last_sequence)
    : path_(std::move(path)), last_sequence_(last_sequence) {
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw IoError("cannot open event log for append: " + path_);
}

std::unique_ptr<EventLog> EventLog::open(const std::string& path) {
  auto result = read(path);
  if (result.truncated) {
    // Cut the corrupt tail so appended records follow the valid prefix.
    std::filesystem::resize_file(path, result.valid_bytes);
  }
  uint64_t last = result.records.empty() ? 0 : result.records.back().sequence;
  return std::unique_ptr<EventLog>(new EventLog(path, last));
}

uint64_t EventLog::append(LogRecordType type, std::string_view payload) {
  uint64_t sequence = ++last_sequence_;
  std::string frame = frame_record(sequence, type, payload);
  out_.write(frame.data(), std::streamsize(frame.size()));
  out_.flush();
  if (!out_) throw IoError("failed to append to event log: " + path_);
  return sequence;
}

}  // namespace pasa
