// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace pasa {

enum class LogRecordType {
  agent_upsert,
  chunk_create,
  chunk_transition,
  subscription_create,
  subscription_deactivate,
  notification_emit,
  delivery_update,
};

const char* to_string(LogRecordType t);
LogRecordType log_record_type_from_string(std::string_view s);

struct LogRecord {
  uint64_t sequence = 0;
  LogRecordType type = LogRecordType::agent_upsert;
  std::string payload;  // canonical record text
};

// Append-only log, the engine's source of truth. Frame layout per record:
//   rec <sequence> <type> <payload_len> <crc32_hex>\n
//   <payload bytes>\n
// The crc covers the payload bytes only. A reader stops at the first frame
// that fails to parse or checksum, reporting the valid prefix.
class EventLog {
 public:
  struct ReadResult {
    std::vector<LogRecord> records;
    bool truncated = false;
    std::string truncation_detail;
    size_t valid_bytes = 0;
  };

  // Reads the valid prefix of a log file; missing file yields an empty result.
  static ReadResult read(const std::string& path);

  // Opens for appending. If the tail of the file is corrupt it is cut back to
  // the last valid record so new appends never interleave with garbage.
  static std::unique_ptr<EventLog> open(const std::string& path);

  uint64_t append(LogRecordType type, std::string_view payload);
  uint64_t last_sequence() const { return last_sequence_; }
  const std::string& path() const { return path_; }

 private:
  EventLog(std::string path, uint64_t last_sequence);

  std::string path_;
  std::ofstream out_;
  uint64_t last_sequence_;
};

}  // namespace pasa
