// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pasa {

// Canonical key/value text format shared by the event log, the wire API, and
// the bench reports. One `key=value` pair per line; field names are stable;
// values are backslash-escaped (\n, \r, \\); booleans encode as true/false;
// doubles use shortest round-trip formatting. Records in a stream are
// separated by a single blank line.
class Record {
 public:
  Record() = default;

  void put(std::string key, std::string value);
  void put_bool(std::string key, bool v);
  void put_int(std::string key, int64_t v);
  void put_uint(std::string key, uint64_t v);
  void put_double(std::string key, double v);
  void put_doubles(std::string key, std::span<const double> values);

  bool has(std::string_view key) const;
  std::optional<std::string> find(std::string_view key) const;

  // Typed getters throw ValidationError when the key is missing or malformed.
  std::string get(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  int64_t get_int(std::string_view key) const;
  uint64_t get_uint(std::string_view key) const;
  double get_double(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;

  std::optional<bool> find_bool(std::string_view key) const;
  std::optional<int64_t> find_int(std::string_view key) const;
  std::optional<double> find_double(std::string_view key) const;

  std::string encode() const;
  static Record parse(std::string_view text);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string encode_records(std::span<const Record> records);
std::vector<Record> parse_records(std::string_view text);

// Shortest round-trip double formatting (std::to_chars).
std::string format_double(double v);
double parse_double_strict(std::string_view text);
int64_t parse_int_strict(std::string_view text);
uint64_t parse_uint_strict(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string join(std::span<const std::string> parts, char sep);

}  // namespace pasa
