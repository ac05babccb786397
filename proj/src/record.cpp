// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "record.hpp"

#include <charconv>

#include "errors.hpp"

namespace pasa {

namespace {

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string escape_value(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_value(std::string_view v) {
  std::string out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != '\\') {
      out.push_back(v[i]);
      continue;
    }
    if (i + 1 >= v.size()) throw ValidationError("dangling escape in record value");
    ++i;
    switch (v[i]) {
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw ValidationError("unknown escape in record value");
    }
  }
  return out;
}

}  // namespace

void Record::put(std::string key, std::string value) {
  if (!valid_key(key)) throw InternalError("invalid record key: " + key);
  entries_.emplace_back(std::move(key), std::move(value));
}

void Record::put_bool(std::string key, bool v) { put(std::move(key), v ? "true" : "false"); }
void Record::put_int(std::string key, int64_t v) { put(std::move(key), std::to_string(v)); }
void Record::put_uint(std::string key, uint64_t v) { put(std::move(key), std::to_string(v)); }
void Record::put_double(std::string key, double v) { put(std::move(key), format_double(v)); }

void Record::put_doubles(std::string key, std::span<const double> values) {
  std::string joined;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) joined.push_back(',');
    joined += format_double(values[i]);
  }
  put(std::move(key), std::move(joined));
}

bool Record::has(std::string_view key) const { return find(key).has_value(); }

std::optional<std::string> Record::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Record::get(std::string_view key) const {
  auto v = find(key);
  if (!v) throw ValidationError("missing field: " + std::string(key));
  return *v;
}

bool Record::get_bool(std::string_view key) const {
  auto v = get(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError("field " + std::string(key) + " is not a boolean: " + v);
}

int64_t Record::get_int(std::string_view key) const { return parse_int_strict(get(key)); }
uint64_t Record::get_uint(std::string_view key) const { return parse_uint_strict(get(key)); }
double Record::get_double(std::string_view key) const { return parse_double_strict(get(key)); }

std::vector<double> Record::get_doubles(std::string_view key) const {
  auto raw = get(key);
  std::vector<double> out;
  if (raw.empty()) return out;
  for (const auto& part : split(raw, ',')) {
    out.push_back(parse_double_strict(part));
  }
  return out;
}

std::optional<bool> Record::find_bool(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return get_bool(key);
}

std::optional<int64_t> Record::find_int(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return get_int(key);
}

std::optional<double> Record::find_double(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::string Record::encode() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out.push_back('=');
    out += escape_value(v);
    out.push_back('\n');
  }
  return out;
}

Record Record::parse(std::string_view text) {
  Record r;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line =
        (eol == std::string_view::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ValidationError("record line missing '='");
    std::string key(line.substr(0, eq));
    if (!valid_key(key)) throw ValidationError("invalid record key: " + key);
    r.entries_.emplace_back(std::move(key), unescape_value(line.substr(eq + 1)));
  }
  return r;
}

std::string encode_records(std::span<const Record> records) {
  std::string out;
  for (size_t i = 0; i < records.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += records[i].encode();
  }
  return out;
}

std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  size_t pos = 0;
  std::string chunk;
  auto flush = [&] {
    if (!chunk.empty()) {
      out.push_back(Record::parse(chunk));
      chunk.clear();
    }
  };
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line =
        (eol == std::string_view::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    if (line.empty()) {
      flush();
    } else {
      chunk.append(line);
      chunk.push_back('\n');
    }
  }
  flush();
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw InternalError("double formatting failed");
  return std::string(buf, end);
}

double parse_double_strict(std::string_view text) {
  double v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError("malformed number: " + std::string(text));
  }
  return v;
}

int64_t parse_int_strict(std::string_view text) {
  int64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError("malformed integer: " + std::string(text));
  }
  return v;
}

uint64_t parse_uint_strict(std::string_view text) {
  uint64_t v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ValidationError("malformed unsigned integer: " + std::string(text));
  }
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      return out;
    }
    out.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::string join(std::span<const std::string> parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace pasa
