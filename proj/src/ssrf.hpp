// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pasa {

struct ParsedUrl {
  std::string scheme;  // http or https
  std::string host;    // name or literal
  uint16_t port = 0;   // resolved default when absent
  std::string target;  // path + query, at least "/"
};

// Accepts http(s)://host[:port][/path][?query]; rejects userinfo, empty
// hosts, and unknown schemes.
ParsedUrl parse_http_url(const std::string& url);

struct IpAddress {
  bool v6 = false;
  std::array<uint8_t, 16> bytes = {};  // v4 uses the first 4 bytes

  std::string to_string() const;
  static std::optional<IpAddress> parse(const std::string& text);
};

// Publicly routable check: rejects loopback, private ranges (10/8, 172.16/12,
// 192.168/16), link-local (169.254/16 including the metadata service,
// fe80::/10), CGNAT (100.64/10), unspecified, broadcast, multicast,
// unique-local (fc00::/7), and IPv4-mapped IPv6 forms of all of these.
bool is_public_address(const IpAddress& addr);

using Resolver = std::function<std::vector<IpAddress>(const std::string& host)>;

// getaddrinfo-backed default; literal addresses parse without a lookup.
std::vector<IpAddress> system_resolve(const std::string& host);

struct SsrfPolicy {
  bool allow_private = false;  // local test harnesses only
  Resolver resolver;           // empty -> system_resolve
};

struct WebhookTarget {
  ParsedUrl url;
  std::vector<IpAddress> addresses;  // every resolved address, all validated
};

// Scheme violations -> ValidationError; resolution to any non-public address
// -> SsrfError (unless policy.allow_private). Callers re-run this at delivery
// time and connect to a validated address, which defeats DNS rebinding.
WebhookTarget validate_webhook_url(const std::string& url, const SsrfPolicy& policy);

}  // namespace pasa
