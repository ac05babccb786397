// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "ssrf.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>

#include <cstring>

#include "errors.hpp"
#include "record.hpp"

namespace pasa {

ParsedUrl parse_http_url(const std::string& url) {
  ParsedUrl out;
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("URL has no scheme: " + url);
  out.scheme = url.substr(0, scheme_end);
  if (out.scheme != "http" && out.scheme != "https") {
    throw ValidationError("webhook scheme must be http or https, got " + out.scheme);
  }

  size_t rest = scheme_end + 3;
  size_t path_start = url.find_first_of("/?", rest);
  std::string authority =
      path_start == std::string::npos ? url.substr(rest) : url.substr(rest, path_start - rest);
  out.target = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (out.target[0] == '?') out.target = "/" + out.target;

  if (authority.find('@') != std::string::npos) {
    throw ValidationError("userinfo in webhook URL is not allowed");
  }
  if (authority.empty()) throw ValidationError("URL has no host: " + url);

  std::string port_text;
  if (authority[0] == '[') {
    // bracketed IPv6 literal
    size_t close = authority.find(']');
    if (close == std::string::npos) throw ValidationError("unterminated IPv6 literal in URL");
    out.host = authority.substr(1, close - 1);
    if (close + 1 < authority.size()) {
      if (authority[close + 1] != ':') throw ValidationError("malformed authority: " + authority);
      port_text = authority.substr(close + 2);
    }
  } else {
    size_t colon = authority.rfind(':');
    if (colon != std::string::npos) {
      out.host = authority.substr(0, colon);
      port_text = authority.substr(colon + 1);
    } else {
      out.host = authority;
    }
  }
  if (out.host.empty()) throw ValidationError("URL has no host: " + url);

  if (port_text.empty()) {
    out.port = out.scheme == "https" ? 443 : 80;
  } else {
    uint64_t p = parse_uint_strict(port_text);
    if (p == 0 || p > 65535) throw ValidationError("URL port out of range: " + port_text);
    out.port = uint16_t(p);
  }
  return out;
}

std::string IpAddress::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  if (v6) {
    inet_ntop(AF_INET6, bytes.data(), buf, sizeof(buf));
  } else {
    inet_ntop(AF_INET, bytes.data(), buf, sizeof(buf));
  }
  return buf;
}

std::optional<IpAddress> IpAddress::parse(const std::string& text) {
  IpAddress addr;
  in_addr v4{};
  if (inet_pton(AF_INET, text.c_str(), &v4) == 1) {
    addr.v6 = false;
    std::memcpy(addr.bytes.data(), &v4, 4);
    return addr;
  }
  in6_addr v6{};
  if (inet_pton(AF_INET6, text.c_str(), &v6) == 1) {
    addr.v6 = true;
    std::memcpy(addr.bytes.data(), &v6, 16);
    return addr;
  }
  return std::nullopt;
}

namespace {

bool is_public_v4(const uint8_t* b) {
  uint32_t a = uint32_t(b[0]) << 24 | uint32_t(b[1]) << 16 | uint32_t(b[2]) << 8 | uint32_t(b[3]);
  if ((a & 0xff000000u) == 0x00000000u) return false;  // 0.0.0.0/8
  if ((a & 0xff000000u) == 0x0a000000u) return false;  // 10/8
  if ((a & 0xff000000u) == 0x7f000000u) return false;  // 127/8 loopback
  if ((a & 0xffc00000u) == 0x64400000u) return false;  // 100.64/10 CGNAT
  if ((a & 0xfff00000u) == 0xac100000u) return false;  // 172.16/12
  if ((a & 0xffff0000u) == 0xa9fe0000u) return false;  // 169.254/16 link-local + metadata
  if ((a & 0xffff0000u) == 0xc0a80000u) return false;  // 192.168/16
  if ((a & 0xf0000000u) == 0xe0000000u) return false;  // 224/4 multicast
  if (a >= 0xf0000000u) return false;                  // 240/4 reserved + broadcast
  return true;
}

}  // namespace

bool is_public_address(const IpAddress& addr) {
  if (!addr.v6) return is_public_v4(addr.bytes.data());

  const uint8_t* b = addr.bytes.data();
  static const uint8_t v4_mapped_prefix[12] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xff, 0xff};
  if (std::memcmp(b, v4_mapped_prefix, 12) == 0) return is_public_v4(b + 12);

  bool all_zero = true;
  for (int i = 0; i < 16; ++i) {
    if (b[i] != 0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return false;  // ::
  static const uint8_t loopback[16] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1};
  if (std::memcmp(b, loopback, 16) == 0) return false;     // ::1
  if ((b[0] & 0xfe) == 0xfc) return false;                 // fc00::/7 unique-local
  if (b[0] == 0xfe && (b[1] & 0xc0) == 0x80) return false; // fe80::/10 link-local
  if (b[0] == 0xff) return false;                          // ff00::/8 multicast
  return true;
}

std::vector<IpAddress> system_resolve(const std::string& host) {
  if (auto literal = IpAddress::parse(host)) return {*literal};

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &results);
  if (rc != 0) {
    throw ValidationError("cannot resolve webhook host " + host + ": " + gai_strerror(rc));
  }
  std::vector<IpAddress> out;
  for (addrinfo* ai = results; ai; ai = ai->ai_next) {
    IpAddress addr;
    if (ai->ai_family == AF_INET) {
      addr.v6 = false;
      auto* sin = reinterpret_cast<sockaddr_in*>(ai->ai_addr);
      std::memcpy(addr.bytes.data(), &sin->sin_addr, 4);
    } else if (ai->ai_family == AF_INET6) {
      addr.v6 = true;
      auto* sin6 = reinterpret_cast<sockaddr_in6*>(ai->ai_addr);
      std::memcpy(addr.bytes.data(), &sin6->sin6_addr, 16);
    } else {
      continue;
    }
    out.push_back(addr);
  }
  freeaddrinfo(results);
  if (out.empty()) throw ValidationError("webhook host resolved to no addresses: " + host);
  return out;
}

WebhookTarget validate_webhook_url(const std::string& url, const SsrfPolicy& policy) {
  WebhookTarget target;
  target.url = parse_http_url(url);
  const Resolver& resolve = policy.resolver ? policy.resolver : system_resolve;
  target.addresses = resolve(target.url.host);
  if (target.addresses.empty()) {
    throw ValidationError("webhook host resolved to no addresses: " + target.url.host);
  }
  if (!policy.allow_private) {
    for (const IpAddress& addr : target.addresses) {
      if (!is_public_address(addr)) {
        throw SsrfError("webhook host " + target.url.host +
                        " resolves to a non-public address: " + addr.to_string());
      }
    }
  }
  return target;
}

}  // namespace pasa
