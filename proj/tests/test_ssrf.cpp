// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include "errors.hpp"
#include "ssrf.hpp"

using namespace pasa;

namespace {

Resolver fake_resolver(std::vector<std::pair<std::string, std::string>> table) {
  return [table = std::move(table)](const std::string& host) {
    if (auto literal = IpAddress::parse(host)) return std::vector<IpAddress>{*literal};
    for (const auto& [name, ip] : table) {
      if (name == host) return std::vector<IpAddress>{*IpAddress::parse(ip)};
    }
    throw ValidationError("cannot resolve webhook host " + host);
  };
}

}  // namespace

TEST_CASE("url parsing") {
  ParsedUrl u = parse_http_url("https://example.org/hook?x=1");
  CHECK(u.scheme == "https");
  CHECK(u.host == "example.org");
  CHECK(u.port == 443);
  CHECK(u.target == "/hook?x=1");

  ParsedUrl u2 = parse_http_url("http://example.org:8080");
  CHECK(u2.port == 8080);
  CHECK(u2.target == "/");

  ParsedUrl u3 = parse_http_url("http://[::1]:9000/x");
  CHECK(u3.host == "::1");
  CHECK(u3.port == 9000);

  CHECK_THROWS_AS(parse_http_url("ftp://example.org/x"), ValidationError);
  CHECK_THROWS_AS(parse_http_url("example.org/x"), ValidationError);
  CHECK_THROWS_AS(parse_http_url("http://user:pw@example.org/"), ValidationError);
  CHECK_THROWS_AS(parse_http_url("http:///x"), ValidationError);
  CHECK_THROWS_AS(parse_http_url("http://example.org:99999/"), ValidationError);
}

TEST_CASE("address classification") {
  auto public_of = [](const char* ip) { return is_public_address(*IpAddress::parse(ip)); };
  CHECK(public_of("93.184.216.34"));
  CHECK(public_of("8.8.8.8"));
  CHECK_FALSE(public_of("127.0.0.1"));
  CHECK_FALSE(public_of("127.8.9.10"));
  CHECK_FALSE(public_of("10.1.2.3"));
  CHECK_FALSE(public_of("172.16.0.1"));
  CHECK_FALSE(public_of("172.31.255.254"));
  CHECK(public_of("172.32.0.1"));
  CHECK_FALSE(public_of("192.168.1.1"));
  CHECK_FALSE(public_of("169.254.169.254"));  // metadata service
  CHECK_FALSE(public_of("100.64.0.1"));       // CGNAT
  CHECK_FALSE(public_of("0.0.0.0"));
  CHECK_FALSE(public_of("224.0.0.1"));
  CHECK_FALSE(public_of("255.255.255.255"));
  CHECK_FALSE(public_of("::1"));
  CHECK_FALSE(public_of("::"));
  CHECK_FALSE(public_of("fe80::1"));
  CHECK_FALSE(public_of("fc00::1"));
  CHECK_FALSE(public_of("fd12:3456::1"));
  CHECK_FALSE(public_of("ff02::1"));
  CHECK(public_of("2606:2800:220:1:248:1893:25c8:1946"));
  CHECK_FALSE(public_of("::ffff:127.0.0.1"));  // v4-mapped loopback
  CHECK_FALSE(public_of("::ffff:10.0.0.1"));
  CHECK(public_of("::ffff:93.184.216.34"));
}

TEST_CASE("webhook validation accepts public, rejects private") {
  SsrfPolicy policy;
  policy.resolver = fake_resolver({{"example.org", "93.184.216.34"}});

  WebhookTarget t = validate_webhook_url("https://example.org/hook", policy);
  CHECK(t.addresses.size() == 1);
  CHECK(t.addresses[0].to_string() == "93.184.216.34");

  CHECK_THROWS_AS(validate_webhook_url("http://127.0.0.1/hook", policy), SsrfError);
  CHECK_THROWS_AS(validate_webhook_url("http://169.254.169.254/latest", policy), SsrfError);
  CHECK_THROWS_AS(validate_webhook_url("http://10.0.0.5:8000/x", policy), SsrfError);
  CHECK_THROWS_AS(validate_webhook_url("http://[::1]/x", policy), SsrfError);
}

TEST_CASE("hostname resolving to a private address is rejected") {
  SsrfPolicy policy;
  policy.resolver = fake_resolver({{"innocent.example", "192.168.0.10"}});
  CHECK_THROWS_AS(validate_webhook_url("http://innocent.example/hook", policy), SsrfError);
}

TEST_CASE("allow_private escape hatch for local harnesses") {
  SsrfPolicy policy;
  policy.allow_private = true;
  policy.resolver = fake_resolver({});
  WebhookTarget t = validate_webhook_url("http://127.0.0.1:8099/hook", policy);
  CHECK(t.addresses[0].to_string() == "127.0.0.1");
}

TEST_CASE("unresolvable host is a validation error") {
  SsrfPolicy policy;
  policy.resolver = fake_resolver({});
  CHECK_THROWS_AS(validate_webhook_url("http://no-such-host.invalid/", policy), ValidationError);
}
