// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include <httplib.h>

#include "errors.hpp"
#include "config.hpp"
#include "engine.hpp"
#include "http_server.hpp"

using namespace pasa;

namespace {

struct Service {
  LogicalClock clock;
  std::unique_ptr<Engine> engine;
  std::unique_ptr<HttpService> http;
  std::unique_ptr<httplib::Client> client;

  Service() {
    ServiceConfig config;
    config.engine.embedding_dim = 4;
    config.engine.admin_token = "test-admin";
    config.listen_address = "127.0.0.1:0";
    engine = Engine::open(config.engine, &clock);
    http = std::make_unique<HttpService>(*engine, config);
    http->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", http->port());
  }

  httplib::Result post(const std::string& path, const std::string& body,
                       const std::string& token = "") {
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return client->Post(path, headers, body, "text/plain");
  }

  httplib::Result get(const std::string& path, const std::string& token = "") {
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return client->Get(path, headers);
  }

  httplib::Result del(const std::string& path, const std::string& token = "") {
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return client->Delete(path, headers);
  }

  std::string register_agent(const std::string& id, int level, const std::string& purpose,
                             bool training, const std::string& jur) {
    Record r;
    r.put("agent_id", id);
    r.put_int("handling_level", level);
    r.put("purpose", purpose);
    r.put_bool("training_use", training);
    r.put("jurisdiction", jur);
    auto res = post("/v1/agents", r.encode());
    REQUIRE(res);
    REQUIRE(res->status == 200);
    return Record::parse(res->body).get("token");
  }
};

std::string embedding_csv(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out.push_back(',');
    out += format_double(v);
  }
  return out;
}

}  // namespace

TEST_CASE("service end to end: agents, chunks, subscriptions, notifications") {
  Service svc;
  std::string token = svc.register_agent("agent-1", 5, "scientific", false, "EU");

  // submit a chunk with a partial policy (assume-worst normalization)
  Record chunk;
  chunk.put("chunk_id", "c1");
  chunk.put("content", "hello");
  chunk.put("embedding", embedding_csv({1, 0, 0, 0}));
  chunk.put_int("policy.sensitivity_level", 1);
  chunk.put_bool("policy.marketing_opt_out", false);
  chunk.put_bool("policy.training_opt_out", false);
  chunk.put_bool("policy.scientific_opt_out", false);
  chunk.put("policy.allowed_jurisdictions", "*");
  auto res = svc.post("/v1/chunks", chunk.encode(), token);
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(Record::parse(res->body).get("chunk_id") == "c1");

  // unauthenticated submission fails
  auto noauth = svc.post("/v1/chunks", chunk.encode());
  CHECK(noauth->status == 401);

  // subscription
  Record sub;
  sub.put("query_embedding", embedding_csv({1, 0, 0, 0}));
  sub.put_double("similarity_threshold", 0.7);
  auto sub_res = svc.post("/v1/subscriptions", sub.encode(), token);
  REQUIRE(sub_res);
  CHECK(sub_res->status == 200);
  std::string sub_id = Record::parse(sub_res->body).get("subscription_id");

  // transition requires the admin token
  Record status_body;
  status_body.put("status", "active");
  auto forbidden = svc.post("/v1/chunks/c1/status", status_body.encode(), token);
  CHECK(forbidden->status == 403);
  auto ok = svc.post("/v1/chunks/c1/status", status_body.encode(), "test-admin");
  CHECK(ok->status == 200);

  // poll
  auto poll = svc.get("/v1/notifications?since=0&limit=10", token);
  REQUIRE(poll);
  CHECK(poll->status == 200);
  auto records = parse_records(poll->body);
  REQUIRE(records.size() == 2);
  CHECK(records[0].get_uint("count") == 1);
  CHECK(records[1].get("chunk_id") == "c1");
  std::string notification_id = records[1].get("notification_id");

  // ack
  Record ack;
  ack.put("notification_ids", notification_id);
  auto ack_res = svc.post("/v1/notifications/ack", ack.encode(), token);
  REQUIRE(ack_res);
  CHECK(ack_res->status == 200);
  CHECK(Record::parse(ack_res->body).get_uint("acked") == 1);
  auto poll2 = svc.get("/v1/notifications", token);
  CHECK(parse_records(poll2->body)[0].get_uint("count") == 0);

  // delete subscription (owner only)
  std::string other_token = svc.register_agent("agent-2", 3, "mixed", false, "US");
  auto foreign_del = svc.del("/v1/subscriptions/" + sub_id, other_token);
  CHECK(foreign_del->status == 403);
  auto own_del = svc.del("/v1/subscriptions/" + sub_id, token);
  CHECK(own_del->status == 200);
}

TEST_CASE("service enforces read policy without existence oracle") {
  Service svc;
  // mixed purpose: not blocked by the assume-worst scientific opt-out
  std::string strong = svc.register_agent("strong", 5, "mixed", false, "EU");
  std::string weak = svc.register_agent("weak", 1, "marketing", false, "US");

  Record chunk;
  chunk.put("chunk_id", "c1");
  chunk.put("content", "restricted");
  chunk.put("embedding", embedding_csv({0, 1, 0, 0}));
  chunk.put_int("policy.sensitivity_level", 5);
  chunk.put("policy.allowed_jurisdictions", "EU");
  REQUIRE(svc.post("/v1/chunks", chunk.encode(), strong)->status == 200);

  auto allowed = svc.get("/v1/chunks/c1", strong);
  CHECK(allowed->status == 200);
  CHECK(Record::parse(allowed->body).get("content") == "restricted");

  auto denied = svc.get("/v1/chunks/c1", weak);
  auto missing = svc.get("/v1/chunks/zzz", weak);
  CHECK(denied->status == 404);
  CHECK(missing->status == 404);
  // identical error code: no policy detail leaked
  CHECK(Record::parse(denied->body).get("error") ==
        Record::parse(missing->body).get("error"));
}

TEST_CASE("service rejects escalation and validation errors with correct statuses") {
  Service svc;
  std::string token = svc.register_agent("agent-1", 2, "mixed", false, "EU");

  Record sub;
  sub.put("query_embedding", embedding_csv({1, 0, 0, 0}));
  sub.put_double("similarity_threshold", 0.7);
  sub.put_int("requested_max_sensitivity", 4);
  auto escal = svc.post("/v1/subscriptions", sub.encode(), token);
  CHECK(escal->status == 403);
  CHECK(Record::parse(escal->body).get("error") == "authorization");

  Record bad;
  bad.put("query_embedding", embedding_csv({1, 0, 0, 0}));
  bad.put_double("similarity_threshold", 1.7);
  CHECK(svc.post("/v1/subscriptions", bad.encode(), token)->status == 400);

  // duplicate chunk id -> 409
  Record chunk;
  chunk.put("chunk_id", "dup");
  chunk.put("content", "x");
  chunk.put("embedding", embedding_csv({1, 0, 0, 0}));
  CHECK(svc.post("/v1/chunks", chunk.encode(), token)->status == 200);
  CHECK(svc.post("/v1/chunks", chunk.encode(), token)->status == 409);

  // malformed body -> 400
  CHECK(svc.post("/v1/chunks", "not a record", token)->status == 400);

  // illegal transition -> 409
  Record status_body;
  status_body.put("status", "active");
  CHECK(svc.post("/v1/chunks/dup/status", status_body.encode(), "test-admin")->status == 200);
  CHECK(svc.post("/v1/chunks/dup/status", status_body.encode(), "test-admin")->status == 409);
  Record to_proposed;
  to_proposed.put("status", "proposed");
  CHECK(svc.post("/v1/chunks/dup/status", to_proposed.encode(), "test-admin")->status == 400);
}

TEST_CASE("re-registration requires the agent's own token") {
  Service svc;
  std::string token = svc.register_agent("agent-1", 3, "mixed", false, "EU");
  std::string other = svc.register_agent("agent-2", 3, "mixed", false, "EU");

  Record update;
  update.put("agent_id", "agent-1");
  update.put_int("handling_level", 5);
  update.put("purpose", "scientific");
  update.put_bool("training_use", false);
  update.put("jurisdiction", "EU");

  CHECK(svc.post("/v1/agents", update.encode())->status == 403);         // anonymous
  CHECK(svc.post("/v1/agents", update.encode(), other)->status == 403);  // wrong agent
  CHECK(svc.post("/v1/agents", update.encode(), token)->status == 200);  // self
  CHECK(svc.post("/v1/agents", update.encode(), "test-admin")->status == 200);  // admin
}

TEST_CASE("config parsing with env overrides") {
  std::string text =
      "embedding_dim=32\nhome_jurisdiction=US\nhnsw.m=8\nlisten_address=0.0.0.0:9999\n";
  ServiceConfig config = service_config_from_text(text, false);
  CHECK(config.engine.embedding_dim == 32);
  CHECK(config.engine.home_jurisdiction == "US");
  CHECK(config.engine.hnsw.m == 8);
  CHECK(config.listen_address == "0.0.0.0:9999");

  CHECK(config_env_name("hnsw.ef_search") == "PASA_HNSW_EF_SEARCH");
  setenv("PASA_EMBEDDING_DIM", "128", 1);
  ServiceConfig overridden = service_config_from_text(text, true);
  CHECK(overridden.engine.embedding_dim == 128);
  unsetenv("PASA_EMBEDDING_DIM");

  CHECK_THROWS_AS(service_config_from_text("embedding_dim=0\n", false), ValidationError);
  CHECK_THROWS_AS(service_config_from_text("hnsw.m=1\n", false), ValidationError);
}
