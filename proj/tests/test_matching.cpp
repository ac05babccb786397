// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include "generators.hpp"
#include "matcher.hpp"

using namespace pasa;
using pasa::testgen::random_agent;
using pasa::testgen::random_policy;
using pasa::testgen::random_unit_embedding;

namespace {

struct Fixture {
  ChunkStore chunks;
  SubscriptionStore subs;
  AgentRegistry agents;
  HnswIndex index{8};
  Matcher matcher;
  MatchOptions options;

  void add_agent(const AgentProfile& a) { agents.upsert(a); }

  void add_sub(const std::string& id, const std::string& agent_id, const Embedding& query,
               double threshold, TriggerStatus trigger) {
    Subscription s;
    s.subscription_id = id;
    s.agent_id = agent_id;
    s.query_embedding = query;
    s.similarity_threshold = threshold;
    s.trigger_status = trigger;
    index.insert(id, s.query_embedding, threshold);
    subs.insert(std::move(s));
  }

  ChunkEvent create(const std::string& id, const Embedding& e, const PolicyProfile& policy) {
    Chunk c;
    c.chunk_id = id;
    c.embedding = e;
    c.policy = policy;
    c.contributor_id = "x";
    c.created_at_us = 1;
    return chunks.create(std::move(c), 8);
  }

  std::vector<Notification> process(const ChunkEvent& ev) {
    return matcher.process_event(ev, chunks, subs, agents, index, options).notifications;
  }
};

PolicyProfile open_policy() {
  return PolicyProfile{1, false, false, false, JurisdictionSet::all()};
}

}  // namespace

TEST_CASE("activated event with no subscriptions yields nothing") {
  Fixture f;
  Rng rng(51);
  auto ev = f.create("c1", random_unit_embedding(rng, 8), open_policy());
  CHECK(f.process(ev).empty());
  auto activated = f.chunks.transition("c1", ChunkStatus::active, 2);
  CHECK(f.process(activated).empty());
}

TEST_CASE("single authorized subscription gets one notification with trigger=active") {
  Fixture f;
  Rng rng(52);
  Embedding e = random_unit_embedding(rng, 8);
  f.add_agent(AgentProfile{"a1", 5, Purpose::mixed, false, "EU"});
  f.add_sub("s1", "a1", e, 0.7, TriggerStatus::active);

  auto created = f.create("c1", e, open_policy());
  CHECK(f.process(created).empty());  // active-trigger sub ignores created

  auto activated = f.chunks.transition("c1", ChunkStatus::active, 2);
  auto notifications = f.process(activated);
  REQUIRE(notifications.size() == 1);
  CHECK(notifications[0].subscription_id == "s1");
  CHECK(notifications[0].agent_id == "a1");
  CHECK(notifications[0].trigger == NotificationTrigger::active);
  CHECK(notifications[0].similarity == 1.0);
}

TEST_CASE("proposed-trigger subscription fires on creation, policy still applies") {
  Fixture f;
  Rng rng(53);
  Embedding e = random_unit_embedding(rng, 8);
  f.add_agent(AgentProfile{"reviewer", 5, Purpose::mixed, false, "EU"});
  f.add_agent(AgentProfile{"marketer", 5, Purpose::marketing, false, "EU"});
  f.add_sub("s-rev", "reviewer", e, 0.7, TriggerStatus::proposed);
  f.add_sub("s-mkt", "marketer", e, 0.7, TriggerStatus::proposed);

  PolicyProfile dm_opt_out{1, true, false, false, JurisdictionSet::all()};
  auto created = f.create("c1", e, dm_opt_out);
  auto notifications = f.process(created);
  REQUIRE(notifications.size() == 1);  // marketing agent suppressed on review too
  CHECK(notifications[0].subscription_id == "s-rev");
  CHECK(notifications[0].trigger == NotificationTrigger::proposed);
}

TEST_CASE("superseded events and inactive subscriptions never match") {
  Fixture f;
  Rng rng(54);
  Embedding e = random_unit_embedding(rng, 8);
  f.add_agent(AgentProfile{"a1", 5, Purpose::mixed, false, "EU"});
  f.add_sub("s1", "a1", e, 0.5, TriggerStatus::both);

  auto created = f.create("c1", e, open_policy());
  CHECK(f.process(created).size() == 1);
  auto activated = f.chunks.transition("c1", ChunkStatus::active, 2);
  CHECK(f.process(activated).size() == 1);
  auto superseded = f.chunks.transition("c1", ChunkStatus::superseded, 3);
  CHECK(f.process(superseded).empty());

  // deactivate and re-check with a fresh chunk
  f.subs.deactivate("s1");
  f.index.remove("s1");
  auto created2 = f.create("c2", e, open_policy());
  CHECK(f.process(created2).empty());
}

TEST_CASE("idempotent replay: the same event twice emits nothing new") {
  Fixture f;
  Rng rng(55);
  Embedding e = random_unit_embedding(rng, 8);
  f.add_agent(AgentProfile{"a1", 5, Purpose::mixed, false, "EU"});
  f.add_sub("s1", "a1", e, 0.5, TriggerStatus::both);

  auto created = f.create("c1", e, open_policy());
  CHECK(f.process(created).size() == 1);
  CHECK(f.process(created).empty());  // replay

  auto activated = f.chunks.transition("c1", ChunkStatus::active, 2);
  CHECK(f.process(activated).size() == 1);
  CHECK(f.process(activated).empty());
}

TEST_CASE("unknown agent is skipped with an integrity warning") {
  Fixture f;
  Rng rng(56);
  Embedding e = random_unit_embedding(rng, 8);
  // subscription inserted with no registered agent (simulated dangling reference)
  f.add_sub("s1", "ghost", e, 0.5, TriggerStatus::both);

  auto created = f.create("c1", e, open_policy());
  auto outcome = f.matcher.process_event(created, f.chunks, f.subs, f.agents, f.index, f.options);
  CHECK(outcome.notifications.empty());
  REQUIRE(outcome.warnings.size() == 1);
  CHECK(outcome.warnings[0].find("ghost") != std::string::npos);
}

TEST_CASE("oracle equivalence on a randomized scenario") {
  const size_t dim = 8;
  Rng rng(57);
  Fixture f;
  std::vector<Embedding> centers;
  for (int i = 0; i < 3; ++i) centers.push_back(random_unit_embedding(rng, dim));

  for (int i = 0; i < 10; ++i) {
    AgentProfile a = random_agent(rng);
    a.agent_id = "a" + std::to_string(i);
    f.add_agent(a);
  }
  const TriggerStatus triggers[3] = {TriggerStatus::active, TriggerStatus::proposed,
                                     TriggerStatus::both};
  for (int i = 0; i < 25; ++i) {
    const Embedding& center = centers[rng.next_below(3)];
    std::vector<double> v(center.components().begin(), center.components().end());
    for (auto& x : v) x += 0.12 * rng.next_gaussian();
    f.add_sub("s" + std::to_string(i), "a" + std::to_string(rng.next_below(10)),
              Embedding::unit(std::move(v)), 0.6 + 0.3 * rng.next_unit(),
              triggers[rng.next_below(3)]);
  }

  std::set<OracleKey> engine_keys;
  for (int i = 0; i < 60; ++i) {
    const Embedding& center = centers[rng.next_below(3)];
    std::vector<double> v(center.components().begin(), center.components().end());
    for (auto& x : v) x += 0.12 * rng.next_gaussian();
    PolicyProfile policy = random_policy(rng);
    std::string id = "c" + std::to_string(i);
    auto created = f.create(id, Embedding::unit(std::move(v)), policy);
    for (const auto& n : f.process(created)) {
      engine_keys.insert({n.chunk_id, n.subscription_id, n.trigger});
    }
    int roll = rng.next_int(0, 2);
    if (roll >= 1) {
      auto activated = f.chunks.transition(id, ChunkStatus::active, i);
      for (const auto& n : f.process(activated)) {
        engine_keys.insert({n.chunk_id, n.subscription_id, n.trigger});
      }
    }
    if (roll == 2) {
      auto superseded = f.chunks.transition(id, ChunkStatus::superseded, i);
      CHECK(f.process(superseded).empty());
    }
  }

  auto oracle = oracle_notifications(f.chunks.snapshot(), f.subs.snapshot(),
                                     f.agents.snapshot(), OracleMode::governed);
  REQUIRE(engine_keys == oracle);

  // ungoverned minus governed is exactly the violation set
  auto ungoverned = oracle_notifications(f.chunks.snapshot(), f.subs.snapshot(),
                                         f.agents.snapshot(), OracleMode::ungoverned);
  auto agent_map = f.agents.snapshot();
  std::unordered_map<std::string, Chunk> chunk_map;
  for (const auto& c : f.chunks.snapshot()) chunk_map.emplace(c.chunk_id, c);
  std::unordered_map<std::string, std::string> sub_agent;
  for (const auto& s : f.subs.snapshot()) sub_agent[s.subscription_id] = s.agent_id;
  for (const auto& key : ungoverned) {
    bool authorized = evaluate_policy(agent_map.at(sub_agent.at(key.subscription_id)),
                                      chunk_map.at(key.chunk_id).policy)
                          .overall;
    CHECK(oracle.count(key) == (authorized ? 1u : 0u));
  }

  // enabled = {} governed is identical to ungoverned
  auto empty_dims = oracle_notifications(f.chunks.snapshot(), f.subs.snapshot(),
                                         f.agents.snapshot(), OracleMode::governed,
                                         DimensionSet::none());
  CHECK(empty_dims == ungoverned);
}

TEST_CASE("ablation monotonicity: more dimensions, fewer or equal violations") {
  Rng rng(58);
  // randomized subset pairs S ⊆ T on a small scenario
  Fixture f;
  Embedding e = random_unit_embedding(rng, 8);
  for (int i = 0; i < 8; ++i) {
    AgentProfile a = random_agent(rng);
    a.agent_id = "a" + std::to_string(i);
    f.add_agent(a);
    f.add_sub("s" + std::to_string(i), a.agent_id, e, 0.5, TriggerStatus::active);
  }
  std::vector<Chunk> chunk_snapshots;
  for (int i = 0; i < 30; ++i) {
    std::string id = "c" + std::to_string(i);
    f.create(id, e, random_policy(rng));
    f.chunks.transition(id, ChunkStatus::active, i);
  }
  chunk_snapshots = f.chunks.snapshot();

  auto violations_for = [&](DimensionSet dims) {
    auto keys = oracle_notifications(chunk_snapshots, f.subs.snapshot(), f.agents.snapshot(),
                                     OracleMode::governed, dims);
    uint64_t violations = 0;
    std::unordered_map<std::string, Chunk> chunk_map;
    for (const auto& c : chunk_snapshots) chunk_map.emplace(c.chunk_id, c);
    auto agent_map = f.agents.snapshot();
    std::unordered_map<std::string, std::string> sub_agent;
    for (const auto& s : f.subs.snapshot()) sub_agent[s.subscription_id] = s.agent_id;
    for (const auto& key : keys) {
      if (!evaluate_policy(agent_map.at(sub_agent.at(key.subscription_id)),
                           chunk_map.at(key.chunk_id).policy)
               .overall) {
        ++violations;
      }
    }
    return violations;
  };

  for (int trial = 0; trial < 50; ++trial) {
    DimensionSet small = DimensionSet::none(), large = DimensionSet::none();
    for (PolicyDimension d : kAllDimensions) {
      bool in_large = rng.next_bernoulli(0.6);
      if (in_large) {
        large.set(d);
        if (rng.next_bernoulli(0.5)) small.set(d);
      }
    }
    REQUIRE(small.subset_of(large));
    REQUIRE(violations_for(small) >= violations_for(large));
  }
  CHECK(violations_for(DimensionSet::all()) == 0);
}

TEST_CASE("compute_metrics identities") {
  Rng rng(59);
  Fixture f;
  Embedding e = random_unit_embedding(rng, 8);
  f.add_agent(AgentProfile{"a1", 5, Purpose::mixed, false, "EU"});
  f.add_sub("s1", "a1", e, 0.5, TriggerStatus::active);
  f.create("c1", e, open_policy());
  f.chunks.transition("c1", ChunkStatus::active, 1);

  std::unordered_map<std::string, Chunk> chunk_map;
  for (const auto& c : f.chunks.snapshot()) chunk_map.emplace(c.chunk_id, c);
  auto agent_map = f.agents.snapshot();

  std::set<OracleKey> governed = {{"c1", "s1", NotificationTrigger::active}};
  std::set<OracleKey> ungoverned = governed;

  Notification n;
  n.notification_id = "n1";
  n.sequence = 1;
  n.chunk_id = "c1";
  n.subscription_id = "s1";
  n.agent_id = "a1";
  n.similarity = 1.0;
  n.trigger = NotificationTrigger::active;

  // actual == oracle: zero violations, full compliance and recall
  MetricsReport m = compute_metrics({n}, governed, ungoverned, chunk_map, agent_map);
  CHECK(m.violations == 0);
  CHECK(m.compliance_rate == 1.0);
  CHECK(m.recall == 1.0);

  // empty actual with non-empty oracle: zero recall, compliance guarded to 1.0
  MetricsReport m2 = compute_metrics({}, governed, ungoverned, chunk_map, agent_map);
  CHECK(m2.recall == 0.0);
  CHECK(m2.compliance_rate == 1.0);

  // empty oracle: recall defined as 1.0
  MetricsReport m3 = compute_metrics({}, {}, {}, chunk_map, agent_map);
  CHECK(m3.recall == 1.0);
}
