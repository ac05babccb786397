// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include <doctest.h>

#include "errors.hpp"
#include "generators.hpp"
#include "policy.hpp"

using namespace pasa;
using pasa::testgen::random_agent;
using pasa::testgen::random_policy;

namespace {

constexpr int kPropertyCases = 10000;

Chunk make_chunk(ChunkStatus status, PolicyProfile policy) {
  Chunk c;
  c.chunk_id = "c";
  std::vector<double> v(8, 0.0);
  v[0] = 1.0;
  c.embedding = Embedding::require_unit(v);
  c.status = status;
  c.policy = std::move(policy);
  return c;
}

Subscription make_sub(double threshold, TriggerStatus trigger) {
  Subscription s;
  s.subscription_id = "s";
  s.agent_id = "a";
  std::vector<double> v(8, 0.0);
  v[0] = 1.0;
  s.query_embedding = Embedding::require_unit(v);
  s.similarity_threshold = threshold;
  s.trigger_status = trigger;
  return s;
}

}  // namespace

TEST_CASE("normalize_policy assume-worst defaults") {
  RawPolicy empty;
  PolicyProfile p = normalize_policy(empty, "EU");
  CHECK(p.sensitivity_level == 5);
  CHECK(p.marketing_opt_out);
  CHECK(p.training_opt_out);
  CHECK(p.scientific_opt_out);
  CHECK(p.allowed_jurisdictions == JurisdictionSet::of({"EU"}));

  RawPolicy with_level;
  with_level.sensitivity_level = 2;
  PolicyProfile p2 = normalize_policy(with_level, "EU");
  CHECK(p2.sensitivity_level == 2);
  CHECK(p2.marketing_opt_out);

  RawPolicy bad;
  bad.sensitivity_level = 7;
  CHECK_THROWS_AS(normalize_policy(bad, "EU"), ValidationError);
  RawPolicy bad_low;
  bad_low.sensitivity_level = 0;
  CHECK_THROWS_AS(normalize_policy(bad_low, "EU"), ValidationError);
}

TEST_CASE("normalize_policy is idempotent") {
  Rng rng(101);
  for (int i = 0; i < kPropertyCases; ++i) {
    RawPolicy raw;
    if (rng.next_bernoulli(0.5)) raw.sensitivity_level = rng.next_int(1, 5);
    if (rng.next_bernoulli(0.5)) raw.marketing_opt_out = rng.next_bernoulli(0.5);
    if (rng.next_bernoulli(0.5)) raw.training_opt_out = rng.next_bernoulli(0.5);
    if (rng.next_bernoulli(0.5)) raw.scientific_opt_out = rng.next_bernoulli(0.5);
    if (rng.next_bernoulli(0.5)) raw.allowed_jurisdictions = JurisdictionSet::of({"US"});
    PolicyProfile once = normalize_policy(raw, "EU");
    PolicyProfile twice = normalize_policy(to_raw(once), "EU");
    REQUIRE(once == twice);
  }
}

TEST_CASE("evaluate_policy frozen examples") {
  // marketing agent, level too low, opted-out chunk
  AgentProfile a1{"a1", 3, Purpose::marketing, false, "EU"};
  PolicyProfile p1{5, true, false, false, JurisdictionSet::all()};
  PolicyDecision d1 = evaluate_policy(a1, p1);
  CHECK_FALSE(d1.overall);
  CHECK_FALSE(d1.dimension(PolicyDimension::level));
  CHECK_FALSE(d1.dimension(PolicyDimension::direct_marketing));
  CHECK(d1.dimension(PolicyDimension::training_opt_out));
  CHECK(d1.dimension(PolicyDimension::scientific_opt_out));
  CHECK(d1.dimension(PolicyDimension::jurisdiction));

  // scientific agent passes: marketing opt-out only blocks marketing,
  // training opt-out only blocks training use
  AgentProfile a2{"a2", 5, Purpose::scientific, false, "EU"};
  PolicyProfile p2{1, true, true, false, JurisdictionSet::of({"EU"})};
  PolicyDecision d2 = evaluate_policy(a2, p2);
  CHECK(d2.overall);
  for (PolicyDimension dim : kAllDimensions) CHECK(d2.dimension(dim));

  // mixed purpose passes both purpose-conditioned conjuncts
  AgentProfile a3{"a3", 5, Purpose::mixed, true, "US"};
  PolicyProfile p3{1, true, true, true, JurisdictionSet::of({"EU"})};
  PolicyDecision d3 = evaluate_policy(a3, p3);
  CHECK_FALSE(d3.overall);
  CHECK(d3.dimension(PolicyDimension::level));
  CHECK(d3.dimension(PolicyDimension::direct_marketing));
  CHECK_FALSE(d3.dimension(PolicyDimension::training_opt_out));
  CHECK(d3.dimension(PolicyDimension::scientific_opt_out));
  CHECK_FALSE(d3.dimension(PolicyDimension::jurisdiction));
}

TEST_CASE("policy soundness: any failed dimension fails overall") {
  Rng rng(102);
  for (int i = 0; i < kPropertyCases; ++i) {
    PolicyDecision d = evaluate_policy(random_agent(rng), random_policy(rng));
    bool conjunction = true;
    for (PolicyDimension dim : kAllDimensions) conjunction = conjunction && d.dimension(dim);
    REQUIRE(d.overall == conjunction);
    if (!conjunction) REQUIRE_FALSE(d.overall);
  }
}

TEST_CASE("dimension independence: one toggled field moves at most its own dimension") {
  Rng rng(103);
  for (int i = 0; i < kPropertyCases; ++i) {
    AgentProfile agent = random_agent(rng);
    PolicyProfile policy = random_policy(rng);
    PolicyDecision base = evaluate_policy(agent, policy);

    PolicyProfile toggled = policy;
    PolicyDimension expected;
    switch (rng.next_below(4)) {
      case 0:
        toggled.sensitivity_level = rng.next_int(1, 5);
        expected = PolicyDimension::level;
        break;
      case 1:
        toggled.marketing_opt_out = !toggled.marketing_opt_out;
        expected = PolicyDimension::direct_marketing;
        break;
      case 2:
        toggled.training_opt_out = !toggled.training_opt_out;
        expected = PolicyDimension::training_opt_out;
        break;
      default:
        toggled.scientific_opt_out = !toggled.scientific_opt_out;
        expected = PolicyDimension::scientific_opt_out;
        break;
    }
    PolicyDecision after = evaluate_policy(agent, toggled);
    for (PolicyDimension dim : kAllDimensions) {
      if (dim != expected) REQUIRE(after.dimension(dim) == base.dimension(dim));
    }
  }
}

TEST_CASE("monotonicity in handling level") {
  Rng rng(104);
  for (int i = 0; i < kPropertyCases; ++i) {
    AgentProfile agent = random_agent(rng);
    PolicyProfile policy = random_policy(rng);
    if (agent.handling_level >= 5) continue;
    if (!evaluate_policy(agent, policy).overall) continue;
    AgentProfile stronger = agent;
    stronger.handling_level += 1;
    REQUIRE(evaluate_policy(stronger, policy).overall);
  }
}

TEST_CASE("evaluate_dimension_subset") {
  AgentProfile agent{"a", 3, Purpose::marketing, true, "US"};
  PolicyProfile policy{5, true, true, true, JurisdictionSet::of({"EU"})};

  // empty conjunction is vacuously true
  CHECK(evaluate_dimension_subset(agent, policy, DimensionSet::none()).overall);
  // single enabled failing dimension fails
  CHECK_FALSE(
      evaluate_dimension_subset(agent, policy, DimensionSet::of({PolicyDimension::level})).overall);
  // disabled dimensions read true
  PolicyDecision d =
      evaluate_dimension_subset(agent, policy, DimensionSet::of({PolicyDimension::level}));
  CHECK(d.dimension(PolicyDimension::direct_marketing));

  CHECK_THROWS_AS(DimensionSet::decode("level,unknown_dim"), ValidationError);
}

TEST_CASE("ablation consistency: all five enabled equals evaluate_policy") {
  Rng rng(105);
  for (int i = 0; i < kPropertyCases; ++i) {
    AgentProfile agent = random_agent(rng);
    PolicyProfile policy = random_policy(rng);
    PolicyDecision full = evaluate_policy(agent, policy);
    PolicyDecision subset = evaluate_dimension_subset(agent, policy, DimensionSet::all());
    REQUIRE(full.overall == subset.overall);
    for (PolicyDimension dim : kAllDimensions) {
      REQUIRE(full.dimension(dim) == subset.dimension(dim));
    }
  }
}

TEST_CASE("notify_predicate frozen examples") {
  AgentProfile authorized{"a", 5, Purpose::mixed, false, "EU"};
  PolicyProfile open{1, false, false, false, JurisdictionSet::all()};

  // boundary: >= semantics includes the threshold itself
  CHECK(notify_predicate(make_sub(0.7, TriggerStatus::active), authorized,
                         make_chunk(ChunkStatus::active, open), 0.7));
  // curation guarantee: proposed chunk never triggers an active-only subscription
  CHECK_FALSE(notify_predicate(make_sub(0.7, TriggerStatus::active), authorized,
                               make_chunk(ChunkStatus::proposed, open), 0.95));
  // policy soundness: marketing opt-out suppresses a marketing agent
  AgentProfile marketer{"m", 5, Purpose::marketing, false, "EU"};
  PolicyProfile opt_out{1, true, false, false, JurisdictionSet::all()};
  CHECK_FALSE(notify_predicate(make_sub(0.7, TriggerStatus::active), marketer,
                               make_chunk(ChunkStatus::active, opt_out), 0.95));
  // superseded never matches, even for trigger both
  CHECK_FALSE(notify_predicate(make_sub(0.0, TriggerStatus::both), authorized,
                               make_chunk(ChunkStatus::superseded, open), 1.0));
  // trigger both accepts proposed and active
  CHECK(notify_predicate(make_sub(0.0, TriggerStatus::both), authorized,
                         make_chunk(ChunkStatus::proposed, open), 1.0));
  CHECK(notify_predicate(make_sub(0.0, TriggerStatus::both), authorized,
                         make_chunk(ChunkStatus::active, open), 1.0));
}

TEST_CASE("threshold boundary: similarity == threshold behaves like threshold + epsilon") {
  Rng rng(106);
  AgentProfile authorized{"a", 5, Purpose::mixed, false, "EU"};
  PolicyProfile open{1, false, false, false, JurisdictionSet::all()};
  for (int i = 0; i < kPropertyCases; ++i) {
    double threshold = rng.next_unit();
    Chunk chunk = make_chunk(ChunkStatus::active, open);
    Subscription sub = make_sub(threshold, TriggerStatus::active);
    bool at = notify_predicate(sub, authorized, chunk, threshold);
    bool above = notify_predicate(sub, authorized, chunk, threshold + 1e-6);
    REQUIRE(at == above);
    REQUIRE(at);
  }
}

TEST_CASE("curation_matches routing table") {
  CHECK(curation_matches(ChunkStatus::active, TriggerStatus::active));
  CHECK(curation_matches(ChunkStatus::active, TriggerStatus::both));
  CHECK_FALSE(curation_matches(ChunkStatus::active, TriggerStatus::proposed));
  CHECK(curation_matches(ChunkStatus::proposed, TriggerStatus::proposed));
  CHECK(curation_matches(ChunkStatus::proposed, TriggerStatus::both));
  CHECK_FALSE(curation_matches(ChunkStatus::proposed, TriggerStatus::active));
  CHECK_FALSE(curation_matches(ChunkStatus::superseded, TriggerStatus::active));
  CHECK_FALSE(curation_matches(ChunkStatus::superseded, TriggerStatus::proposed));
  CHECK_FALSE(curation_matches(ChunkStatus::superseded, TriggerStatus::both));
}
