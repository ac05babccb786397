// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "policy.hpp"
#include "types.hpp"

namespace pasa::bench {

// Per-domain policy flag distribution. sensitivity: with p_high_sensitivity
// the level is uniform in {4,5}, otherwise uniform in {1,2,3}. Jurisdictions:
// with p_jurisdiction_restricted the chunk allows only the restricted set,
// otherwise the wildcard.
struct DomainDist {
  std::string name;
  double p_high_sensitivity = 0.3;
  double p_marketing_opt_out = 0.3;
  double p_training_opt_out = 0.3;
  double p_scientific_opt_out = 0.1;
  double p_jurisdiction_restricted = 0.3;
};

struct ScenarioConfig {
  uint64_t seed = 42;
  uint32_t n_chunks = 1000;
  uint32_t n_agents = 50;
  uint32_t subs_per_agent_min = 1;
  uint32_t subs_per_agent_max = 3;
  double similarity_threshold = 0.7;
  uint32_t embedding_dim = 64;
  double proposed_fraction = 0.262;
  // Expected L2 norm of the per-chunk gaussian noise around the domain
  // center; dimension-independent by construction.
  double cluster_sigma = 0.35;
  double agent_training_p = 0.5;
  std::vector<std::string> agent_jurisdictions = {"EU", "US"};
  std::vector<std::string> restricted_jurisdictions = {"EU"};
  std::vector<DomainDist> domains;  // empty -> default_domains()

  // Experiment knobs.
  std::vector<uint32_t> scalability_sub_counts = {10, 50, 100, 500};
  uint32_t scalability_events = 200;
  uint32_t ablation_sample_chunks = 200;
  uint32_t adversarial_sample = 50;

  static std::vector<DomainDist> default_domains();
  Record to_record() const;
  static ScenarioConfig from_record(const Record& r);
  void validate_fields() const;
};

struct ScenarioChunk {
  std::string chunk_id;
  Embedding embedding;
  PolicyProfile policy;
  uint32_t domain = 0;
  bool stays_proposed = false;  // never activated in the event schedule
};

struct ScenarioSubscription {
  std::string subscription_id;  // matches the engine's deterministic id scheme
  std::string agent_id;
  Embedding query;
  double threshold = 0.7;
  uint32_t domain = 0;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<Embedding> domain_centers;
  std::vector<AgentProfile> agents;
  std::vector<ScenarioSubscription> subscriptions;
  std::vector<ScenarioChunk> chunks;

  // Final-state snapshots for the brute-force oracle.
  std::vector<Chunk> chunk_snapshots() const;
  std::vector<Subscription> subscription_snapshots() const;
  std::unordered_map<std::string, AgentProfile> agent_map() const;
};

// Deterministic in config.seed: byte-identical scenarios for identical configs.
Scenario generate_scenario(const ScenarioConfig& config);

// Verifies the cluster geometry: same-domain similarities should mostly clear
// the threshold, cross-domain ones mostly fall below it.
struct GeneratorSelfTest {
  double intra_mean = 0.0;
  double inter_mean = 0.0;
  double frac_intra_above_threshold = 0.0;
  double frac_inter_below_threshold = 0.0;
  bool ok = false;
};

GeneratorSelfTest generator_self_test(const Scenario& scenario);

}  // namespace pasa::bench
