// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bench/scenario.hpp"
#include "engine.hpp"
#include "matcher.hpp"

namespace pasa::bench {

// Full engine run over the scenario's event schedule (register agents, create
// subscriptions, submit all chunks, activate the non-proposed ones) with the
// given policy dimensions enabled. chunk_subset selects scenario chunk indexes
// (the ablation experiment samples); empty means all.
struct EngineRunResult {
  std::vector<Notification> notifications;
  std::set<OracleKey> keys;
  std::string state_digest;
};

EngineRunResult run_engine_over_scenario(const Scenario& scenario, DimensionSet dims,
                                         const std::vector<uint32_t>& chunk_subset = {});

struct ComplianceResult {
  MetricsReport governed;
  MetricsReport ungoverned;
  std::set<OracleKey> oracle_governed;
  std::set<OracleKey> oracle_ungoverned;
  std::set<OracleKey> engine_governed;
  std::set<OracleKey> engine_ungoverned;
  bool identity_zero_violations = false;
  bool identity_recall_100 = false;
  bool identity_engine_equals_oracle = false;
  bool identity_ungoverned_recall_100 = false;

  bool pass() const {
    return identity_zero_violations && identity_recall_100 && identity_engine_equals_oracle &&
           identity_ungoverned_recall_100;
  }
};

ComplianceResult run_compliance(const Scenario& scenario);

struct AblationRow {
  std::string label;
  DimensionSet dims;
  bool chain_row = false;  // part of the cumulative chain (monotonicity applies)
  uint64_t notifications = 0;
  uint64_t violations = 0;
  uint64_t blocked = 0;    // ungoverned notifications minus this row's
  double block_rate = 0.0; // blocked / ungoverned violations
  bool engine_equals_oracle = false;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  uint64_t baseline_notifications = 0;  // ungoverned over the sample
  uint64_t baseline_violations = 0;
  std::vector<uint32_t> sampled_chunks;
  bool identity_full_set_zero = false;
  bool identity_chain_monotone = false;
  bool identity_rows_match_oracle = false;
  // Crafted fixture: one (chunk, agent) pair per dimension, blockable only by
  // that dimension; every proper subset must leak, the full set must not.
  bool fixture_proper_subsets_leak = false;
  bool fixture_full_set_clean = false;

  bool pass() const {
    return identity_full_set_zero && identity_chain_monotone && identity_rows_match_oracle &&
           fixture_proper_subsets_leak && fixture_full_set_clean;
  }
};

AblationResult run_ablation(const Scenario& scenario);

// The crafted per-dimension fixture used by the ablation necessity check.
Scenario build_ablation_fixture(uint32_t embedding_dim);

struct CurationResult {
  uint64_t enforced_total = 0;
  uint64_t enforced_from_active = 0;
  uint64_t enforced_from_proposed = 0;
  uint64_t unenforced_total = 0;
  uint64_t unenforced_from_active = 0;
  uint64_t unenforced_from_proposed = 0;
  bool identity_enforced_zero_proposed = false;
  bool identity_validated_counts_equal = false;
  bool identity_unenforced_leaks = false;  // > 0 when proposed_fraction > 0

  bool pass() const {
    return identity_enforced_zero_proposed && identity_validated_counts_equal &&
           identity_unenforced_leaks;
  }
};

CurationResult run_curation(const Scenario& scenario);

struct ScalabilityPoint {
  uint32_t subscriptions = 0;
  uint64_t events = 0;
  double p50_us = 0.0;
  double p95_us = 0.0;
};

struct ScalabilityResult {
  std::vector<ScalabilityPoint> points;
  double p50_ratio = 0.0;  // largest vs smallest subscription count
  bool identity_ratio_bounded = false;  // < 10x
  bool identity_p95_ordering = false;

  bool pass() const { return identity_ratio_bounded && identity_p95_ordering; }
};

ScalabilityResult run_scalability(const Scenario& scenario);

struct AdversarialResult {
  uint32_t escalation_attempts = 0;
  uint32_t escalation_rejected = 0;
  bool escalations_reached_index = false;
  uint32_t sampled_high_sensitivity = 0;
  uint64_t ungoverned_leaks = 0;
  uint64_t governed_leaks = 0;
  uint64_t prevented = 0;
  double prevention_rate = 1.0;
  bool vacuous = false;  // no high-sensitivity chunks sampled or no leaks to prevent
  bool identity_all_rejected = false;
  bool identity_full_prevention = false;

  bool pass() const {
    return identity_all_rejected && identity_full_prevention && !escalations_reached_index;
  }
};

AdversarialResult run_adversarial(const Scenario& scenario, const ComplianceResult& compliance);

struct BenchResults {
  ScenarioConfig config;
  GeneratorSelfTest generator_check;
  std::optional<ComplianceResult> compliance;
  std::optional<AblationResult> ablation;
  std::optional<CurationResult> curation;
  std::optional<ScalabilityResult> scalability;
  std::optional<AdversarialResult> adversarial;
  int64_t wall_ms_compliance = 0;
  int64_t wall_ms_ablation = 0;
  int64_t wall_ms_curation = 0;
  int64_t wall_ms_scalability = 0;
  int64_t wall_ms_adversarial = 0;

  bool all_identities_pass() const;
};

// experiment in {compliance, ablation, curation, scalability, adversarial, all}
BenchResults run_bench(const ScenarioConfig& config, const std::string& experiment);

}  // namespace pasa::bench
