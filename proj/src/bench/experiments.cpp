// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "bench/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "clock.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace pasa::bench {

namespace {

std::unordered_map<std::string, Chunk> chunk_map_of(const std::vector<Chunk>& chunks) {
  std::unordered_map<std::string, Chunk> out;
  for (const auto& c : chunks) out.emplace(c.chunk_id, c);
  return out;
}

std::vector<double> raw_components(const Embedding& e) {
  return {e.components().begin(), e.components().end()};
}

std::unique_ptr<Engine> fresh_engine(const Scenario& scenario, DimensionSet dims,
                                     LogicalClock& clock) {
  EngineConfig config;
  config.embedding_dim = scenario.config.embedding_dim;
  config.matching.enabled_dims = dims;
  return Engine::open(std::move(config), &clock);
}

void load_population(Engine& engine, const Scenario& scenario) {
  for (const auto& agent : scenario.agents) engine.register_agent(agent);
  for (const auto& sub : scenario.subscriptions) {
    CreateSubscriptionRequest request;
    request.agent_id = sub.agent_id;
    request.query_embedding = raw_components(sub.query);
    request.similarity_threshold = sub.threshold;
    request.trigger_status = TriggerStatus::active;
    request.method = NotificationMethod::polling_queue;
    std::string id = engine.create_subscription(request);
    if (id != sub.subscription_id) {
      throw InternalError("engine subscription id " + id + " diverged from scenario id " +
                          sub.subscription_id);
    }
  }
}

double percentile(std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) return 0.0;
  size_t rank = size_t(std::floor(p * double(sorted_values.size() - 1)));
  return sorted_values[rank];
}

}  // namespace

EngineRunResult run_engine_over_scenario(const Scenario& scenario, DimensionSet dims,
                                         const std::vector<uint32_t>& chunk_subset) {
  LogicalClock clock;
  auto engine = fresh_engine(scenario, dims, clock);
  load_population(*engine, scenario);

  std::vector<uint32_t> indexes = chunk_subset;
  if (indexes.empty()) {
    indexes.resize(scenario.chunks.size());
    for (uint32_t i = 0; i < indexes.size(); ++i) indexes[i] = i;
  }

  for (uint32_t i : indexes) {
    const ScenarioChunk& chunk = scenario.chunks[i];
    SubmitChunkRequest request;
    request.chunk_id = chunk.chunk_id;
    request.content = "domain:" + scenario.config.domains[chunk.domain].name;
    request.contributor_id = "bench";
    request.embedding = raw_components(chunk.embedding);
    request.policy = to_raw(chunk.policy);
    engine->submit_chunk(request);
  }
  for (uint32_t i : indexes) {
    const ScenarioChunk& chunk = scenario.chunks[i];
    if (!chunk.stays_proposed) engine->transition_chunk(chunk.chunk_id, ChunkStatus::active);
  }

  EngineRunResult result;
  result.notifications = engine->notifications_snapshot();
  result.keys = notification_keys(result.notifications);
  result.state_digest = engine->state_digest();
  return result;
}

// ---- compliance ---------------------------------------------------------------

ComplianceResult run_compliance(const Scenario& scenario) {
  ComplianceResult r;
  auto chunks = scenario.chunk_snapshots();
  auto subs = scenario.subscription_snapshots();
  auto agents = scenario.agent_map();

  r.oracle_governed = oracle_notifications(chunks, subs, agents, OracleMode::governed);
  r.oracle_ungoverned = oracle_notifications(chunks, subs, agents, OracleMode::ungoverned);

  auto governed_run = run_engine_over_scenario(scenario, DimensionSet::all());
  auto ungoverned_run = run_engine_over_scenario(scenario, DimensionSet::none());
  r.engine_governed = governed_run.keys;
  r.engine_ungoverned = ungoverned_run.keys;

  auto chunk_map = chunk_map_of(chunks);
  r.governed = compute_metrics(governed_run.notifications, r.oracle_governed, r.oracle_ungoverned,
                               chunk_map, agents);
  r.ungoverned = compute_metrics(ungoverned_run.notifications, r.oracle_governed,
                                 r.oracle_ungoverned, chunk_map, agents);

  r.identity_zero_violations = r.governed.violations == 0;
  r.identity_recall_100 = r.governed.recall == 1.0;
  r.identity_engine_equals_oracle =
      r.engine_governed == r.oracle_governed && r.engine_ungoverned == r.oracle_ungoverned;
  r.identity_ungoverned_recall_100 = r.ungoverned.recall == 1.0;
  return r;
}

// ---- ablation -------------------------------------------------------------------

Scenario build_ablation_fixture(uint32_t embedding_dim) {
  if (embedding_dim < 5) throw ValidationError("fixture needs embedding_dim >= 5");
  Scenario s;
  s.config.embedding_dim = embedding_dim;
  s.config.n_chunks = 5;
  s.config.n_agents = 5;
  s.config.similarity_threshold = 0.7;
  s.config.proposed_fraction = 0.0;
  s.config.domains = ScenarioConfig::default_domains();

  auto basis = [&](uint32_t axis) {
    std::vector<double> v(embedding_dim, 0.0);
    v[axis] = 1.0;
    return Embedding::require_unit(std::move(v));
  };

  // Pair i fails exactly dimension i and passes the other four.
  struct PairSpec {
    PolicyProfile policy;
    AgentProfile agent;
  };
  std::vector<PairSpec> pairs(5);

  // level: λ=5 vs l=1
  pairs[0].policy = {5, false, false, false, JurisdictionSet::all()};
  pairs[0].agent = {"fx-agent-level", 1, Purpose::mixed, false, "EU"};
  // direct_marketing: δ=1 vs marketing purpose
  pairs[1].policy = {1, true, false, false, JurisdictionSet::all()};
  pairs[1].agent = {"fx-agent-dm", 5, Purpose::marketing, false, "EU"};
  // training_opt_out: τ=1 vs training_use
  pairs[2].policy = {1, false, true, false, JurisdictionSet::all()};
  pairs[2].agent = {"fx-agent-train", 5, Purpose::mixed, true, "EU"};
  // scientific_opt_out: ρ=1 vs scientific purpose
  pairs[3].policy = {1, false, false, true, JurisdictionSet::all()};
  pairs[3].agent = {"fx-agent-sci", 5, Purpose::scientific, false, "EU"};
  // jurisdiction: J={EU} vs US agent
  pairs[4].policy = {1, false, false, false, JurisdictionSet::of({"EU"})};
  pairs[4].agent = {"fx-agent-jur", 5, Purpose::mixed, false, "US"};

  for (uint32_t i = 0; i < 5; ++i) {
    s.agents.push_back(pairs[i].agent);

    ScenarioSubscription sub;
    sub.subscription_id = "sub-" + std::string(5 - 1, '0') + "0" /*placeholder*/;
    sub.subscription_id = [&] {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "sub-%06u", i + 1);
      return std::string(buf);
    }();
    sub.agent_id = pairs[i].agent.agent_id;
    sub.query = basis(i);
    sub.threshold = 0.7;
    sub.domain = i % 5;
    s.subscriptions.push_back(std::move(sub));

    ScenarioChunk chunk;
    chunk.chunk_id = [&] {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "chunk-%06u", i + 1);
      return std::string(buf);
    }();
    chunk.embedding = basis(i);  // orthogonal: each subscription sees only its own chunk
    chunk.policy = pairs[i].policy;
    chunk.domain = i % 5;
    chunk.stays_proposed = false;
    s.chunks.push_back(std::move(chunk));
  }
  return s;
}

AblationResult run_ablation(const Scenario& scenario) {
  AblationResult result;
  const auto& cfg = scenario.config;

  // Uniform sample of chunks, scenario-seeded.
  Rng sample_rng = Rng(cfg.seed).fork(6);
  std::vector<uint32_t> all(scenario.chunks.size());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  uint32_t take = std::min<uint32_t>(cfg.ablation_sample_chunks, uint32_t(all.size()));
  for (uint32_t i = 0; i < take; ++i) {
    uint32_t j = i + sample_rng.next_below(uint32_t(all.size()) - i);
    std::swap(all[i], all[j]);
  }
  result.sampled_chunks.assign(all.begin(), all.begin() + take);
  std::sort(result.sampled_chunks.begin(), result.sampled_chunks.end());

  // Snapshots restricted to the sample, for per-row oracle checks.
  auto full_chunks = scenario.chunk_snapshots();
  std::vector<Chunk> sampled_chunks;
  for (uint32_t i : result.sampled_chunks) sampled_chunks.push_back(full_chunks[i]);
  auto subs = scenario.subscription_snapshots();
  auto agents = scenario.agent_map();
  auto chunk_map = chunk_map_of(sampled_chunks);

  using D = PolicyDimension;
  struct RowSpec {
    std::string label;
    DimensionSet dims;
    bool chain;
  };
  std::vector<RowSpec> specs = {
      {"none (ungoverned)", DimensionSet::none(), true},
      {"level", DimensionSet::of({D::level}), true},
      {"level+direct_marketing", DimensionSet::of({D::level, D::direct_marketing}), true},
      {"level+direct_marketing+training_opt_out",
       DimensionSet::of({D::level, D::direct_marketing, D::training_opt_out}), true},
      {"all dimensions", DimensionSet::all(), true},
      {"direct_marketing only", DimensionSet::of({D::direct_marketing}), false},
      {"training_opt_out only", DimensionSet::of({D::training_opt_out}), false},
      {"scientific_opt_out only", DimensionSet::of({D::scientific_opt_out}), false},
      {"jurisdiction only", DimensionSet::of({D::jurisdiction}), false},
  };

  auto ungoverned_oracle =
      oracle_notifications(sampled_chunks, subs, agents, OracleMode::ungoverned);

  for (const RowSpec& spec : specs) {
    auto run = run_engine_over_scenario(scenario, spec.dims, result.sampled_chunks);
    auto row_oracle =
        oracle_notifications(sampled_chunks, subs, agents, OracleMode::governed, spec.dims);

    AblationRow row;
    row.label = spec.label;
    row.dims = spec.dims;
    row.chain_row = spec.chain;
    row.notifications = run.notifications.size();
    MetricsReport metrics =
        compute_metrics(run.notifications, row_oracle, ungoverned_oracle, chunk_map, agents);
    row.violations = metrics.violations;
    row.engine_equals_oracle = run.keys == row_oracle;

    if (spec.dims.is_none()) {
      result.baseline_notifications = row.notifications;
      result.baseline_violations = row.violations;
    }
    result.rows.push_back(std::move(row));
  }

  for (AblationRow& row : result.rows) {
    row.blocked = result.baseline_notifications - row.notifications;
    row.block_rate = result.baseline_violations == 0
                         ? 1.0
                         : double(row.blocked) / double(result.baseline_violations);
  }

  result.identity_full_set_zero = false;
  result.identity_chain_monotone = true;
  result.identity_rows_match_oracle = true;
  uint64_t prev_blocked = 0;
  for (const AblationRow& row : result.rows) {
    if (row.dims.is_all() && row.violations == 0) result.identity_full_set_zero = true;
    if (!row.engine_equals_oracle) result.identity_rows_match_oracle = false;
    if (row.chain_row) {
      if (row.blocked < prev_blocked) result.identity_chain_monotone = false;
      prev_blocked = row.blocked;
    }
  }

  // Crafted fixture: every proper subset leaves at least one violation.
  Scenario fixture = build_ablation_fixture(cfg.embedding_dim);
  auto fixture_chunks = fixture.chunk_snapshots();
  auto fixture_map = chunk_map_of(fixture_chunks);
  auto fixture_agents = fixture.agent_map();
  auto fixture_ungoverned = oracle_notifications(fixture_chunks, fixture.subscription_snapshots(),
                                                 fixture_agents, OracleMode::ungoverned);
  result.fixture_proper_subsets_leak = true;
  for (uint8_t bits = 0; bits < 0b11111; ++bits) {
    DimensionSet dims = DimensionSet::none();
    for (PolicyDimension d : kAllDimensions) {
      if (bits & (1u << uint8_t(d))) dims.set(d);
    }
    auto run = run_engine_over_scenario(fixture, dims);
    MetricsReport metrics = compute_metrics(
        run.notifications, std::set<OracleKey>{}, fixture_ungoverned, fixture_map, fixture_agents);
    if (metrics.violations < 1) {
      result.fixture_proper_subsets_leak = false;
      break;
    }
  }
  {
    auto run = run_engine_over_scenario(fixture, DimensionSet::all());
    MetricsReport metrics = compute_metrics(
        run.notifications, std::set<OracleKey>{}, fixture_ungoverned, fixture_map, fixture_agents);
    result.fixture_full_set_clean = metrics.violations == 0;
  }
  return result;
}

// ---- curation -------------------------------------------------------------------

CurationResult run_curation(const Scenario& scenario) {
  CurationResult r;
  auto run = run_engine_over_scenario(scenario, DimensionSet::all());
  r.enforced_total = run.notifications.size();
  for (const auto& n : run.notifications) {
    if (n.trigger == NotificationTrigger::active) {
      ++r.enforced_from_active;
    } else {
      ++r.enforced_from_proposed;
    }
  }

  auto unenforced = oracle_without_curation(scenario.chunk_snapshots(),
                                            scenario.subscription_snapshots(),
                                            scenario.agent_map());
  r.unenforced_total = unenforced.size();
  for (const auto& key : unenforced) {
    if (key.trigger == NotificationTrigger::active) {
      ++r.unenforced_from_active;
    } else {
      ++r.unenforced_from_proposed;
    }
  }

  r.identity_enforced_zero_proposed = r.enforced_from_proposed == 0;
  r.identity_validated_counts_equal = r.enforced_from_active == r.unenforced_from_active;
  r.identity_unenforced_leaks =
      scenario.config.proposed_fraction == 0.0 ? r.unenforced_from_proposed == 0
                                               : r.unenforced_from_proposed > 0;
  return r;
}

// ---- scalability ------------------------------------------------------------------

ScalabilityResult run_scalability(const Scenario& scenario) {
  ScalabilityResult result;
  const auto& cfg = scenario.config;
  const uint32_t n_domains = uint32_t(
      (cfg.domains.empty() ? ScenarioConfig::default_domains() : cfg.domains).size());
  auto domains = cfg.domains.empty() ? ScenarioConfig::default_domains() : cfg.domains;

  for (uint32_t count : cfg.scalability_sub_counts) {
    LogicalClock clock;
    EngineConfig engine_config;
    engine_config.embedding_dim = cfg.embedding_dim;
    auto engine = Engine::open(std::move(engine_config), &clock);

    for (const auto& agent : scenario.agents) engine->register_agent(agent);

    // Subscription population drawn like the scenario's, at the sweep size.
    Rng rng = Rng(cfg.seed).fork(700 + count);
    for (uint32_t i = 0; i < count; ++i) {
      uint32_t domain = rng.next_below(n_domains);
      std::vector<double> q(scenario.domain_centers[domain].components().begin(),
                            scenario.domain_centers[domain].components().end());
      double per_component = cfg.cluster_sigma / std::sqrt(double(cfg.embedding_dim));
      for (auto& x : q) x += per_component * rng.next_gaussian();

      CreateSubscriptionRequest request;
      request.agent_id = scenario.agents[i % scenario.agents.size()].agent_id;
      request.query_embedding = std::move(q);
      request.similarity_threshold = cfg.similarity_threshold;
      engine->create_subscription(request);
    }

    // Probe events drawn uniformly on the sphere: they isolate index and
    // policy-filter scaling from notification volume, which in this synthetic
    // corpus would otherwise grow linearly with the subscription count.
    Rng probe_rng = Rng(cfg.seed).fork(800 + count);
    std::vector<std::string> probe_ids;
    for (uint32_t i = 0; i < cfg.scalability_events; ++i) {
      std::vector<double> v(cfg.embedding_dim);
      for (auto& x : v) x = probe_rng.next_gaussian();

      SubmitChunkRequest request;
      request.contributor_id = "bench";
      request.content = "probe";
      request.embedding = std::move(v);
      RawPolicy open_policy;
      open_policy.sensitivity_level = 1;
      open_policy.marketing_opt_out = false;
      open_policy.training_opt_out = false;
      open_policy.scientific_opt_out = false;
      open_policy.allowed_jurisdictions = JurisdictionSet::all();
      request.policy = open_policy;
      probe_ids.push_back(engine->submit_chunk(request));
    }

    std::vector<double> latencies_us;
    latencies_us.reserve(probe_ids.size());
    for (const auto& id : probe_ids) {
      auto start = std::chrono::steady_clock::now();
      engine->transition_chunk(id, ChunkStatus::active);
      auto end = std::chrono::steady_clock::now();
      latencies_us.push_back(
          std::chrono::duration_cast<std::chrono::nanoseconds>(end - start).count() / 1000.0);
    }
    std::sort(latencies_us.begin(), latencies_us.end());

    ScalabilityPoint point;
    point.subscriptions = count;
    point.events = probe_ids.size();
    point.p50_us = percentile(latencies_us, 0.50);
    point.p95_us = percentile(latencies_us, 0.95);
    result.points.push_back(point);
  }

  if (!result.points.empty()) {
    auto [min_it, max_it] = std::minmax_element(
        result.points.begin(), result.points.end(),
        [](const ScalabilityPoint& a, const ScalabilityPoint& b) {
          return a.subscriptions < b.subscriptions;
        });
    result.p50_ratio = min_it->p50_us > 0.0 ? max_it->p50_us / min_it->p50_us : 0.0;
    result.identity_ratio_bounded = result.p50_ratio < 10.0 && result.p50_ratio > 0.0;
    result.identity_p95_ordering = std::all_of(
        result.points.begin(), result.points.end(),
        [](const ScalabilityPoint& p) { return p.p95_us >= p.p50_us; });
  }
  return result;
}

// ---- adversarial ------------------------------------------------------------------

AdversarialResult run_adversarial(const Scenario& scenario, const ComplianceResult& compliance) {
  AdversarialResult result;

  // (a) Escalation: subscriptions requesting a sensitivity ceiling above the
  // agent's declared level must be rejected at creation and never reach the
  // index.
  {
    LogicalClock clock;
    auto engine = fresh_engine(scenario, DimensionSet::all(), clock);
    load_population(*engine, scenario);
    auto index_before = engine->index_live_ids();

    Rng rng = Rng(scenario.config.seed).fork(9);
    for (const auto& agent : scenario.agents) {
      if (agent.handling_level >= 5) continue;
      ++result.escalation_attempts;
      CreateSubscriptionRequest request;
      request.agent_id = agent.agent_id;
      uint32_t domain = rng.next_below(uint32_t(scenario.domain_centers.size()));
      request.query_embedding = {scenario.domain_centers[domain].components().begin(),
                                 scenario.domain_centers[domain].components().end()};
      request.similarity_threshold = scenario.config.similarity_threshold;
      request.requested_max_sensitivity = rng.next_int(agent.handling_level + 1, 5);
      try {
        engine->create_subscription(request);
      } catch (const AuthorizationError&) {
        ++result.escalation_rejected;
      }
    }
    auto index_after = engine->index_live_ids();
    result.escalations_reached_index = index_after.size() != index_before.size();
  }
  result.identity_all_rejected = result.escalation_attempts == result.escalation_rejected;

  // (b) Cross-level: sampled high-sensitivity chunks must never reach
  // under-leveled agents in the governed mode.
  auto chunks = scenario.chunk_snapshots();
  auto agents = scenario.agent_map();
  std::vector<uint32_t> high;
  for (uint32_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].policy.sensitivity_level >= 4) high.push_back(i);
  }
  Rng sample_rng = Rng(scenario.config.seed).fork(10);
  for (uint32_t i = 0; i < high.size(); ++i) {
    uint32_t j = i + sample_rng.next_below(uint32_t(high.size()) - i);
    std::swap(high[i], high[j]);
  }
  uint32_t take = std::min<uint32_t>(scenario.config.adversarial_sample, uint32_t(high.size()));
  std::set<std::string> sampled_ids;
  for (uint32_t i = 0; i < take; ++i) sampled_ids.insert(chunks[high[i]].chunk_id);
  result.sampled_high_sensitivity = take;

  std::unordered_map<std::string, int> chunk_level;
  for (const auto& c : chunks) chunk_level[c.chunk_id] = c.policy.sensitivity_level;
  std::unordered_map<std::string, std::string> sub_owner;
  for (const auto& s : scenario.subscriptions) sub_owner[s.subscription_id] = s.agent_id;

  auto is_cross_level = [&](const OracleKey& key) {
    if (!sampled_ids.count(key.chunk_id)) return false;
    auto owner = sub_owner.find(key.subscription_id);
    if (owner == sub_owner.end()) return false;
    return agents.at(owner->second).handling_level < chunk_level.at(key.chunk_id);
  };

  for (const auto& key : compliance.engine_ungoverned) {
    if (is_cross_level(key)) {
      ++result.ungoverned_leaks;
      if (!compliance.engine_governed.count(key)) ++result.prevented;
    }
  }
  for (const auto& key : compliance.engine_governed) {
    if (is_cross_level(key)) ++result.governed_leaks;
  }

  result.vacuous = take == 0 || result.ungoverned_leaks == 0;
  result.prevention_rate = result.ungoverned_leaks == 0
                               ? 1.0
                               : double(result.prevented) / double(result.ungoverned_leaks);
  result.identity_full_prevention = result.governed_leaks == 0 && result.prevention_rate == 1.0;
  return result;
}

// ---- orchestration ----------------------------------------------------------------

bool BenchResults::all_identities_pass() const {
  if (!generator_check.ok) return false;
  if (compliance && !compliance->pass()) return false;
  if (ablation && !ablation->pass()) return false;
  if (curation && !curation->pass()) return false;
  if (scalability && !scalability->pass()) return false;
  if (adversarial && !adversarial->pass()) return false;
  return true;
}

BenchResults run_bench(const ScenarioConfig& config, const std::string& experiment) {
  BenchResults results;
  results.config = config;
  Scenario scenario = generate_scenario(config);
  results.generator_check = generator_self_test(scenario);

  auto timed = [](auto&& fn, int64_t& wall_ms) {
    auto start = std::chrono::steady_clock::now();
    auto value = fn();
    wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    return value;
  };

  bool all = experiment == "all";
  bool needs_compliance = all || experiment == "compliance" || experiment == "adversarial";
  if (needs_compliance) {
    results.compliance =
        timed([&] { return run_compliance(scenario); }, results.wall_ms_compliance);
  }
  if (all || experiment == "ablation") {
    results.ablation = timed([&] { return run_ablation(scenario); }, results.wall_ms_ablation);
  }
  if (all || experiment == "curation") {
    results.curation = timed([&] { return run_curation(scenario); }, results.wall_ms_curation);
  }
  if (all || experiment == "scalability") {
    results.scalability =
        timed([&] { return run_scalability(scenario); }, results.wall_ms_scalability);
  }
  if (all || experiment == "adversarial") {
    results.adversarial = timed([&] { return run_adversarial(scenario, *results.compliance); },
                                results.wall_ms_adversarial);
    if (experiment == "adversarial") {
      // compliance ran only as an input here; drop it from the report
      results.compliance.reset();
    }
  }
  return results;
}

}  // namespace pasa::bench
