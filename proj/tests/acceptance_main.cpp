// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
//
// Acceptance suite. Runs each criterion against the default PASA scenario
// (seed 42) and prints one PASS/FAIL line per criterion. Exit code is the
// number of failed criteria.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bench/experiments.hpp"
#include "bench/report.hpp"
#include "bench/scenario.hpp"
#include "engine.hpp"
#include "exact_index.hpp"
#include "generators.hpp"
#include "hnsw_index.hpp"

using namespace pasa;
using namespace pasa::bench;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%d] %-28s %s  (%s)\n", number, name.c_str(), ok ? "PASS" : "FAIL",
              detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
             .count() /
         1000.0;
}

// ---- criteria 1 & 2: policy soundness and no false negatives -------------------

void criterion_compliance(const Scenario& scenario, const ComplianceResult& compliance,
                          double elapsed_s) {
  bool c1 = compliance.identity_zero_violations && elapsed_s < 60.0;
  report(1, "policy soundness", c1,
         "violations=" + std::to_string(compliance.governed.violations) + ", notifications=" +
             std::to_string(compliance.governed.actual_total) + ", runtime=" +
             std::to_string(elapsed_s) + "s");

  bool sets_equal = compliance.engine_governed == compliance.oracle_governed;
  bool c2 = sets_equal && compliance.governed.recall == 1.0;
  report(2, "no false negatives", c2,
         "engine=" + std::to_string(compliance.engine_governed.size()) + ", oracle=" +
             std::to_string(compliance.oracle_governed.size()) + ", recall=" +
             std::to_string(compliance.governed.recall) + ", scenario=" +
             std::to_string(scenario.chunks.size()) + " chunks");
}

// ---- criterion 3: ablation necessity --------------------------------------------

void criterion_ablation(const AblationResult& ablation) {
  bool ok = ablation.fixture_proper_subsets_leak && ablation.fixture_full_set_clean &&
            ablation.identity_chain_monotone && ablation.identity_full_set_zero;
  std::string detail = "proper subsets leak=" +
                       std::string(ablation.fixture_proper_subsets_leak ? "yes" : "NO") +
                       ", full set clean=" +
                       std::string(ablation.fixture_full_set_clean ? "yes" : "NO") +
                       ", chain monotone=" +
                       std::string(ablation.identity_chain_monotone ? "yes" : "NO");
  report(3, "ablation necessity", ok, detail);
}

// ---- criterion 4: curation guarantee ---------------------------------------------

void criterion_curation(const CurationResult& curation) {
  bool ok = curation.identity_enforced_zero_proposed && curation.unenforced_from_proposed > 0 &&
            curation.identity_validated_counts_equal;
  report(4, "curation guarantee", ok,
         "enforced from-proposed=" + std::to_string(curation.enforced_from_proposed) +
             ", unenforced from-proposed=" + std::to_string(curation.unenforced_from_proposed));
}

// ---- criterion 5: hnsw fidelity ---------------------------------------------------

struct RecallResult {
  double recall = 0.0;
  uint64_t oracle_hits = 0;
  bool exact = true;
};

RecallResult measure_recall(uint32_t n_subs, uint32_t n_queries, uint32_t dim, uint64_t seed,
                            int ef_search) {
  Rng rng(seed);
  std::vector<Embedding> centers;
  for (int i = 0; i < 5; ++i) centers.push_back(testgen::random_unit_embedding(rng, dim));
  auto clustered = [&](Rng& r) {
    uint32_t d = r.next_below(5);
    std::vector<double> v(centers[d].components().begin(), centers[d].components().end());
    double per_component = 0.35 / std::sqrt(double(dim));
    for (auto& x : v) x += per_component * r.next_gaussian();
    return Embedding::unit(std::move(v));
  };

  HnswParams params;
  params.ef_search = ef_search;
  HnswIndex hnsw(dim, params);
  ExactIndex exact(dim);
  for (uint32_t i = 0; i < n_subs; ++i) {
    std::string id = "s" + std::to_string(i);
    Embedding e = clustered(rng);
    hnsw.insert(id, e, 0.7);
    exact.insert(id, e, 0.7);
  }

  RecallResult result;
  uint64_t found = 0;
  for (uint32_t q = 0; q < n_queries; ++q) {
    Embedding query =
        q % 4 == 0 ? testgen::random_unit_embedding(rng, dim) : clustered(rng);
    auto expected = exact.match(query);
    auto actual = hnsw.match(query);
    result.oracle_hits += expected.size();
    // count exact-set agreement and accumulate recall numerator
    std::set<std::string> actual_ids;
    for (const auto& c : actual) actual_ids.insert(c.subscription_id);
    for (const auto& c : expected) {
      if (actual_ids.count(c.subscription_id)) ++found;
    }
    if (actual.size() != expected.size()) result.exact = false;
  }
  result.recall = result.oracle_hits == 0 ? 1.0 : double(found) / double(result.oracle_hits);
  return result;
}

void criterion_hnsw() {
  auto start = std::chrono::steady_clock::now();
  // Paper scale: 93 subscriptions, 1000 queries, recall must be 1.0.
  RecallResult paper_scale = measure_recall(93, 1000, 64, 4242, 100);
  // Graph-traversal path at the same scale (ef below the live count).
  RecallResult graph_path = measure_recall(93, 1000, 64, 4243, 8);
  // Desk-scale stress: 1000 subscriptions, recall >= 0.99.
  RecallResult large = measure_recall(1000, 1000, 64, 4244, 100);
  // Dimension independence: one run at the paper's d=1024.
  RecallResult high_dim = measure_recall(93, 200, 1024, 4245, 100);
  double elapsed = seconds_since(start);

  bool ok = paper_scale.recall == 1.0 && graph_path.recall == 1.0 && large.recall >= 0.99 &&
            high_dim.recall == 1.0 && paper_scale.oracle_hits > 0 && large.oracle_hits > 0 &&
            elapsed < 120.0;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "recall@93=%.4f, recall@93/ef8=%.4f, recall@1000=%.4f, recall@d1024=%.4f, "
                "runtime=%.1fs",
                paper_scale.recall, graph_path.recall, large.recall, high_dim.recall, elapsed);
  report(5, "hnsw fidelity", ok, buf);
}

// ---- criterion 6: scalability shape ----------------------------------------------

void criterion_scalability(const ScalabilityResult& scalability) {
  bool ok = scalability.identity_ratio_bounded && scalability.identity_p95_ordering;
  std::string detail = "p50 ratio=" + std::to_string(scalability.p50_ratio) + " (<10), points=";
  for (const auto& p : scalability.points) {
    detail += std::to_string(p.subscriptions) + ":" + std::to_string(p.p50_us) + "us ";
  }
  report(6, "scalability shape", ok, detail);
}

// ---- criterion 7: adversarial ------------------------------------------------------

void criterion_adversarial(const AdversarialResult& adversarial) {
  bool ok = adversarial.identity_all_rejected && adversarial.identity_full_prevention &&
            !adversarial.escalations_reached_index && !adversarial.vacuous;
  report(7, "adversarial", ok,
         "escalations " + std::to_string(adversarial.escalation_rejected) + "/" +
             std::to_string(adversarial.escalation_attempts) + " rejected, prevention " +
             std::to_string(adversarial.prevented) + "/" +
             std::to_string(adversarial.ungoverned_leaks));
}

// ---- criterion 8: determinism & recovery -------------------------------------------

void criterion_determinism(const ScenarioConfig& config) {
  BenchResults a = run_bench(config, "compliance");
  BenchResults b = run_bench(config, "compliance");
  bool reports_identical =
      strip_timing_lines(render_machine(a)) == strip_timing_lines(render_machine(b));

  // Crash recovery: run a governed slice through a logged engine, truncate the
  // tail mid-emission, reopen, compare notification sets.
  Scenario scenario = generate_scenario(config);
  auto tmp = std::filesystem::temp_directory_path() / "pasa_acceptance_crash.log";
  std::filesystem::remove(tmp);

  std::set<OracleKey> before;
  {
    LogicalClock clock;
    EngineConfig engine_config;
    engine_config.embedding_dim = config.embedding_dim;
    engine_config.log_path = tmp.string();
    auto engine = Engine::open(std::move(engine_config), &clock);
    for (const auto& agent : scenario.agents) engine->register_agent(agent);
    for (const auto& sub : scenario.subscriptions) {
      CreateSubscriptionRequest request;
      request.agent_id = sub.agent_id;
      request.query_embedding = {sub.query.components().begin(), sub.query.components().end()};
      request.similarity_threshold = sub.threshold;
      engine->create_subscription(request);
    }
    for (uint32_t i = 0; i < 120 && i < scenario.chunks.size(); ++i) {
      const auto& chunk = scenario.chunks[i];
      SubmitChunkRequest request;
      request.chunk_id = chunk.chunk_id;
      request.content = "bench";
      request.contributor_id = "bench";
      request.embedding = {chunk.embedding.components().begin(),
                           chunk.embedding.components().end()};
      request.policy = to_raw(chunk.policy);
      engine->submit_chunk(request);
      if (!chunk.stays_proposed) engine->transition_chunk(chunk.chunk_id, ChunkStatus::active);
    }
    before = notification_keys(engine->notifications_snapshot());
  }

  // Simulated crash: cut the last record (a notification emit, when present).
  bool recovered_equal = false;
  {
    auto read = EventLog::read(tmp.string());
    if (!read.records.empty()) {
      // byte offset of the final frame
      std::ifstream in(tmp.string(), std::ios::binary);
      std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      in.close();
      size_t pos = 0, last_start = 0;
      for (const auto& rec : read.records) {
        last_start = pos;
        size_t eol = data.find('\n', pos);
        pos = eol + 1 + rec.payload.size() + 1;
      }
      std::filesystem::resize_file(tmp, last_start);
    }
    LogicalClock clock;
    EngineConfig engine_config;
    engine_config.embedding_dim = config.embedding_dim;
    engine_config.log_path = tmp.string();
    auto engine = Engine::open(std::move(engine_config), &clock);
    recovered_equal = notification_keys(engine->notifications_snapshot()) == before;
  }
  std::filesystem::remove(tmp);

  report(8, "determinism & recovery", reports_identical && recovered_equal,
         std::string("reports identical=") + (reports_identical ? "yes" : "NO") +
             ", replay set equal=" + (recovered_equal ? "yes" : "NO"));
}

// ---- criterion 9: property suites ---------------------------------------------------

void criterion_properties() {
  constexpr int kCases = 10000;
  Rng rng(31337);
  bool soundness = true, independence = true, monotonicity = true, idempotence = true,
       boundary = true;

  for (int i = 0; i < kCases; ++i) {
    AgentProfile agent = testgen::random_agent(rng);
    PolicyProfile policy = testgen::random_policy(rng);
    PolicyDecision d = evaluate_policy(agent, policy);
    bool conjunction = true;
    for (PolicyDimension dim : kAllDimensions) conjunction = conjunction && d.dimension(dim);
    if (d.overall != conjunction) soundness = false;
  }

  for (int i = 0; i < kCases; ++i) {
    AgentProfile agent = testgen::random_agent(rng);
    PolicyProfile policy = testgen::random_policy(rng);
    PolicyDecision base = evaluate_policy(agent, policy);
    PolicyProfile toggled = policy;
    PolicyDimension expected = PolicyDimension::level;
    switch (rng.next_below(4)) {
      case 0: toggled.sensitivity_level = rng.next_int(1, 5); expected = PolicyDimension::level; break;
      case 1: toggled.marketing_opt_out = !toggled.marketing_opt_out; expected = PolicyDimension::direct_marketing; break;
      case 2: toggled.training_opt_out = !toggled.training_opt_out; expected = PolicyDimension::training_opt_out; break;
      default: toggled.scientific_opt_out = !toggled.scientific_opt_out; expected = PolicyDimension::scientific_opt_out; break;
    }
    PolicyDecision after = evaluate_policy(agent, toggled);
    for (PolicyDimension dim : kAllDimensions) {
      if (dim != expected && after.dimension(dim) != base.dimension(dim)) independence = false;
    }
  }

  for (int i = 0; i < kCases; ++i) {
    AgentProfile agent = testgen::random_agent(rng);
    PolicyProfile policy = testgen::random_policy(rng);
    if (agent.handling_level < 5 && evaluate_policy(agent, policy).overall) {
      AgentProfile stronger = agent;
      stronger.handling_level += 1;
      if (!evaluate_policy(stronger, policy).overall) monotonicity = false;
    }
  }

  for (int i = 0; i < kCases; ++i) {
    RawPolicy raw;
    if (rng.next_bernoulli(0.5)) raw.sensitivity_level = rng.next_int(1, 5);
    if (rng.next_bernoulli(0.5)) raw.marketing_opt_out = rng.next_bernoulli(0.5);
    if (rng.next_bernoulli(0.5)) raw.training_opt_out = rng.next_bernoulli(0.5);
    if (rng.next_bernoulli(0.5)) raw.scientific_opt_out = rng.next_bernoulli(0.5);
    PolicyProfile once = normalize_policy(raw, "EU");
    if (!(normalize_policy(to_raw(once), "EU") == once)) idempotence = false;
  }

  {
    AgentProfile agent{"a", 5, Purpose::mixed, false, "EU"};
    PolicyProfile open{1, false, false, false, JurisdictionSet::all()};
    Chunk chunk;
    chunk.chunk_id = "c";
    std::vector<double> v(8, 0.0);
    v[0] = 1.0;
    chunk.embedding = Embedding::require_unit(v);
    chunk.status = ChunkStatus::active;
    chunk.policy = open;
    Subscription sub;
    sub.subscription_id = "s";
    sub.agent_id = "a";
    sub.query_embedding = chunk.embedding;
    sub.trigger_status = TriggerStatus::active;
    for (int i = 0; i < kCases; ++i) {
      double threshold = rng.next_unit();
      sub.similarity_threshold = threshold;
      bool at = notify_predicate(sub, agent, chunk, threshold);
      bool above = notify_predicate(sub, agent, chunk, threshold + 1e-6);
      if (at != above || !at) boundary = false;
    }
  }

  bool ok = soundness && independence && monotonicity && idempotence && boundary;
  report(9, "property suites", ok,
         std::string("soundness=") + (soundness ? "ok" : "FAIL") + ", independence=" +
             (independence ? "ok" : "FAIL") + ", monotonicity=" + (monotonicity ? "ok" : "FAIL") +
             ", idempotence=" + (idempotence ? "ok" : "FAIL") + ", boundary=" +
             (boundary ? "ok" : "FAIL") + ", 10000 cases each");
}

}  // namespace

int main() {
  std::printf("pasa acceptance suite (default scenario, seed 42)\n");
  ScenarioConfig config;  // seed 42, 1000 chunks, 50 agents

  Scenario scenario = generate_scenario(config);
  GeneratorSelfTest generator = generator_self_test(scenario);
  std::printf("generator self-test: intra=%.3f inter=%.3f %s\n", generator.intra_mean,
              generator.inter_mean, generator.ok ? "ok" : "FAILED");

  auto t0 = std::chrono::steady_clock::now();
  ComplianceResult compliance = run_compliance(scenario);
  double compliance_s = seconds_since(t0);
  criterion_compliance(scenario, compliance, compliance_s);

  criterion_ablation(run_ablation(scenario));
  criterion_curation(run_curation(scenario));
  criterion_hnsw();
  criterion_scalability(run_scalability(scenario));
  criterion_adversarial(run_adversarial(scenario, compliance));
  criterion_determinism(config);
  criterion_properties();

  if (!generator.ok) ++g_failures;
  std::printf("ACCEPTANCE: %d/9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
