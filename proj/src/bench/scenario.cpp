// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "bench/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "rng.hpp"

namespace pasa::bench {

namespace {

std::string padded_id(const char* prefix, uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*llu", width, static_cast<unsigned long long>(value));
  return std::string(prefix) + buf;
}

Embedding random_unit_vector(Rng& rng, uint32_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.next_gaussian();
  return Embedding::unit(std::move(v));
}

// center + gaussian noise with expected L2 norm sigma, renormalized.
Embedding jitter_around(Rng& rng, const Embedding& center, double sigma) {
  const double per_component = sigma / std::sqrt(double(center.dim()));
  std::vector<double> v(center.components().begin(), center.components().end());
  for (auto& x : v) x += per_component * rng.next_gaussian();
  return Embedding::unit(std::move(v));
}

}  // namespace

std::vector<DomainDist> ScenarioConfig::default_domains() {
  return {
      {"medical", 0.6, 0.5, 0.4, 0.1, 0.5},
      {"financial", 0.5, 0.4, 0.3, 0.1, 0.3},
      {"ai_safety", 0.3, 0.2, 0.5, 0.1, 0.2},
      {"climate", 0.1, 0.1, 0.2, 0.05, 0.1},
      {"cybersecurity", 0.5, 0.3, 0.3, 0.1, 0.3},
  };
}

void ScenarioConfig::validate_fields() const {
  if (n_chunks == 0 || n_agents == 0) throw ValidationError("counts must be positive");
  if (subs_per_agent_min == 0 || subs_per_agent_min > subs_per_agent_max) {
    throw ValidationError("invalid subs_per_agent range");
  }
  if (proposed_fraction < 0.0 || proposed_fraction > 1.0) {
    throw ValidationError("proposed_fraction must be in [0, 1]");
  }
  if (similarity_threshold < 0.0 || similarity_threshold > 1.0) {
    throw ValidationError("similarity_threshold must be in [0, 1]");
  }
  if (embedding_dim == 0) throw ValidationError("embedding_dim must be positive");
  if (agent_jurisdictions.empty() || restricted_jurisdictions.empty()) {
    throw ValidationError("jurisdiction lists must not be empty");
  }
}

Record ScenarioConfig::to_record() const {
  Record r;
  r.put_uint("seed", seed);
  r.put_uint("n_chunks", n_chunks);
  r.put_uint("n_agents", n_agents);
  r.put_uint("subs_per_agent_min", subs_per_agent_min);
  r.put_uint("subs_per_agent_max", subs_per_agent_max);
  r.put_double("similarity_threshold", similarity_threshold);
  r.put_uint("embedding_dim", embedding_dim);
  r.put_double("proposed_fraction", proposed_fraction);
  r.put_double("cluster_sigma", cluster_sigma);
  r.put_double("agent_training_p", agent_training_p);
  r.put("agent_jurisdictions", join(agent_jurisdictions, ','));
  r.put("restricted_jurisdictions", join(restricted_jurisdictions, ','));
  const auto& doms = domains.empty() ? default_domains() : domains;
  for (size_t i = 0; i < doms.size(); ++i) {
    std::string p = "domain." + std::to_string(i) + ".";
    r.put(p + "name", doms[i].name);
    r.put_double(p + "p_high_sensitivity", doms[i].p_high_sensitivity);
    r.put_double(p + "p_marketing_opt_out", doms[i].p_marketing_opt_out);
    r.put_double(p + "p_training_opt_out", doms[i].p_training_opt_out);
    r.put_double(p + "p_scientific_opt_out", doms[i].p_scientific_opt_out);
    r.put_double(p + "p_jurisdiction_restricted", doms[i].p_jurisdiction_restricted);
  }
  std::string counts;
  for (size_t i = 0; i < scalability_sub_counts.size(); ++i) {
    if (i > 0) counts.push_back(',');
    counts += std::to_string(scalability_sub_counts[i]);
  }
  r.put("scalability_sub_counts", counts);
  r.put_uint("scalability_events", scalability_events);
  r.put_uint("ablation_sample_chunks", ablation_sample_chunks);
  r.put_uint("adversarial_sample", adversarial_sample);
  return r;
}

ScenarioConfig ScenarioConfig::from_record(const Record& r) {
  ScenarioConfig c;
  if (r.has("seed")) c.seed = r.get_uint("seed");
  if (r.has("n_chunks")) c.n_chunks = uint32_t(r.get_uint("n_chunks"));
  if (r.has("n_agents")) c.n_agents = uint32_t(r.get_uint("n_agents"));
  if (r.has("subs_per_agent_min")) c.subs_per_agent_min = uint32_t(r.get_uint("subs_per_agent_min"));
  if (r.has("subs_per_agent_max")) c.subs_per_agent_max = uint32_t(r.get_uint("subs_per_agent_max"));
  if (r.has("similarity_threshold")) c.similarity_threshold = r.get_double("similarity_threshold");
  if (r.has("embedding_dim")) c.embedding_dim = uint32_t(r.get_uint("embedding_dim"));
  if (r.has("proposed_fraction")) c.proposed_fraction = r.get_double("proposed_fraction");
  if (r.has("cluster_sigma")) c.cluster_sigma = r.get_double("cluster_sigma");
  if (r.has("agent_training_p")) c.agent_training_p = r.get_double("agent_training_p");
  if (r.has("agent_jurisdictions")) c.agent_jurisdictions = split(r.get("agent_jurisdictions"), ',');
  if (r.has("restricted_jurisdictions")) {
    c.restricted_jurisdictions = split(r.get("restricted_jurisdictions"), ',');
  }
  for (size_t i = 0;; ++i) {
    std::string p = "domain." + std::to_string(i) + ".";
    if (!r.has(p + "name")) break;
    DomainDist d;
    d.name = r.get(p + "name");
    d.p_high_sensitivity = r.get_double(p + "p_high_sensitivity");
    d.p_marketing_opt_out = r.get_double(p + "p_marketing_opt_out");
    d.p_training_opt_out = r.get_double(p + "p_training_opt_out");
    d.p_scientific_opt_out = r.get_double(p + "p_scientific_opt_out");
    d.p_jurisdiction_restricted = r.get_double(p + "p_jurisdiction_restricted");
    c.domains.push_back(std::move(d));
  }
  if (r.has("scalability_sub_counts")) {
    c.scalability_sub_counts.clear();
    for (const auto& part : split(r.get("scalability_sub_counts"), ',')) {
      c.scalability_sub_counts.push_back(uint32_t(parse_uint_strict(part)));
    }
  }
  if (r.has("scalability_events")) c.scalability_events = uint32_t(r.get_uint("scalability_events"));
  if (r.has("ablation_sample_chunks")) {
    c.ablation_sample_chunks = uint32_t(r.get_uint("ablation_sample_chunks"));
  }
  if (r.has("adversarial_sample")) c.adversarial_sample = uint32_t(r.get_uint("adversarial_sample"));
  c.validate_fields();
  return c;
}

Scenario generate_scenario(const ScenarioConfig& config_in) {
  ScenarioConfig config = config_in;
  config.validate_fields();
  if (config.domains.empty()) config.domains = ScenarioConfig::default_domains();

  Scenario s;
  s.config = config;

  Rng root(config.seed);
  Rng centers_rng = root.fork(1);
  Rng agents_rng = root.fork(2);
  Rng subs_rng = root.fork(3);
  Rng chunks_rng = root.fork(4);
  Rng proposed_rng = root.fork(5);

  const uint32_t n_domains = uint32_t(config.domains.size());
  for (uint32_t d = 0; d < n_domains; ++d) {
    s.domain_centers.push_back(random_unit_vector(centers_rng, config.embedding_dim));
  }

  // Agents: uniform handling levels and purposes.
  const Purpose purposes[3] = {Purpose::scientific, Purpose::marketing, Purpose::mixed};
  for (uint32_t i = 0; i < config.n_agents; ++i) {
    AgentProfile a;
    a.agent_id = padded_id("agent-", i + 1, 4);
    a.handling_level = agents_rng.next_int(1, 5);
    a.purpose = purposes[agents_rng.next_below(3)];
    a.training_use = agents_rng.next_bernoulli(config.agent_training_p);
    a.jurisdiction =
        config.agent_jurisdictions[agents_rng.next_below(uint32_t(config.agent_jurisdictions.size()))];
    s.agents.push_back(std::move(a));
  }

  // Subscriptions: 1..3 per agent, each around a uniformly chosen domain
  // center. Ids follow the engine's deterministic creation-order scheme so
  // the oracle and the engine can be compared key-for-key.
  uint64_t sub_counter = 0;
  for (uint32_t i = 0; i < config.n_agents; ++i) {
    uint32_t count = uint32_t(
        subs_rng.next_int(int(config.subs_per_agent_min), int(config.subs_per_agent_max)));
    for (uint32_t k = 0; k < count; ++k) {
      ScenarioSubscription sub;
      sub.subscription_id = padded_id("sub-", ++sub_counter, 6);
      sub.agent_id = s.agents[i].agent_id;
      sub.domain = subs_rng.next_below(n_domains);
      sub.query = jitter_around(subs_rng, s.domain_centers[sub.domain], config.cluster_sigma);
      sub.threshold = config.similarity_threshold;
      s.subscriptions.push_back(std::move(sub));
    }
  }

  // Chunks: uniform domain, clustered embedding, domain-conditioned policy.
  std::set<std::string> restricted(config.restricted_jurisdictions.begin(),
                                   config.restricted_jurisdictions.end());
  for (uint32_t i = 0; i < config.n_chunks; ++i) {
    ScenarioChunk c;
    c.chunk_id = padded_id("chunk-", i + 1, 6);
    c.domain = chunks_rng.next_below(n_domains);
    c.embedding = jitter_around(chunks_rng, s.domain_centers[c.domain], config.cluster_sigma);
    const DomainDist& dist = config.domains[c.domain];
    c.policy.sensitivity_level = chunks_rng.next_bernoulli(dist.p_high_sensitivity)
                                     ? chunks_rng.next_int(4, 5)
                                     : chunks_rng.next_int(1, 3);
    c.policy.marketing_opt_out = chunks_rng.next_bernoulli(dist.p_marketing_opt_out);
    c.policy.training_opt_out = chunks_rng.next_bernoulli(dist.p_training_opt_out);
    c.policy.scientific_opt_out = chunks_rng.next_bernoulli(dist.p_scientific_opt_out);
    c.policy.allowed_jurisdictions = chunks_rng.next_bernoulli(dist.p_jurisdiction_restricted)
                                         ? JurisdictionSet::of(restricted)
                                         : JurisdictionSet::all();
    s.chunks.push_back(std::move(c));
  }

  // Exactly floor(fraction * n) chunks stay proposed, chosen by seeded
  // partial shuffle.
  uint32_t n_proposed = uint32_t(config.proposed_fraction * double(config.n_chunks));
  std::vector<uint32_t> order(config.n_chunks);
  for (uint32_t i = 0; i < config.n_chunks; ++i) order[i] = i;
  for (uint32_t i = 0; i < n_proposed && i < config.n_chunks; ++i) {
    uint32_t j = i + proposed_rng.next_below(config.n_chunks - i);
    std::swap(order[i], order[j]);
    s.chunks[order[i]].stays_proposed = true;
  }

  return s;
}

std::vector<Chunk> Scenario::chunk_snapshots() const {
  std::vector<Chunk> out;
  out.reserve(chunks.size());
  int64_t t = 0;
  for (const auto& sc : chunks) {
    Chunk c;
    c.chunk_id = sc.chunk_id;
    c.embedding = sc.embedding;
    c.policy = sc.policy;
    c.contributor_id = "bench";
    c.content = "domain:" + config.domains[sc.domain].name;
    c.created_at_us = ++t;
    if (sc.stays_proposed) {
      c.status = ChunkStatus::proposed;
    } else {
      c.status = ChunkStatus::active;
      c.activated_at_us = ++t;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Subscription> Scenario::subscription_snapshots() const {
  std::vector<Subscription> out;
  out.reserve(subscriptions.size());
  for (const auto& ss : subscriptions) {
    Subscription sub;
    sub.subscription_id = ss.subscription_id;
    sub.agent_id = ss.agent_id;
    sub.query_embedding = ss.query;
    sub.similarity_threshold = ss.threshold;
    sub.trigger_status = TriggerStatus::active;
    sub.active = true;
    sub.method = NotificationMethod::polling_queue;
    out.push_back(std::move(sub));
  }
  return out;
}

std::unordered_map<std::string, AgentProfile> Scenario::agent_map() const {
  std::unordered_map<std::string, AgentProfile> out;
  for (const auto& a : agents) out.emplace(a.agent_id, a);
  return out;
}

GeneratorSelfTest generator_self_test(const Scenario& scenario) {
  GeneratorSelfTest t;
  const auto& chunks = scenario.chunks;
  const auto& subs = scenario.subscriptions;
  if (chunks.empty() || subs.empty()) return t;

  uint64_t intra_n = 0, inter_n = 0, intra_above = 0, inter_below = 0;
  double intra_sum = 0.0, inter_sum = 0.0;
  const double threshold = scenario.config.similarity_threshold;

  // Sample at most ~200 chunks against all subscriptions.
  size_t step = std::max<size_t>(1, chunks.size() / 200);
  for (size_t i = 0; i < chunks.size(); i += step) {
    for (const auto& sub : subs) {
      double sim = cosine_similarity(chunks[i].embedding, sub.query);
      if (chunks[i].domain == sub.domain) {
        ++intra_n;
        intra_sum += sim;
        if (sim >= threshold) ++intra_above;
      } else {
        ++inter_n;
        inter_sum += sim;
        if (sim < threshold) ++inter_below;
      }
    }
  }
  if (intra_n == 0 || inter_n == 0) return t;
  t.intra_mean = intra_sum / double(intra_n);
  t.inter_mean = inter_sum / double(inter_n);
  t.frac_intra_above_threshold = double(intra_above) / double(intra_n);
  t.frac_inter_below_threshold = double(inter_below) / double(inter_n);
  t.ok = t.frac_intra_above_threshold >= 0.5 && t.frac_inter_below_threshold >= 0.99 &&
         t.intra_mean > threshold && t.inter_mean < threshold;
  return t;
}

}  // namespace pasa::bench
