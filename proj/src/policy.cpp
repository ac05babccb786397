// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "policy.hpp"

#include "errors.hpp"

namespace pasa {

const char* dimension_name(PolicyDimension d) {
  switch (d) {
    case PolicyDimension::level: return "level";
    case PolicyDimension::direct_marketing: return "direct_marketing";
    case PolicyDimension::training_opt_out: return "training_opt_out";
    case PolicyDimension::scientific_opt_out: return "scientific_opt_out";
    case PolicyDimension::jurisdiction: return "jurisdiction";
  }
  return "unknown";
}

PolicyDimension dimension_from_name(std::string_view name) {
  for (PolicyDimension d : kAllDimensions) {
    if (name == dimension_name(d)) return d;
  }
  throw ValidationError("unknown policy dimension: " + std::string(name));
}

DimensionSet DimensionSet::of(std::initializer_list<PolicyDimension> dims) {
  DimensionSet s = none();
  for (PolicyDimension d : dims) s.set(d);
  return s;
}

DimensionSet DimensionSet::parse_names(std::span<const std::string> names) {
  DimensionSet s = none();
  for (const auto& n : names) s.set(dimension_from_name(n));
  return s;
}

DimensionSet& DimensionSet::set(PolicyDimension d, bool enabled) {
  uint8_t bit = 1u << static_cast<uint8_t>(d);
  if (enabled) {
    bits_ |= bit;
  } else {
    bits_ &= ~bit;
  }
  return *this;
}

size_t DimensionSet::count() const {
  size_t n = 0;
  for (PolicyDimension d : kAllDimensions) {
    if (contains(d)) ++n;
  }
  return n;
}

std::string DimensionSet::encode() const {
  std::string out;
  for (PolicyDimension d : kAllDimensions) {
    if (!contains(d)) continue;
    if (!out.empty()) out.push_back(',');
    out += dimension_name(d);
  }
  return out;
}

DimensionSet DimensionSet::decode(std::string_view csv) {
  DimensionSet s = none();
  if (csv.empty()) return s;
  for (const auto& part : split(csv, ',')) s.set(dimension_from_name(part));
  return s;
}

PolicyProfile normalize_policy(const RawPolicy& raw, const std::string& default_jurisdiction) {
  PolicyProfile p;
  if (raw.sensitivity_level) {
    if (*raw.sensitivity_level < 1 || *raw.sensitivity_level > 5) {
      throw ValidationError("sensitivity_level must be in [1, 5], got " +
                            std::to_string(*raw.sensitivity_level));
    }
    p.sensitivity_level = *raw.sensitivity_level;
  } else {
    p.sensitivity_level = 5;
  }
  p.marketing_opt_out = raw.marketing_opt_out.value_or(true);
  p.training_opt_out = raw.training_opt_out.value_or(true);
  p.scientific_opt_out = raw.scientific_opt_out.value_or(true);
  if (raw.allowed_jurisdictions) {
    p.allowed_jurisdictions = *raw.allowed_jurisdictions;
  } else {
    if (default_jurisdiction.empty()) {
      throw ValidationError("no default jurisdiction available for undeclared policy");
    }
    p.allowed_jurisdictions = JurisdictionSet::of({default_jurisdiction});
  }
  validate(p);
  return p;
}

RawPolicy to_raw(const PolicyProfile& p) {
  RawPolicy raw;
  raw.sensitivity_level = p.sensitivity_level;
  raw.marketing_opt_out = p.marketing_opt_out;
  raw.training_opt_out = p.training_opt_out;
  raw.scientific_opt_out = p.scientific_opt_out;
  raw.allowed_jurisdictions = p.allowed_jurisdictions;
  return raw;
}

RawPolicy raw_policy_from_record(const Record& r, const std::string& prefix) {
  RawPolicy raw;
  if (auto v = r.find_int(prefix + "sensitivity_level")) raw.sensitivity_level = int(*v);
  if (auto v = r.find_bool(prefix + "marketing_opt_out")) raw.marketing_opt_out = *v;
  if (auto v = r.find_bool(prefix + "training_opt_out")) raw.training_opt_out = *v;
  if (auto v = r.find_bool(prefix + "scientific_opt_out")) raw.scientific_opt_out = *v;
  if (auto v = r.find(prefix + "allowed_jurisdictions")) {
    raw.allowed_jurisdictions = JurisdictionSet::decode(*v);
  }
  return raw;
}

PolicyDecision evaluate_policy(const AgentProfile& agent, const PolicyProfile& policy) {
  PolicyDecision d;
  d.per_dimension[size_t(PolicyDimension::level)] =
      policy.sensitivity_level <= agent.handling_level;
  d.per_dimension[size_t(PolicyDimension::direct_marketing)] =
      !(policy.marketing_opt_out && agent.purpose == Purpose::marketing);
  d.per_dimension[size_t(PolicyDimension::training_opt_out)] =
      !(policy.training_opt_out && agent.training_use);
  d.per_dimension[size_t(PolicyDimension::scientific_opt_out)] =
      !(policy.scientific_opt_out && agent.purpose == Purpose::scientific);
  d.per_dimension[size_t(PolicyDimension::jurisdiction)] =
      policy.allowed_jurisdictions.contains(agent.jurisdiction);
  d.overall = true;
  for (bool v : d.per_dimension) d.overall = d.overall && v;
  return d;
}

PolicyDecision evaluate_dimension_subset(const AgentProfile& agent, const PolicyProfile& policy,
                                         const DimensionSet& enabled) {
  PolicyDecision full = evaluate_policy(agent, policy);
  PolicyDecision d;
  d.overall = true;
  for (PolicyDimension dim : kAllDimensions) {
    bool v = enabled.contains(dim) ? full.per_dimension[size_t(dim)] : true;
    d.per_dimension[size_t(dim)] = v;
    d.overall = d.overall && v;
  }
  return d;
}

bool curation_matches(ChunkStatus status, TriggerStatus trigger) {
  switch (status) {
    case ChunkStatus::superseded:
      return false;
    case ChunkStatus::active:
      return trigger == TriggerStatus::active || trigger == TriggerStatus::both;
    case ChunkStatus::proposed:
      return trigger == TriggerStatus::proposed || trigger == TriggerStatus::both;
  }
  return false;
}

bool notify_predicate(const Subscription& sub, const AgentProfile& agent, const Chunk& chunk,
                      double similarity) {
  if (!meets_threshold(similarity, sub.similarity_threshold)) return false;
  if (!evaluate_policy(agent, chunk.policy).overall) return false;
  return curation_matches(chunk.status, sub.trigger_status);
}

}  // namespace pasa
