// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "types.hpp"

namespace pasa {

// The five policy dimensions, evaluated independently and conjoined.
enum class PolicyDimension : uint8_t {
  level = 0,
  direct_marketing = 1,
  training_opt_out = 2,
  scientific_opt_out = 3,
  jurisdiction = 4,
};

inline constexpr std::array<PolicyDimension, 5> kAllDimensions = {
    PolicyDimension::level,
    PolicyDimension::direct_marketing,
    PolicyDimension::training_opt_out,
    PolicyDimension::scientific_opt_out,
    PolicyDimension::jurisdiction,
};

const char* dimension_name(PolicyDimension d);
PolicyDimension dimension_from_name(std::string_view name);  // ValidationError on unknown

class DimensionSet {
 public:
  DimensionSet() = default;  // empty set

  static DimensionSet all() { return DimensionSet(0b11111); }
  static DimensionSet none() { return DimensionSet(0); }
  static DimensionSet of(std::initializer_list<PolicyDimension> dims);
  static DimensionSet parse_names(std::span<const std::string> names);

  DimensionSet& set(PolicyDimension d, bool enabled = true);
  bool contains(PolicyDimension d) const { return bits_ & (1u << static_cast<uint8_t>(d)); }
  bool is_all() const { return bits_ == 0b11111; }
  bool is_none() const { return bits_ == 0; }
  bool subset_of(const DimensionSet& other) const { return (bits_ & ~other.bits_) == 0; }
  size_t count() const;
  std::string encode() const;  // CSV of names, "" for empty
  static DimensionSet decode(std::string_view csv);

  bool operator==(const DimensionSet&) const = default;

 private:
  explicit DimensionSet(uint8_t bits) : bits_(bits) {}
  uint8_t bits_ = 0;
};

struct PolicyDecision {
  std::array<bool, 5> per_dimension = {true, true, true, true, true};
  bool overall = true;

  bool dimension(PolicyDimension d) const { return per_dimension[static_cast<uint8_t>(d)]; }
};

// A partial policy declaration as contributed; absent fields take the
// assume-worst defaults in normalize_policy.
struct RawPolicy {
  std::optional<int> sensitivity_level;
  std::optional<bool> marketing_opt_out;
  std::optional<bool> training_opt_out;
  std::optional<bool> scientific_opt_out;
  std::optional<JurisdictionSet> allowed_jurisdictions;
};

// Assume-worst normalization: undeclared sensitivity becomes 5, undeclared
// opt-outs become true, undeclared jurisdictions collapse to the single
// default jurisdiction (contributor's if known, else the configured home).
// A declared-but-out-of-range sensitivity level is a ValidationError.
PolicyProfile normalize_policy(const RawPolicy& raw, const std::string& default_jurisdiction);

RawPolicy to_raw(const PolicyProfile& p);

// Partial policy declaration from record fields under `prefix`; every field
// may be absent.
RawPolicy raw_policy_from_record(const Record& r, const std::string& prefix = "policy.");

// The per-dimension checks:
//   level:              sensitivity_level <= handling_level
//   direct_marketing:   !(marketing_opt_out && purpose == marketing)
//   training_opt_out:   !(training_opt_out && training_use)
//   scientific_opt_out: !(scientific_opt_out && purpose == scientific)
//   jurisdiction:       agent jurisdiction in allowed_jurisdictions
// overall is the conjunction of all five.
PolicyDecision evaluate_policy(const AgentProfile& agent, const PolicyProfile& policy);

// Ablation variant: dimensions outside `enabled` are forced to true, so
// overall is the conjunction over enabled dimensions only.
PolicyDecision evaluate_dimension_subset(const AgentProfile& agent, const PolicyProfile& policy,
                                         const DimensionSet& enabled);

// Curation routing: which chunk statuses a subscription's trigger_status
// accepts. superseded never matches.
bool curation_matches(ChunkStatus status, TriggerStatus trigger);

// The full notification predicate: similarity (>= with 9-decimal rounding),
// policy conjunction, and curation.
bool notify_predicate(const Subscription& sub, const AgentProfile& agent, const Chunk& chunk,
                      double similarity);

}  // namespace pasa
