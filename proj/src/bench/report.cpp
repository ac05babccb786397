// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#include "bench/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "errors.hpp"

namespace pasa::bench {

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", v * 100.0);
  return buf;
}

std::string fixed(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const char* pass(bool ok) { return ok ? "PASS" : "FAIL"; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw IoError("failed writing " + path);
}

std::string key_to_string(const OracleKey& key) {
  return key.chunk_id + "|" + key.subscription_id + "|" + to_string(key.trigger);
}

void put_oracle_set(Record& r, const std::string& prefix, const std::set<OracleKey>& keys) {
  r.put_uint(prefix + "size", keys.size());
  size_t i = 0;
  for (const auto& key : keys) {
    r.put(prefix + std::to_string(i++), key_to_string(key));
  }
}

}  // namespace

std::string render_text(const BenchResults& results) {
  std::string out;
  out += "pasa bench report (seed " + std::to_string(results.config.seed) + ")\n";
  out += "scenario: " + std::to_string(results.config.n_chunks) + " chunks, " +
         std::to_string(results.config.n_agents) + " agents, dim " +
         std::to_string(results.config.embedding_dim) + ", threshold " +
         format_double(results.config.similarity_threshold) + "\n";
  out += "generator self-test: intra mean " + fixed(results.generator_check.intra_mean) +
         ", inter mean " + fixed(results.generator_check.inter_mean) + " ... " +
         pass(results.generator_check.ok) + "\n\n";

  if (results.compliance) {
    const auto& c = *results.compliance;
    out += "== compliance and notification volume ==\n";
    out += "mode        notifications  violations  compliance  recall\n";
    out += "governed    " + std::to_string(c.governed.actual_total) + "\t" +
           std::to_string(c.governed.violations) + "\t" + pct(c.governed.compliance_rate) + "\t" +
           pct(c.governed.recall) + "\n";
    out += "ungoverned  " + std::to_string(c.ungoverned.actual_total) + "\t" +
           std::to_string(c.ungoverned.violations) + "\t" + pct(c.ungoverned.compliance_rate) +
           "\t" + pct(c.ungoverned.recall) + "\n";
    out += "identity: governed violations == 0 ... " + std::string(pass(c.identity_zero_violations)) + "\n";
    out += "identity: governed recall == 100% ... " + std::string(pass(c.identity_recall_100)) + "\n";
    out += "identity: engine set == oracle set ... " +
           std::string(pass(c.identity_engine_equals_oracle)) + "\n";
    out += "identity: ungoverned recall == 100% ... " +
           std::string(pass(c.identity_ungoverned_recall_100)) + "\n\n";
  }

  if (results.ablation) {
    const auto& a = *results.ablation;
    out += "== policy dimension ablation (" + std::to_string(a.sampled_chunks.size()) +
           " sampled chunks) ==\n";
    out += "active dimensions                          notif  violations  blocked  block-rate\n";
    for (const auto& row : a.rows) {
      out += row.label;
      if (row.label.size() < 42) out += std::string(42 - row.label.size(), ' ');
      out += " " + std::to_string(row.notifications) + "\t" + std::to_string(row.violations) +
             "\t" + std::to_string(row.blocked) + "\t" + pct(row.block_rate) + "\n";
    }
    out += "identity: all-dimension violations == 0 ... " +
           std::string(pass(a.identity_full_set_zero)) + "\n";
    out += "identity: blocked weakly increases along chain ... " +
           std::string(pass(a.identity_chain_monotone)) + "\n";
    out += "identity: each row equals its oracle ... " +
           std::string(pass(a.identity_rows_match_oracle)) + "\n";
    out += "fixture: every proper subset leaks >= 1 violation ... " +
           std::string(pass(a.fixture_proper_subsets_leak)) + "\n";
    out += "fixture: full set leaks none ... " + std::string(pass(a.fixture_full_set_clean)) +
           "\n\n";
  }

  if (results.curation) {
    const auto& c = *results.curation;
    out += "== curation guarantee impact ==\n";
    out += "                         with curation  without\n";
    out += "total notifications      " + std::to_string(c.enforced_total) + "\t" +
           std::to_string(c.unenforced_total) + "\n";
    out += "from validated (active)  " + std::to_string(c.enforced_from_active) + "\t" +
           std::to_string(c.unenforced_from_active) + "\n";
    out += "from proposed            " + std::to_string(c.enforced_from_proposed) + "\t" +
           std::to_string(c.unenforced_from_proposed) + "\n";
    out += "identity: enforced from-proposed == 0 ... " +
           std::string(pass(c.identity_enforced_zero_proposed)) + "\n";
    out += "identity: validated counts equal ... " +
           std::string(pass(c.identity_validated_counts_equal)) + "\n";
    out += "identity: unenforced leaks proposed content ... " +
           std::string(pass(c.identity_unenforced_leaks)) + "\n\n";
  }

  if (results.scalability) {
    const auto& s = *results.scalability;
    out += "== scalability (p50/p95 matching latency per activation event) ==\n";
    out += "subscriptions  events  p50 (us)  p95 (us)\n";
    for (const auto& p : s.points) {
      out += std::to_string(p.subscriptions) + "\t" + std::to_string(p.events) + "\t" +
             fixed(p.p50_us) + "\t" + fixed(p.p95_us) + "\n";
    }
    out += "p50 ratio (largest/smallest): " + fixed(s.p50_ratio) + "\n";
    out += "identity: ratio < 10x ... " + std::string(pass(s.identity_ratio_bounded)) + "\n";
    out += "identity: p95 >= p50 everywhere ... " + std::string(pass(s.identity_p95_ordering)) +
           "\n\n";
  }

  if (results.adversarial) {
    const auto& a = *results.adversarial;
    out += "== adversarial ==\n";
    out += "escalation attempts: " + std::to_string(a.escalation_attempts) + ", rejected: " +
           std::to_string(a.escalation_rejected) + "\n";
    out += "sampled high-sensitivity chunks: " + std::to_string(a.sampled_high_sensitivity) +
           "\n";
    out += "ungoverned cross-level leaks: " + std::to_string(a.ungoverned_leaks) +
           ", prevented by governed: " + std::to_string(a.prevented) + " (" +
           pct(a.prevention_rate) + ")\n";
    if (a.vacuous) out += "note: vacuous pass (no high-sensitivity leaks in sample)\n";
    out += "identity: all escalations rejected ... " + std::string(pass(a.identity_all_rejected)) +
           "\n";
    out += "identity: 100% cross-level prevention ... " +
           std::string(pass(a.identity_full_prevention)) + "\n\n";
  }

  out += "all identities: " + std::string(pass(results.all_identities_pass())) + "\n";
  return out;
}

std::string render_machine(const BenchResults& results) {
  Record r;
  r.put("report.format_version", "1");
  Record config_record = results.config.to_record();
  for (const auto& [k, v] : config_record.entries()) r.put("config." + k, v);

  r.put_double("generator.intra_mean", results.generator_check.intra_mean);
  r.put_double("generator.inter_mean", results.generator_check.inter_mean);
  r.put_double("generator.frac_intra_above_threshold",
               results.generator_check.frac_intra_above_threshold);
  r.put_double("generator.frac_inter_below_threshold",
               results.generator_check.frac_inter_below_threshold);
  r.put_bool("generator.ok", results.generator_check.ok);

  if (results.compliance) {
    const auto& c = *results.compliance;
    Record governed_record = c.governed.to_record("compliance.governed.");
    for (const auto& [k, v] : governed_record.entries()) r.put(k, v);
    Record ungoverned_record = c.ungoverned.to_record("compliance.ungoverned.");
    for (const auto& [k, v] : ungoverned_record.entries()) r.put(k, v);
    r.put_bool("compliance.identity.zero_violations", c.identity_zero_violations);
    r.put_bool("compliance.identity.recall_100", c.identity_recall_100);
    r.put_bool("compliance.identity.engine_equals_oracle", c.identity_engine_equals_oracle);
    r.put_bool("compliance.identity.ungoverned_recall_100", c.identity_ungoverned_recall_100);
    put_oracle_set(r, "oracle.governed.", c.oracle_governed);
    put_oracle_set(r, "oracle.ungoverned.", c.oracle_ungoverned);
  }

  if (results.ablation) {
    const auto& a = *results.ablation;
    r.put_uint("ablation.sampled_chunks", a.sampled_chunks.size());
    r.put_uint("ablation.baseline_notifications", a.baseline_notifications);
    r.put_uint("ablation.baseline_violations", a.baseline_violations);
    for (size_t i = 0; i < a.rows.size(); ++i) {
      std::string p = "ablation.row." + std::to_string(i) + ".";
      const auto& row = a.rows[i];
      r.put(p + "label", row.label);
      r.put(p + "dims", row.dims.encode());
      r.put_bool(p + "chain", row.chain_row);
      r.put_uint(p + "notifications", row.notifications);
      r.put_uint(p + "violations", row.violations);
      r.put_uint(p + "blocked", row.blocked);
      r.put_double(p + "block_rate", row.block_rate);
      r.put_bool(p + "engine_equals_oracle", row.engine_equals_oracle);
    }
    r.put_bool("ablation.identity.full_set_zero", a.identity_full_set_zero);
    r.put_bool("ablation.identity.chain_monotone", a.identity_chain_monotone);
    r.put_bool("ablation.identity.rows_match_oracle", a.identity_rows_match_oracle);
    r.put_bool("ablation.fixture.proper_subsets_leak", a.fixture_proper_subsets_leak);
    r.put_bool("ablation.fixture.full_set_clean", a.fixture_full_set_clean);
  }

  if (results.curation) {
    const auto& c = *results.curation;
    r.put_uint("curation.enforced.total", c.enforced_total);
    r.put_uint("curation.enforced.from_active", c.enforced_from_active);
    r.put_uint("curation.enforced.from_proposed", c.enforced_from_proposed);
    r.put_uint("curation.unenforced.total", c.unenforced_total);
    r.put_uint("curation.unenforced.from_active", c.unenforced_from_active);
    r.put_uint("curation.unenforced.from_proposed", c.unenforced_from_proposed);
    r.put_bool("curation.identity.enforced_zero_proposed", c.identity_enforced_zero_proposed);
    r.put_bool("curation.identity.validated_counts_equal", c.identity_validated_counts_equal);
    r.put_bool("curation.identity.unenforced_leaks", c.identity_unenforced_leaks);
  }

  if (results.scalability) {
    const auto& s = *results.scalability;
    // Latency measurements are wall-clock: everything lives under timing.
    for (const auto& p : s.points) {
      std::string prefix = "timing.scalability." + std::to_string(p.subscriptions) + ".";
      r.put_uint(prefix + "events", p.events);
      r.put_double(prefix + "p50_us", p.p50_us);
      r.put_double(prefix + "p95_us", p.p95_us);
    }
    r.put_double("timing.scalability.p50_ratio", s.p50_ratio);
    r.put_bool("timing.scalability.identity.ratio_bounded", s.identity_ratio_bounded);
    r.put_bool("timing.scalability.identity.p95_ordering", s.identity_p95_ordering);
  }

  if (results.adversarial) {
    const auto& a = *results.adversarial;
    r.put_uint("adversarial.escalation_attempts", a.escalation_attempts);
    r.put_uint("adversarial.escalation_rejected", a.escalation_rejected);
    r.put_bool("adversarial.escalations_reached_index", a.escalations_reached_index);
    r.put_uint("adversarial.sampled_high_sensitivity", a.sampled_high_sensitivity);
    r.put_uint("adversarial.ungoverned_leaks", a.ungoverned_leaks);
    r.put_uint("adversarial.governed_leaks", a.governed_leaks);
    r.put_uint("adversarial.prevented", a.prevented);
    r.put_double("adversarial.prevention_rate", a.prevention_rate);
    r.put_bool("adversarial.vacuous", a.vacuous);
    r.put_bool("adversarial.identity.all_rejected", a.identity_all_rejected);
    r.put_bool("adversarial.identity.full_prevention", a.identity_full_prevention);
  }

  r.put_bool("report.all_identities_pass", results.all_identities_pass());

  r.put_int("timing.wall_ms.compliance", results.wall_ms_compliance);
  r.put_int("timing.wall_ms.ablation", results.wall_ms_ablation);
  r.put_int("timing.wall_ms.curation", results.wall_ms_curation);
  r.put_int("timing.wall_ms.scalability", results.wall_ms_scalability);
  r.put_int("timing.wall_ms.adversarial", results.wall_ms_adversarial);
  return r.encode();
}

std::string strip_timing_lines(const std::string& machine_report) {
  std::string out;
  size_t pos = 0;
  while (pos < machine_report.size()) {
    size_t eol = machine_report.find('\n', pos);
    if (eol == std::string::npos) eol = machine_report.size();
    std::string_view line(machine_report.data() + pos, eol - pos);
    if (line.rfind("timing.", 0) != 0) {
      out.append(line);
      out.push_back('\n');
    }
    pos = eol + 1;
  }
  return out;
}

namespace {

std::string compliance_csv(const ComplianceResult& c) {
  std::string out = "mode,notifications,violations,compliance_rate,recall\n";
  out += "governed," + std::to_string(c.governed.actual_total) + "," +
         std::to_string(c.governed.violations) + "," + format_double(c.governed.compliance_rate) +
         "," + format_double(c.governed.recall) + "\n";
  out += "ungoverned," + std::to_string(c.ungoverned.actual_total) + "," +
         std::to_string(c.ungoverned.violations) + "," +
         format_double(c.ungoverned.compliance_rate) + "," + format_double(c.ungoverned.recall) +
         "\n";
  return out;
}

std::string ablation_csv(const AblationResult& a) {
  std::string out = "dimensions,notifications,violations,blocked,block_rate\n";
  for (const auto& row : a.rows) {
    std::string label = row.dims.is_none() ? "none" : row.dims.encode();
    out += label + "," + std::to_string(row.notifications) + "," +
           std::to_string(row.violations) + "," + std::to_string(row.blocked) + "," +
           format_double(row.block_rate) + "\n";
  }
  return out;
}

std::string curation_csv(const CurationResult& c) {
  std::string out = "variant,total,from_active,from_proposed\n";
  out += "with_curation," + std::to_string(c.enforced_total) + "," +
         std::to_string(c.enforced_from_active) + "," + std::to_string(c.enforced_from_proposed) +
         "\n";
  out += "without_curation," + std::to_string(c.unenforced_total) + "," +
         std::to_string(c.unenforced_from_active) + "," +
         std::to_string(c.unenforced_from_proposed) + "\n";
  return out;
}

std::string scalability_csv(const ScalabilityResult& s) {
  std::string out = "subscriptions,events,p50_us,p95_us\n";
  for (const auto& p : s.points) {
    out += std::to_string(p.subscriptions) + "," + std::to_string(p.events) + "," +
           format_double(p.p50_us) + "," + format_double(p.p95_us) + "\n";
  }
  return out;
}

std::string adversarial_csv(const AdversarialResult& a) {
  std::string out =
      "escalation_attempts,escalation_rejected,sampled_high_sensitivity,ungoverned_leaks,"
      "prevented,prevention_rate\n";
  out += std::to_string(a.escalation_attempts) + "," + std::to_string(a.escalation_rejected) +
         "," + std::to_string(a.sampled_high_sensitivity) + "," +
         std::to_string(a.ungoverned_leaks) + "," + std::to_string(a.prevented) + "," +
         format_double(a.prevention_rate) + "\n";
  return out;
}

}  // namespace

std::string write_report(const BenchResults& results, const std::string& format,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  if (format == "machine-readable" || format == "machine") {
    std::string path = (dir / "report.kv").string();
    write_file(path, render_machine(results));
    return path;
  }
  if (format != "table-text") {
    throw ValidationError("unknown report format: " + format +
                          " (expected table-text or machine-readable)");
  }
  std::string path = (dir / "report.txt").string();
  write_file(path, render_text(results));
  if (results.compliance) {
    write_file((dir / "compliance.csv").string(), compliance_csv(*results.compliance));
  }
  if (results.ablation) write_file((dir / "ablation.csv").string(), ablation_csv(*results.ablation));
  if (results.curation) write_file((dir / "curation.csv").string(), curation_csv(*results.curation));
  if (results.scalability) {
    write_file((dir / "scalability.csv").string(), scalability_csv(*results.scalability));
  }
  if (results.adversarial) {
    write_file((dir / "adversarial.csv").string(), adversarial_csv(*results.adversarial));
  }
  return path;
}

std::string write_scenario(const Scenario& scenario, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::string path = (std::filesystem::path(out_dir) / "scenario.kv").string();

  std::vector<Record> records;
  {
    Record head;
    head.put("record", "scenario_config");
    Record config_record = scenario.config.to_record();
    for (const auto& [k, v] : config_record.entries()) head.put(k, v);
    records.push_back(std::move(head));
  }
  for (const auto& agent : scenario.agents) {
    Record r;
    r.put("record", "agent");
    Record agent_record = to_record(agent);
    for (const auto& [k, v] : agent_record.entries()) r.put(k, v);
    records.push_back(std::move(r));
  }
  for (const auto& sub : scenario.subscription_snapshots()) {
    Record r;
    r.put("record", "subscription");
    Record sub_record = to_record(sub);
    for (const auto& [k, v] : sub_record.entries()) r.put(k, v);
    records.push_back(std::move(r));
  }
  for (const auto& chunk : scenario.chunk_snapshots()) {
    Record r;
    r.put("record", "chunk");
    Record chunk_record = to_record(chunk);
    for (const auto& [k, v] : chunk_record.entries()) r.put(k, v);
    records.push_back(std::move(r));
  }
  write_file(path, encode_records(records));
  return path;
}

}  // namespace pasa::bench
