// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
#pragma once

#include <string>

#include "bench/experiments.hpp"

namespace pasa::bench {

// Human-readable tables, one block per experiment, with identity PASS/FAIL lines.
std::string render_text(const BenchResults& results);

// Canonical key/value report. Embeds the oracle sets so every row can be
// rechecked independently. All measured-time values live under the `timing.`
// prefix; stripping those lines yields a byte-stable document for a fixed
// seed and config.
std::string render_machine(const BenchResults& results);

// Drops `timing.` lines; used by the determinism checks.
std::string strip_timing_lines(const std::string& machine_report);

// Writes the report into out_dir: `report.txt` plus per-experiment CSV tables
// for table-text, `report.kv` for machine-readable. Returns the main file path.
// format is "table-text" or "machine-readable".
std::string write_report(const BenchResults& results, const std::string& format,
                         const std::string& out_dir);

// `gen` output: the full scenario (config, agents, subscriptions, chunks) as a
// canonical record stream. Returns the file path.
std::string write_scenario(const Scenario& scenario, const std::string& out_dir);

}  // namespace pasa::bench
