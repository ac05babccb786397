// Copyright (c) 2026 the pasa authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0
//
// pasa command line: benchmark subcommands (gen, compliance, ablation,
// curation, scalability, adversarial, all) and the HTTP service (serve).
// Talks to the engine exclusively through the public C API.
#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pasa/pasa.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CLI::ValidationError("--config", "cannot read config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pasa_server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) pasa_server_stop(g_server);
  g_server = nullptr;
}

struct BenchOptions {
  uint64_t seed = 42;
  bool seed_set = false;
  std::string config_path;
  std::string out_dir = "bench-out";
  std::string format = "table-text";
};

int run_bench_command(const std::string& experiment, const BenchOptions& options) {
  std::string config_text;
  if (!options.config_path.empty()) config_text = read_file(options.config_path);
  if (options.seed_set) config_text += "\nseed=" + std::to_string(options.seed) + "\n";

  char* summary = nullptr;
  int identities_pass = 0;
  pasa_status status = pasa_bench_run(config_text.c_str(), experiment.c_str(),
                                      options.out_dir.c_str(), options.format.c_str(), &summary,
                                      &identities_pass);
  if (status != PASA_OK) {
    std::fprintf(stderr, "error (%s): %s\n", pasa_status_name(status), pasa_last_error());
    return 2;
  }
  if (summary) {
    std::fputs(summary, stdout);
    pasa_string_free(summary);
  }
  std::printf("report written to %s\n", options.out_dir.c_str());
  if (!identities_pass) {
    std::fprintf(stderr, "one or more acceptance identities FAILED\n");
    return 1;
  }
  return 0;
}

int run_serve(const std::string& config_path, const std::string& listen) {
  std::string config_text;
  if (!config_path.empty()) config_text = read_file(config_path);

  pasa_engine* engine = nullptr;
  pasa_status status = pasa_engine_open(config_text.c_str(), &engine);
  if (status != PASA_OK) {
    std::fprintf(stderr, "error opening engine (%s): %s\n", pasa_status_name(status),
                 pasa_last_error());
    return 2;
  }

  pasa_server* server = nullptr;
  status = pasa_server_start(engine, config_text.c_str(), listen.empty() ? nullptr : listen.c_str(),
                             &server);
  if (status != PASA_OK) {
    std::fprintf(stderr, "error starting server (%s): %s\n", pasa_status_name(status),
                 pasa_last_error());
    pasa_engine_close(engine);
    return 2;
  }

  char* stats = nullptr;
  if (pasa_engine_stats(engine, &stats) == PASA_OK && stats) {
    std::fputs(stats, stdout);
    pasa_string_free(stats);
  }
  std::printf("listening on port %d (Ctrl-C to stop)\n", pasa_server_port(server));

  g_server = server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  pasa_server_wait(server);
  if (g_server) {
    pasa_server_stop(g_server);
    g_server = nullptr;
  }
  pasa_engine_close(engine);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pasa: governance-aware semantic pub/sub engine and PASA benchmark"};
  app.require_subcommand(1);

  BenchOptions options;
  const char* experiments[] = {"gen",      "compliance",  "ablation", "curation",
                               "scalability", "adversarial", "all"};
  const char* descriptions[] = {
      "generate the deterministic scenario and write it out",
      "governed vs ungoverned compliance and recall",
      "policy dimension ablation and the per-dimension fixture",
      "curation guarantee impact (with vs without)",
      "matching latency sweep across subscription counts",
      "escalation rejection and cross-level prevention",
      "every experiment",
  };

  std::string chosen;
  for (size_t i = 0; i < 7; ++i) {
    auto* cmd = app.add_subcommand(experiments[i], descriptions[i]);
    cmd->add_option("--seed", options.seed, "scenario seed")
        ->each([&options](const std::string&) { options.seed_set = true; });
    cmd->add_option("--config", options.config_path, "scenario config file (key=value lines)");
    cmd->add_option("--out", options.out_dir, "output directory");
    cmd->add_option("--format", options.format, "table-text | machine-readable")
        ->check(CLI::IsMember({"table-text", "machine-readable", "machine"}));
    cmd->callback([&chosen, name = std::string(experiments[i])] { chosen = name; });
  }

  std::string serve_config, serve_listen;
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--config", serve_config, "service config file (key=value lines)");
  serve->add_option("--listen", serve_listen, "listen address, e.g. 127.0.0.1:8787");
  serve->callback([&chosen] { chosen = "serve"; });

  CLI11_PARSE(app, argc, argv);

  if (chosen == "serve") return run_serve(serve_config, serve_listen);
  return run_bench_command(chosen, options);
}
