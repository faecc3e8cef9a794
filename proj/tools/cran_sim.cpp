// Copyright 2026 The cransim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "cransim/registry.hpp"
#include "cransim/registry_service.hpp"
#include "cransim/report.hpp"
#include "cransim/scenario.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void OnSignal(int) { g_stop = 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cran-sim: deterministic C-RAN orchestration simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "out";
  std::optional<uint64_t> seed;
  std::optional<double> duration;
  bool strict = true;

  auto* run = app.add_subcommand("run", "Run a scenario and write metrics.csv, events.log, summary.json");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--duration", duration, "Override the duration in simulated seconds");
  run->add_flag("--strict,!--no-strict", strict, "Reject unknown scenario fields");

  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  validate->add_flag("--strict,!--no-strict", strict, "Reject unknown scenario fields");

  std::string host = "127.0.0.1";
  uint16_t port = 2379;
  auto* serve = app.add_subcommand("registry-serve", "Serve the registry line protocol over TCP");
  serve->add_option("--host", host, "Listen address")->capture_default_str();
  serve->add_option("--port", port, "Listen port (0 = ephemeral)")->capture_default_str();

  std::string template_name;
  std::string init_out = "-";
  auto* scenario = app.add_subcommand("scenario", "Scenario helpers");
  scenario->require_subcommand(1);
  auto* init = scenario->add_subcommand("init", "Write a scenario template");
  init->add_option("--template", template_name, "Template name")
      ->required()
      ->check(CLI::IsMember({"paper-testbed"}));
  init->add_option("--out", init_out, "Output path, '-' for stdout")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return cransim::RunCommand(scenario_path, out_dir, {seed, duration, strict}, std::cerr);
  }

  if (*validate) {
    const auto loaded = cransim::LoadScenario(scenario_path, strict);
    for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& e : loaded.errors) std::cerr << "error: " << e << "\n";
    if (!loaded.config) return 2;
    std::cout << "ok: " << loaded.config->name << " (" << loaded.config->nodes.size() << " nodes, "
              << loaded.config->sets.size() << " sets)\n";
    return 0;
  }

  if (*serve) {
    cransim::Registry registry;
    cransim::RegistryServer server(registry);
    try {
      const uint16_t bound = server.Start(host, port);
      std::cout << "registry listening on " << host << ":" << bound << std::endl;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    std::signal(SIGINT, OnSignal);
    std::signal(SIGTERM, OnSignal);
    while (g_stop == 0) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.Stop();
    return 0;
  }

  if (*init) {
    const std::string text = cransim::ScenarioToJson(cransim::PaperTestbed());
    if (init_out == "-") {
      std::cout << text;
      return 0;
    }
    std::ofstream out(init_out, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::cerr << "error: cannot write " << init_out << "\n";
      return 1;
    }
    return 0;
  }
  return 0;
}
