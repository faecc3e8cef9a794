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

#include "cransim/report.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cransim {

namespace {

void Row(std::string& out, SimTime t, std::string_view node, const ResourceUsage& used,
         const ResourceUsage& cap, Throughput fh, int pairs) {
  out += FormatMilli(t.ms);
  out += ',';
  out += node;
  out += ',';
  out += FormatMilli(used.cpu_millicores * 1000);
  out += ',';
  out += FormatMilli(cap.cpu_millicores > 0 ? RatioMilli(used.cpu_millicores, cap.cpu_millicores) : 0);
  out += ',';
  out += FormatMilli(used.mem_mib * 1000);
  out += ',';
  out += FormatMilli(cap.mem_mib > 0 ? RatioMilli(used.mem_mib, cap.mem_mib) : 0);
  out += ',';
  out += fh.ToMbpsString();
  out += ',';
  out += std::to_string(pairs);
  out += '\n';
}

bool Visible(EventKind kind, LogVerbosity v) {
  switch (kind) {
    case EventKind::kScaleCmd:
    case EventKind::kAutoscaleDecision:
    case EventKind::kHalt:
      return true;
    case EventKind::kPhaseTransition:
    case EventKind::kRegistryMutation:
      return v != LogVerbosity::kQuiet;
    case EventKind::kMetricsSample:
      return v == LogVerbosity::kDebug;
  }
  return true;
}

bool WriteFile(const std::filesystem::path& path, const std::string& data, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.close();
  if (!out) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

std::string EmitMetricsCsv(std::span<const MetricsSample> samples) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const MetricsSample& s : samples) {
    ResourceUsage used;
    ResourceUsage cap;
    for (const NodeSample& n : s.nodes) {
      Row(out, s.time, n.node, n.used, n.capacity, n.fh, n.pairs_active);
      used += n.used;
      cap += n.capacity;
    }
    Row(out, s.time, "ALL", used, cap, s.fh, s.pairs_active);
  }
  return out;
}

LogVerbosity VerbosityFromEnv() {
  const char* v = std::getenv("CRAN_SIM_LOG");
  if (v == nullptr) return LogVerbosity::kInfo;
  const std::string_view s(v);
  if (s == "quiet") return LogVerbosity::kQuiet;
  if (s == "debug") return LogVerbosity::kDebug;
  return LogVerbosity::kInfo;
}

std::string FormatEvent(const SimEvent& ev) {
  std::string line = FormatMilli(ev.time.ms) + " " + std::to_string(ev.seq) + " " +
                     std::string(ToString(ev.kind));
  for (const auto& [k, v] : ev.fields) {
    line += ' ';
    line += k;
    line += '=';
    if (v.empty() || v.find(' ') != std::string::npos) {
      line += '"' + v + '"';
    } else {
      line += v;
    }
  }
  return line;
}

std::string EmitEventLog(std::span<const SimEvent> events, LogVerbosity verbosity) {
  std::string out;
  for (const SimEvent& ev : events) {
    if (!Visible(ev.kind, verbosity)) continue;
    out += FormatEvent(ev);
    out += '\n';
  }
  return out;
}

std::string SummaryJson(const Simulation& sim, const RunResult& result) {
  using nlohmann::json;
  json pods = json::array();
  for (const Pod& p : sim.pods()) {
    pods.push_back({{"name", p.name},
                    {"kind", std::string(ToString(p.kind))},
                    {"phase", std::string(ToString(p.phase))},
                    {"node", p.node ? json(*p.node) : json(nullptr)},
                    {"ip", p.ip ? json(p.ip->ToString()) : json(nullptr)},
                    {"peer", p.peer ? json(*p.peer) : json(nullptr)},
                    {"reason", p.reason}});
  }
  json sets = json::object();
  for (const auto& s : sim.config().sets) sets[s.name] = sim.replicas(s.name);

  // Peak per-node CPU in both normalizations: share of one core and share of
  // the node's capacity.
  json peaks = json::object();
  int64_t peak_fh = 0;
  for (const auto& sample : sim.samples()) {
    peak_fh = std::max(peak_fh, sample.fh.kbps);
    for (const auto& n : sample.nodes) {
      auto& entry = peaks[n.node];
      const int64_t cur = entry.is_null() ? 0 : entry["cpu_millicores"].get<int64_t>();
      if (entry.is_null() || n.used.cpu_millicores > cur) {
        entry = {{"cpu_millicores", n.used.cpu_millicores},
                 {"cpu_pct_of_core", static_cast<double>(n.used.cpu_millicores) / 10.0},
                 {"cpu_pct_of_node",
                  100.0 * static_cast<double>(n.used.cpu_millicores) /
                      static_cast<double>(n.capacity.cpu_millicores)}};
      }
    }
  }

  json root = {
      {"scenario", sim.config().name},
      {"seed", sim.config().seed},
      {"steps", result.steps},
      {"final_time_s", static_cast<double>(sim.now().ms) / 1000.0},
      {"halted", result.halted},
      {"invariant", result.halted ? json(result.invariant) : json(nullptr)},
      {"diagnostic", result.halted ? json(result.diagnostic) : json(nullptr)},
      {"replicas", sets},
      {"pods", pods},
      {"pairs_active", sim.samples().empty() ? 0 : sim.samples().back().pairs_active},
      {"peak_fh_throughput_mbps", static_cast<double>(peak_fh) / 1000.0},
      {"peak_cpu", peaks},
      {"registry_revision", sim.registry().revision()},
  };
  return root.dump(2) + "\n";
}

int RunCommand(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
               const RunOverrides& overrides, std::ostream& err) {
  LoadResult loaded = LoadScenario(scenario_path, overrides.strict);
  for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
  if (!loaded.config) {
    for (const auto& e : loaded.errors) err << "error: " << e << "\n";
    return 2;
  }
  ScenarioConfig cfg = std::move(*loaded.config);
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.duration_s) cfg.duration = SimTime::FromSeconds(*overrides.duration_s);
  if (auto errors = ValidateScenario(cfg); !errors.empty()) {
    for (const auto& e : errors) err << "error: " << e << "\n";
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    err << "error: cannot create " << out_dir.string() << ": " << ec.message() << "\n";
    return 1;
  }

  Simulation sim(std::move(cfg));
  const RunResult result = sim.Run();
  const bool ok = WriteFile(out_dir / "metrics.csv", EmitMetricsCsv(sim.samples()), err) &&
                  WriteFile(out_dir / "events.log", EmitEventLog(sim.events(), VerbosityFromEnv()), err) &&
                  WriteFile(out_dir / "summary.json", SummaryJson(sim, result), err);
  if (!ok) return 1;
  if (result.halted) {
    err << "halted: " << result.diagnostic << "\n";
    return 3;
  }
  return 0;
}

}  // namespace cransim
