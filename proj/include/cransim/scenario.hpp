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

#ifndef CRANSIM_SCENARIO_HPP_
#define CRANSIM_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cransim/autoscaler.hpp"
#include "cransim/cluster.hpp"
#include "cransim/common.hpp"
#include "cransim/ipv4.hpp"
#include "cransim/pod.hpp"
#include "cransim/ranmodel.hpp"

namespace cransim {

struct TimelineCommand {
  SimTime time;
  std::string set;
  int replicas = 0;  // SCALE(set, replicas) is the only command

  friend bool operator==(const TimelineCommand&, const TimelineCommand&) = default;
};

// Order in which pods advance within one tick. SHUFFLED permutes them with the
// scenario RNG to explore interleavings.
enum class LifecycleOrder { kOrdered, kShuffled };

struct ScenarioConfig {
  std::string name = "unnamed";
  std::vector<NodeSpec> nodes;
  std::vector<StatefulSetSpec> sets;
  UeMode ue_mode = UeMode::kOaisim;
  WorkloadProfile profile;
  Throughput fh_rate = Throughput::FromMbps(int64_t{614});
  AutoscalePolicy policy;
  std::vector<TimelineCommand> timeline;
  SimTime duration = SimTime::FromMillis(60'000);
  SimTime tick = SimTime::FromMillis(1000);
  uint64_t seed = 1;

  LifecycleOrder lifecycle_order = LifecycleOrder::kOrdered;
  SimTime discovery_backoff = SimTime::FromMillis(1000);
  std::optional<int> discovery_retry_limit;
  Ipv4 epc_ip = Ipv4((192u << 24) | (168u << 16) | (56u << 8) | 10u);
  bool usage_jitter = false;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// The three-machine testbed: one master (4 cores, 8 GiB) hosting every BBU
/// and two workers hosting one RRH each. Pair 1 becomes active at t=10 s and
/// pair 2 at t=60 s.
ScenarioConfig PaperTestbed();

/// Field-path-qualified messages for every violated constraint.
std::vector<std::string> ValidateScenario(const ScenarioConfig& cfg);

struct LoadResult {
  std::optional<ScenarioConfig> config;  // set iff errors is empty
  std::vector<std::string> errors;
  std::vector<std::string> warnings;  // unknown fields when not strict
};

/// Parses and validates a JSON scenario. In strict mode unknown fields are
/// errors; otherwise they are reported as warnings.
LoadResult ParseScenario(std::string_view json_text, bool strict = true);
LoadResult LoadScenario(const std::filesystem::path& path, bool strict = true);

/// Canonical JSON form; ParseScenario(ScenarioToJson(c)) == c.
std::string ScenarioToJson(const ScenarioConfig& cfg);

}  // namespace cransim

#endif  // CRANSIM_SCENARIO_HPP_
