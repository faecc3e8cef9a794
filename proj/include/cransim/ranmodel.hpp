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

// Host resource draw of RAN pods and fronthaul throughput accounting.

#ifndef CRANSIM_RANMODEL_HPP_
#define CRANSIM_RANMODEL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cransim/cluster.hpp"
#include "cransim/common.hpp"
#include "cransim/pod.hpp"

namespace cransim {

enum class UeMode { kOaisim, kRealUe };

std::string_view ToString(UeMode mode);
std::optional<UeMode> ParseUeMode(std::string_view text);

// Emulating the UE on the RRH host costs at least this much extra CPU.
inline constexpr int64_t kMinOaisimDeltaMillicores = 600;

struct WorkloadProfile {
  int64_t bbu_cpu = 1000;              // millicores per BBU
  int64_t bbu_mem = 1024;              // MiB per BBU
  int64_t rrh_cpu_real = 500;          // millicores per RRH with a real UE
  int64_t rrh_cpu_oaisim_delta = 700;  // extra UE-baseband load under OAISIM
  int64_t rrh_mem = 512;               // MiB per RRH

  friend bool operator==(const WorkloadProfile&, const WorkloadProfile&) = default;
};

std::vector<std::string> ValidateProfile(const WorkloadProfile& profile);

/// Integer kb/s so that sums are exact.
struct Throughput {
  int64_t kbps = 0;

  static constexpr Throughput FromMbps(int64_t mbps) { return {mbps * 1000}; }
  static Throughput FromMbps(double mbps);
  /// "614.000"
  std::string ToMbpsString() const { return FormatMilli(kbps); }

  friend constexpr Throughput operator+(Throughput a, Throughput b) { return {a.kbps + b.kbps}; }
  friend constexpr auto operator<=>(Throughput, Throughput) = default;
};

struct FronthaulPair {
  std::string bbu;
  std::string rrh;
  Throughput rate;
  bool active = false;
  std::optional<SimTime> activated_at;

  friend bool operator==(const FronthaulPair&, const FronthaulPair&) = default;
};

struct NodeSample {
  std::string node;
  ResourceUsage used;
  ResourceUsage capacity;
  Throughput fh;     // active pairs with an endpoint on this node
  int pairs_active = 0;

  friend bool operator==(const NodeSample&, const NodeSample&) = default;
};

/// One metrics tick. `fh` is the sum of rates over active pairs and each
/// node's `used` the sum of draws of RUNNING pods on it.
struct MetricsSample {
  SimTime time;
  std::vector<NodeSample> nodes;
  Throughput fh;
  int pairs_active = 0;

  friend bool operator==(const MetricsSample&, const MetricsSample&) = default;
};

/// Draw of a single pod. Only RUNNING pods consume anything.
ResourceUsage Usage(PodKind kind, Phase phase, UeMode mode, const WorkloadProfile& profile);
inline ResourceUsage Usage(const Pod& pod, UeMode mode, const WorkloadProfile& profile) {
  return Usage(pod.kind, pod.phase, mode, profile);
}

/// Sum of Usage() over the pods placed on `node_name`.
ResourceUsage NodeUsage(std::string_view node_name, std::span<const Pod> pods, UeMode mode,
                        const WorkloadProfile& profile);

/// Scales `u` by a factor drawn uniformly from [0.95, 1.05] in 0.1% steps.
ResourceUsage ApplyJitter(const ResourceUsage& u, std::mt19937_64& rng);

Throughput AggregateFh(std::span<const FronthaulPair> pairs);

using PhaseLookup = std::function<std::optional<Phase>(std::string_view pod)>;

/// Recomputes `active` for every pair with `pod` as an endpoint. Newly active
/// pairs are stamped with `now`. Returns how many pairs flipped.
int OnPhaseChange(std::string_view pod, const PhaseLookup& phase_of,
                  std::vector<FronthaulPair>& pairs, SimTime now);

}  // namespace cransim

#endif  // CRANSIM_RANMODEL_HPP_
