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

#include "cransim/ranmodel.hpp"

#include <cmath>

namespace cransim {

std::string_view ToString(UeMode mode) {
  return mode == UeMode::kOaisim ? "OAISIM" : "REAL_UE";
}

std::optional<UeMode> ParseUeMode(std::string_view text) {
  if (text == "OAISIM") return UeMode::kOaisim;
  if (text == "REAL_UE") return UeMode::kRealUe;
  return std::nullopt;
}

std::vector<std::string> ValidateProfile(const WorkloadProfile& p) {
  std::vector<std::string> errors;
  auto positive = [&](int64_t v, const char* field) {
    if (v <= 0) errors.push_back(std::string(field) + " must be > 0");
  };
  positive(p.bbu_cpu, "bbu_cpu");
  positive(p.bbu_mem, "bbu_mem");
  positive(p.rrh_cpu_real, "rrh_cpu_real");
  positive(p.rrh_cpu_oaisim_delta, "rrh_cpu_oaisim_delta");
  positive(p.rrh_mem, "rrh_mem");
  if (p.rrh_cpu_oaisim_delta < kMinOaisimDeltaMillicores) {
    errors.push_back("rrh_cpu_oaisim_delta must be >= " +
                     std::to_string(kMinOaisimDeltaMillicores) + " millicores");
  }
  return errors;
}

Throughput Throughput::FromMbps(double mbps) {
  return Throughput{static_cast<int64_t>(std::llround(mbps * 1000.0))};
}

ResourceUsage Usage(PodKind kind, Phase phase, UeMode mode, const WorkloadProfile& p) {
  if (phase != Phase::kRunning) return {};
  switch (kind) {
    case PodKind::kBbu:
      return {p.bbu_cpu, p.bbu_mem};
    case PodKind::kRrh: {
      const int64_t cpu =
          p.rrh_cpu_real + (mode == UeMode::kOaisim ? p.rrh_cpu_oaisim_delta : 0);
      return {cpu, p.rrh_mem};
    }
    case PodKind::kEpc:
      // EPC runs in a VM outside the orchestrated pods.
      return {};
  }
  return {};
}

ResourceUsage NodeUsage(std::string_view node_name, std::span<const Pod> pods, UeMode mode,
                        const WorkloadProfile& profile) {
  ResourceUsage total;
  for (const Pod& pod : pods) {
    if (pod.node && *pod.node == node_name) total += Usage(pod, mode, profile);
  }
  return total;
}

ResourceUsage ApplyJitter(const ResourceUsage& u, std::mt19937_64& rng) {
  auto scale = [&](int64_t v) {
    const int64_t permille = 950 + static_cast<int64_t>(rng() % 101);
    return v * permille / 1000;
  };
  ResourceUsage out;
  out.cpu_millicores = scale(u.cpu_millicores);
  out.mem_mib = scale(u.mem_mib);
  return out;
}

Throughput AggregateFh(std::span<const FronthaulPair> pairs) {
  Throughput total;
  for (const auto& p : pairs) {
    if (p.active) total = total + p.rate;
  }
  return total;
}

int OnPhaseChange(std::string_view pod, const PhaseLookup& phase_of,
                  std::vector<FronthaulPair>& pairs, SimTime now) {
  int flipped = 0;
  for (auto& pair : pairs) {
    if (pair.bbu != pod && pair.rrh != pod) continue;
    const auto b = phase_of(pair.bbu);
    const auto r = phase_of(pair.rrh);
    const bool active = b == Phase::kRunning && r == Phase::kRunning;
    if (active == pair.active) continue;
    pair.active = active;
    pair.activated_at = active ? std::optional<SimTime>(now) : std::nullopt;
    ++flipped;
  }
  return flipped;
}

}  // namespace cransim
