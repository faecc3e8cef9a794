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

#ifndef CRANSIM_POD_HPP_
#define CRANSIM_POD_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "cransim/cluster.hpp"
#include "cransim/common.hpp"
#include "cransim/ipv4.hpp"

namespace cransim {

enum class PodKind { kBbu, kRrh, kEpc };

// REGISTERING is the RRH-only and DISCOVERING the BBU-only branch between
// STARTING and RUNNING.
enum class Phase {
  kPending,
  kScheduled,
  kStarting,
  kRegistering,
  kDiscovering,
  kRunning,
  kTerminating,
  kGone,
};

std::string_view ToString(PodKind kind);
std::string_view ToString(Phase phase);
std::optional<PodKind> ParsePodKind(std::string_view text);

/// Forward lifecycle edges plus the early exit to TERMINATING that deletion of
/// a not-yet-running pod requires.
bool IsValidTransition(PodKind kind, Phase from, Phase to);

enum class NodeSelector { kMaster, kWorker, kAny };

std::string_view ToString(NodeSelector sel);
bool Matches(NodeSelector sel, NodeRole role);

struct Placement {
  NodeSelector selector = NodeSelector::kAny;
  bool anti_affinity = false;  // at most one pod of the set per node

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct StatefulSetSpec {
  std::string name;
  PodKind kind = PodKind::kRrh;
  int replicas = 0;
  ResourceUsage requests;
  Placement placement;

  friend bool operator==(const StatefulSetSpec&, const StatefulSetSpec&) = default;
};

struct Pod {
  std::string name;
  PodKind kind = PodKind::kRrh;
  std::string set;               // empty for unmanaged pods (EPC)
  std::optional<int> ordinal;
  std::optional<std::string> node;
  std::optional<Ipv4> ip;
  Phase phase = Phase::kPending;
  std::optional<std::string> peer;
  ResourceUsage requests;

  // Discovery bookkeeping (BBU only).
  std::optional<Ipv4> peer_ip;
  std::optional<Ipv4> epc_ip;
  int discovery_attempts = 0;
  SimTime next_attempt;
  bool failed_discovery = false;

  // Why the pod is stuck, e.g. "no feasible node".
  std::string reason;
};

/// "<set>-<ordinal>"
std::string PodName(std::string_view set, int ordinal);

}  // namespace cransim

#endif  // CRANSIM_POD_HPP_
