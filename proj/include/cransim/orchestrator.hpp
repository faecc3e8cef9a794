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

// StatefulSet reconciliation, scheduling and the per-pod lifecycle steps that
// implement register-then-discover startup between RRH and BBU pods.

#ifndef CRANSIM_ORCHESTRATOR_HPP_
#define CRANSIM_ORCHESTRATOR_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cransim/cluster.hpp"
#include "cransim/common.hpp"
#include "cransim/pod.hpp"
#include "cransim/ranmodel.hpp"
#include "cransim/registry.hpp"

namespace cransim {

inline constexpr std::string_view kNoFeasibleNode = "no feasible node";
inline constexpr std::string_view kFailedDiscovery = "FAILED-DISCOVERY";

struct ReconcileAction {
  enum class Kind { kCreate, kDelete };
  Kind kind;
  std::string pod;
  int ordinal;

  friend bool operator==(const ReconcileAction&, const ReconcileAction&) = default;
};

/// One reconcile pass for `set`. `live` holds the set's pods that are not GONE.
///
/// Emits DELETEs (highest ordinal first, batched) for every not-yet-terminating
/// pod with ordinal >= replicas. Otherwise emits at most one CREATE: for the
/// lowest missing ordinal i < replicas, and only when pods 0..i-1 are all
/// RUNNING. Throws InvariantViolation on duplicate ordinals and
/// std::invalid_argument for pods that do not belong to `set`.
std::vector<ReconcileAction> Reconcile(const StatefulSetSpec& set, std::span<const Pod> live);

struct ScheduleResult {
  std::optional<std::string> node;
  std::string reason;  // set when node is empty
};

/// Picks a node for a PENDING pod of `set`. `pods` are all pods currently
/// bound to nodes (used for anti-affinity). A node is feasible when it matches
/// the role selector, holds no other pod of the set (if anti-affinity), admits
/// the requests, and has a free pod address. Ties go to the lowest
/// committed-CPU fraction, then the lexicographically smallest name.
ScheduleResult Schedule(const Pod& pod, const StatefulSetSpec& set, const Cluster& cluster,
                        std::span<const Pod> pods);

/// BBU <-> RRH pairing is by equal ordinal.
std::string PairedRrh(int bbu_ordinal, std::string_view rrh_set = "rrh");

struct DiscoveryRecord {
  std::string pod_name;
  std::string ip_key;
  std::optional<std::string> sim_key;  // present only under OAISIM
};

DiscoveryRecord MakeDiscoveryRecord(std::string_view pod_name, UeMode mode);

/// Opaque SIM provisioning blob stored for emulated UEs.
std::string SimRecord(const Pod& rrh);

struct Transition {
  std::string pod;
  Phase from;
  Phase to;
  std::string reason;
};

/// Everything a lifecycle step may touch.
struct LifecycleContext {
  Registry& registry;
  Cluster& cluster;
  UeMode ue_mode = UeMode::kOaisim;
  SimTime now;
  SimTime retry_backoff = SimTime::FromMillis(1000);
  std::optional<int> retry_limit;  // nullopt = retry forever
};

/// PENDING -> SCHEDULED: binds to `node` and commits the pod's requests.
Transition BindPod(Pod& pod, const std::string& node, Cluster& cluster);

/// SCHEDULED -> STARTING once an address is allocated. Stays SCHEDULED (with
/// a reason) if the node's CIDR is exhausted.
std::optional<Transition> StartContainer(Pod& pod, Cluster& cluster);

/// STARTING -> REGISTERING (RRH) or DISCOVERING (BBU).
Transition BeginHandshake(Pod& pod);

/// REGISTERING -> RUNNING after storing the ip key (and the SIM record under
/// OAISIM). A failed put leaves the pod REGISTERING for the next tick.
std::optional<Transition> RegisterRrh(Pod& pod, LifecycleContext& ctx);

/// One discovery attempt for a DISCOVERING BBU. On finding the peer's ip key
/// it records the peer address, publishes its own ip, and moves to RUNNING.
/// Otherwise it schedules the next attempt `retry_backoff` later; once the
/// retry limit is spent the pod is flagged FAILED-DISCOVERY and stops
/// retrying, still DISCOVERING.
std::optional<Transition> DiscoverBbu(Pod& pod, LifecycleContext& ctx);

/// First call: deletes the pod's registry keys, releases its address and
/// committed requests, and moves to TERMINATING. Second call: GONE. Further
/// calls are no-ops.
std::optional<Transition> TerminatePod(Pod& pod, LifecycleContext& ctx);

}  // namespace cransim

#endif  // CRANSIM_ORCHESTRATOR_HPP_
