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

#include "cransim/orchestrator.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cransim {

namespace {

Transition Move(Pod& pod, Phase to, std::string reason) {
  if (!IsValidTransition(pod.kind, pod.phase, to)) {
    throw InvariantViolation("phase-order", pod.name + " " + std::string(ToString(pod.phase)) +
                                                " -> " + std::string(ToString(to)));
  }
  Transition t{pod.name, pod.phase, to, std::move(reason)};
  pod.phase = to;
  return t;
}

}  // namespace

std::vector<ReconcileAction> Reconcile(const StatefulSetSpec& set, std::span<const Pod> live) {
  if (set.replicas < 0) throw std::invalid_argument("negative replicas for set " + set.name);
  std::map<int, const Pod*> by_ordinal;
  for (const Pod& pod : live) {
    if (pod.set != set.name || !pod.ordinal || pod.phase == Phase::kGone) {
      throw std::invalid_argument("pod " + pod.name + " is not a live member of set " + set.name);
    }
    if (!by_ordinal.emplace(*pod.ordinal, &pod).second) {
      throw InvariantViolation("ordinal-uniqueness",
                               "set " + set.name + " has two pods with ordinal " +
                                   std::to_string(*pod.ordinal));
    }
  }

  std::vector<ReconcileAction> actions;
  for (auto it = by_ordinal.rbegin(); it != by_ordinal.rend(); ++it) {
    if (it->first < set.replicas) break;
    if (it->second->phase == Phase::kTerminating) continue;
    actions.push_back({ReconcileAction::Kind::kDelete, it->second->name, it->first});
  }
  if (!actions.empty()) return actions;

  for (int i = 0; i < set.replicas; ++i) {
    auto it = by_ordinal.find(i);
    if (it == by_ordinal.end()) {
      return {{ReconcileAction::Kind::kCreate, PodName(set.name, i), i}};
    }
    // Ordered startup: nothing new until every lower ordinal is RUNNING.
    if (it->second->phase != Phase::kRunning) break;
  }
  return {};
}

ScheduleResult Schedule(const Pod& pod, const StatefulSetSpec& set, const Cluster& cluster,
                        std::span<const Pod> pods) {
  const NodeSpec* best = nullptr;
  for (const NodeSpec& node : cluster.nodes()) {
    if (!Matches(set.placement.selector, node.role)) continue;
    if (set.placement.anti_affinity) {
      const bool taken = std::any_of(pods.begin(), pods.end(), [&](const Pod& other) {
        return other.name != pod.name && other.set == set.name && other.node == node.name &&
               other.phase != Phase::kTerminating && other.phase != Phase::kGone;
      });
      if (taken) continue;
    }
    if (cluster.Admit(pod.requests, node.name) != Admission::kAccept) continue;
    if (cluster.FreeAddresses(node.name) == 0) continue;
    if (best == nullptr) {
      best = &node;
      continue;
    }
    // committed/capacity compared exactly by cross-multiplication.
    const int64_t lhs = cluster.committed(node.name).cpu_millicores * best->cpu_capacity;
    const int64_t rhs = cluster.committed(best->name).cpu_millicores * node.cpu_capacity;
    if (lhs < rhs || (lhs == rhs && node.name < best->name)) best = &node;
  }
  if (best == nullptr) return {std::nullopt, std::string(kNoFeasibleNode)};
  return {best->name, {}};
}

std::string PairedRrh(int bbu_ordinal, std::string_view rrh_set) {
  return PodName(rrh_set, bbu_ordinal);
}

DiscoveryRecord MakeDiscoveryRecord(std::string_view pod_name, UeMode mode) {
  DiscoveryRecord r{std::string(pod_name), PodIpKey(pod_name), std::nullopt};
  if (mode == UeMode::kOaisim) r.sim_key = PodSimKey(pod_name);
  return r;
}

std::string SimRecord(const Pod& rrh) {
  std::string msin = std::to_string(rrh.ordinal.value_or(0));
  msin.insert(0, 10 - std::min<size_t>(msin.size(), 10), '0');
  return "imsi=00101" + msin + ";pod=" + rrh.name;
}

Transition BindPod(Pod& pod, const std::string& node, Cluster& cluster) {
  cluster.Commit(pod.requests, node);
  pod.node = node;
  pod.reason.clear();
  return Move(pod, Phase::kScheduled, "bound to " + node);
}

std::optional<Transition> StartContainer(Pod& pod, Cluster& cluster) {
  auto ip = cluster.AllocateIp(*pod.node);
  if (!ip) {
    pod.reason = "pod cidr exhausted on " + *pod.node;
    return std::nullopt;
  }
  pod.ip = *ip;
  pod.reason.clear();
  return Move(pod, Phase::kStarting, "ip " + ip->ToString());
}

Transition BeginHandshake(Pod& pod) {
  const Phase next = pod.kind == PodKind::kRrh ? Phase::kRegistering : Phase::kDiscovering;
  return Move(pod, next, pod.kind == PodKind::kRrh ? "registering" : "discovering peer");
}

std::optional<Transition> RegisterRrh(Pod& pod, LifecycleContext& ctx) {
  const DiscoveryRecord rec = MakeDiscoveryRecord(pod.name, ctx.ue_mode);
  try {
    ctx.registry.Put(rec.ip_key, pod.ip->ToString());
    if (rec.sim_key) ctx.registry.Put(*rec.sim_key, SimRecord(pod));
  } catch (const RegistryUnavailable& e) {
    pod.reason = e.what();
    return std::nullopt;
  }
  pod.reason.clear();
  return Move(pod, Phase::kRunning, "registered " + rec.ip_key);
}

std::optional<Transition> DiscoverBbu(Pod& pod, LifecycleContext& ctx) {
  if (pod.failed_discovery || ctx.now < pod.next_attempt) return std::nullopt;
  if (!pod.peer) throw std::logic_error("bbu " + pod.name + " has no peer assigned");
  ++pod.discovery_attempts;
  const auto peer = ctx.registry.GetWithRevision(PodIpKey(*pod.peer));
  const auto peer_ip = peer.entry ? Ipv4::Parse(peer.entry->value) : std::nullopt;
  if (peer_ip) {
    try {
      ctx.registry.Put(PodIpKey(pod.name), pod.ip->ToString());
    } catch (const RegistryUnavailable& e) {
      pod.reason = e.what();
      pod.next_attempt = ctx.now + ctx.retry_backoff;
      return std::nullopt;
    }
    pod.peer_ip = peer_ip;
    if (auto epc = ctx.registry.Get(PodIpKey("epc"))) pod.epc_ip = Ipv4::Parse(*epc);
    pod.reason.clear();
    return Move(pod, Phase::kRunning,
                "peer " + *pod.peer + " at " + peer_ip->ToString() + " rev " +
                    std::to_string(peer.entry->revision));
  }
  pod.next_attempt = ctx.now + ctx.retry_backoff;
  pod.reason = "waiting for " + PodIpKey(*pod.peer);
  if (ctx.retry_limit && pod.discovery_attempts >= *ctx.retry_limit) {
    pod.failed_discovery = true;
    pod.reason = std::string(kFailedDiscovery);
  }
  return std::nullopt;
}

std::optional<Transition> TerminatePod(Pod& pod, LifecycleContext& ctx) {
  if (pod.phase == Phase::kGone) return std::nullopt;
  if (pod.phase == Phase::kTerminating) return Move(pod, Phase::kGone, "terminated");
  ctx.registry.Delete(PodIpKey(pod.name));
  ctx.registry.Delete(PodSimKey(pod.name));
  if (pod.ip) {
    ctx.cluster.ReleaseIp(*pod.node, *pod.ip);
    pod.ip.reset();
  }
  if (pod.node && pod.phase != Phase::kPending) ctx.cluster.Uncommit(pod.requests, *pod.node);
  pod.reason.clear();
  return Move(pod, Phase::kTerminating, "deleted");
}

}  // namespace cransim
