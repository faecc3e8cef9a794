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

#include "cransim/simkernel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace cransim {

namespace {

bool HoldsResources(Phase p) {
  return p == Phase::kScheduled || p == Phase::kStarting || p == Phase::kRegistering ||
         p == Phase::kDiscovering || p == Phase::kRunning;
}

ScenarioConfig Validated(ScenarioConfig cfg) {
  if (auto errors = ValidateScenario(cfg); !errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ScenarioError(msg);
  }
  return cfg;
}

}  // namespace

std::string_view ToString(EventKind kind) {
  switch (kind) {
    case EventKind::kScaleCmd: return "SCALE_CMD";
    case EventKind::kPhaseTransition: return "PHASE_TRANSITION";
    case EventKind::kRegistryMutation: return "REGISTRY_MUTATION";
    case EventKind::kAutoscaleDecision: return "AUTOSCALE_DECISION";
    case EventKind::kMetricsSample: return "METRICS_SAMPLE";
    case EventKind::kHalt: return "HALT";
  }
  return "?";
}

std::string_view SimEvent::Field(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return {};
}

Simulation::Simulation(ScenarioConfig config)
    : config_(Validated(std::move(config))),
      registry_(std::make_unique<Registry>()),
      cluster_(config_.nodes),
      sets_(config_.sets),
      autoscaler_(config_.policy),
      rng_(config_.seed) {
  registry_log_ = registry_->Watch("", 0);
  // The EPC is not orchestrated; it is registered once and never updated.
  registry_->Put(PodIpKey("epc"), config_.epc_ip.ToString());
  DrainRegistry();
}

SimEvent& Simulation::Log(EventKind kind, std::vector<std::pair<std::string, std::string>> fields) {
  events_.push_back(SimEvent{now_, seq_++, kind, std::move(fields)});
  return events_.back();
}

void Simulation::LogTransition(const Transition& t) {
  Log(EventKind::kPhaseTransition, {{"pod", t.pod},
                                    {"from", std::string(ToString(t.from))},
                                    {"to", std::string(ToString(t.to))},
                                    {"reason", t.reason}});
}

void Simulation::DrainRegistry() {
  for (const WatchEvent& ev : registry_log_->Drain()) {
    Log(EventKind::kRegistryMutation,
        {{"op", ev.kind == WatchEventKind::kPut ? "PUT" : "DEL"},
         {"key", ev.entry.key},
         {"rev", std::to_string(ev.revision)},
         {"value", ev.kind == WatchEventKind::kPut ? ev.entry.value : ""}});
  }
}

void Simulation::Transitioned(Pod& pod, const Transition& t) {
  if (pod.kind == PodKind::kBbu && t.to == Phase::kRunning) {
    // Literal discovery-safety witness: the peer key must exist right now.
    if (!pod.peer || !registry_->Get(PodIpKey(*pod.peer))) {
      throw InvariantViolation("discovery-safety",
                               pod.name + " reached RUNNING without its peer's ip key");
    }
  }
  DrainRegistry();
  LogTransition(t);
  moved_this_tick_.insert(pod.name);
  const PhaseLookup lookup = [this](std::string_view name) -> std::optional<Phase> {
    if (const Pod* p = FindPod(name)) return p->phase;
    return std::nullopt;
  };
  OnPhaseChange(pod.name, lookup, pairs_, now_);
}

const Pod* Simulation::FindPod(std::string_view name) const {
  for (const Pod& p : pods_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Pod* Simulation::MutablePod(std::string_view name) {
  return const_cast<Pod*>(static_cast<const Simulation*>(this)->FindPod(name));
}

StatefulSetSpec& Simulation::SetSpec(std::string_view name) {
  for (auto& s : sets_) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown set '" + std::string(name) + "'");
}

const StatefulSetSpec* Simulation::FirstSetOfKind(PodKind kind) const {
  for (const auto& s : sets_) {
    if (s.kind == kind) return &s;
  }
  return nullptr;
}

int Simulation::replicas(std::string_view set) const {
  for (const auto& s : sets_) {
    if (s.name == set) return s.replicas;
  }
  throw std::invalid_argument("unknown set '" + std::string(set) + "'");
}

void Simulation::Scale(std::string_view set, int replicas) {
  if (replicas < 0) throw std::invalid_argument("replicas must be >= 0");
  SetSpec(set).replicas = replicas;
  Log(EventKind::kScaleCmd, {{"set", std::string(set)}, {"replicas", std::to_string(replicas)}});
}

void Simulation::ApplyTimeline() {
  while (next_command_ < config_.timeline.size() &&
         config_.timeline[next_command_].time <= now_) {
    const auto& c = config_.timeline[next_command_++];
    Scale(c.set, c.replicas);
  }
}

void Simulation::RunReconcilers() {
  const StatefulSetSpec* rrh_set = FirstSetOfKind(PodKind::kRrh);
  for (const StatefulSetSpec& set : sets_) {
    std::vector<Pod> live;
    for (const Pod& p : pods_) {
      if (p.set == set.name) live.push_back(p);
    }
    for (const ReconcileAction& a : Reconcile(set, live)) {
      if (a.kind == ReconcileAction::Kind::kCreate) {
        Pod pod;
        pod.name = a.pod;
        pod.kind = set.kind;
        pod.set = set.name;
        pod.ordinal = a.ordinal;
        pod.requests = set.requests;
        if (set.kind == PodKind::kBbu) {
          pod.peer = PairedRrh(a.ordinal, rrh_set->name);
          if (std::none_of(pairs_.begin(), pairs_.end(),
                           [&](const FronthaulPair& fp) { return fp.bbu == pod.name; })) {
            pairs_.push_back(FronthaulPair{pod.name, *pod.peer, config_.fh_rate, false, std::nullopt});
          }
        }
        pods_.push_back(pod);
        moved_this_tick_.insert(pod.name);
        Log(EventKind::kPhaseTransition,
            {{"pod", pod.name}, {"from", "NONE"}, {"to", "PENDING"}, {"reason", "created"}});
      } else {
        Pod* pod = MutablePod(a.pod);
        LifecycleContext ctx{*registry_, cluster_, config_.ue_mode, now_,
                             config_.discovery_backoff, config_.discovery_retry_limit};
        if (auto t = TerminatePod(*pod, ctx)) Transitioned(*pod, *t);
      }
    }
  }
}

void Simulation::RunScheduler() {
  for (Pod& pod : pods_) {
    if (pod.phase != Phase::kPending || moved_this_tick_.contains(pod.name)) continue;
    const ScheduleResult r = Schedule(pod, SetSpec(pod.set), cluster_, pods_);
    if (!r.node) {
      pod.reason = r.reason;
      continue;
    }
    Transitioned(pod, BindPod(pod, *r.node, cluster_));
  }
}

void Simulation::AdvancePod(Pod& pod, LifecycleContext& ctx) {
  std::optional<Transition> t;
  switch (pod.phase) {
    case Phase::kScheduled: t = StartContainer(pod, cluster_); break;
    case Phase::kStarting: t = BeginHandshake(pod); break;
    case Phase::kRegistering: t = RegisterRrh(pod, ctx); break;
    case Phase::kDiscovering: t = DiscoverBbu(pod, ctx); break;
    case Phase::kTerminating: t = TerminatePod(pod, ctx); break;
    default: break;
  }
  if (t) Transitioned(pod, *t);
}

void Simulation::AdvanceLifecycles() {
  std::vector<size_t> order(pods_.size());
  std::iota(order.begin(), order.end(), size_t{0});
  if (config_.lifecycle_order == LifecycleOrder::kShuffled) {
    std::shuffle(order.begin(), order.end(), rng_);
  }
  LifecycleContext ctx{*registry_, cluster_, config_.ue_mode, now_,
                       config_.discovery_backoff, config_.discovery_retry_limit};
  for (size_t i : order) {
    Pod& pod = pods_[i];
    if (moved_this_tick_.contains(pod.name)) continue;
    AdvancePod(pod, ctx);
  }
}

void Simulation::CollectGone() {
  std::vector<std::string> gone;
  for (const Pod& p : pods_) {
    if (p.phase == Phase::kGone) gone.push_back(p.name);
  }
  if (gone.empty()) return;
  std::erase_if(pods_, [](const Pod& p) { return p.phase == Phase::kGone; });
  std::erase_if(pairs_, [&](const FronthaulPair& fp) {
    return std::find(gone.begin(), gone.end(), fp.bbu) != gone.end();
  });
}

MetricsSample Simulation::ComputeSample() {
  MetricsSample s;
  s.time = now_;
  std::map<std::string, const Pod*> by_name;
  for (const Pod& p : pods_) by_name[p.name] = &p;
  auto node_of = [&](const std::string& name) -> std::optional<std::string> {
    auto it = by_name.find(name);
    return it == by_name.end() ? std::nullopt : it->second->node;
  };
  for (const NodeSpec& node : cluster_.nodes()) {
    NodeSample ns;
    ns.node = node.name;
    ns.capacity = {node.cpu_capacity, node.mem_capacity};
    for (const Pod& p : pods_) {
      if (p.node != node.name) continue;
      ResourceUsage u = Usage(p, config_.ue_mode, config_.profile);
      if (config_.usage_jitter && p.phase == Phase::kRunning) u = ApplyJitter(u, rng_);
      ns.used += u;
    }
    for (const FronthaulPair& fp : pairs_) {
      if (!fp.active) continue;
      if (node_of(fp.bbu) == node.name || node_of(fp.rrh) == node.name) {
        ns.fh = ns.fh + fp.rate;
        ++ns.pairs_active;
      }
    }
    s.nodes.push_back(std::move(ns));
  }
  s.fh = AggregateFh(pairs_);
  s.pairs_active = static_cast<int>(
      std::count_if(pairs_.begin(), pairs_.end(), [](const FronthaulPair& p) { return p.active; }));
  return s;
}

void Simulation::RunAutoscaler() {
  if (!config_.policy.enabled) return;
  const StatefulSetSpec* bbu = FirstSetOfKind(PodKind::kBbu);
  const StatefulSetSpec* rrh = FirstSetOfKind(PodKind::kRrh);
  if (bbu == nullptr || rrh == nullptr) return;
  const ScaleDecision d = autoscaler_.Tick(samples_, bbu->replicas, now_);
  if (d == ScaleDecision::kHold) return;
  const PairReplicas next = Apply(d, {bbu->replicas, rrh->replicas}, config_.policy);
  Log(EventKind::kAutoscaleDecision,
      {{"decision", std::string(ToString(d))},
       {"load_milli", std::to_string(static_cast<int64_t>(
                          LoadFraction(config_.policy, samples_.back()) * 1000.0 + 0.5))},
       {"bbu", std::to_string(next.bbu)},
       {"rrh", std::to_string(next.rrh)}});
  const std::string bbu_name = bbu->name;
  const std::string rrh_name = rrh->name;
  Scale(rrh_name, next.rrh);
  Scale(bbu_name, next.bbu);
}

void Simulation::Step() {
  if (halted_) throw std::logic_error("simulation has halted");
  moved_this_tick_.clear();
  try {
    ApplyTimeline();
    RunReconcilers();
    RunScheduler();
    AdvanceLifecycles();
    CollectGone();
    samples_.push_back(ComputeSample());
    RunAutoscaler();
    const MetricsSample& s = samples_.back();
    ResourceUsage total;
    for (const auto& n : s.nodes) total += n.used;
    Log(EventKind::kMetricsSample, {{"fh_mbps", s.fh.ToMbpsString()},
                                    {"pairs_active", std::to_string(s.pairs_active)},
                                    {"cpu_millicores", std::to_string(total.cpu_millicores)},
                                    {"mem_mib", std::to_string(total.mem_mib)}});
    CheckInvariants();
  } catch (...) {
    halted_ = true;
    throw;
  }
  now_ = now_ + config_.tick;
}

RunResult Simulation::Run() { return Run(config_.duration); }

RunResult Simulation::Run(SimTime duration) {
  RunResult result;
  const int64_t steps = (duration.ms + config_.tick.ms - 1) / config_.tick.ms;
  for (int64_t i = 0; i < steps; ++i) {
    try {
      Step();
    } catch (const InvariantViolation& e) {
      result.halted = true;
      result.invariant = e.invariant();
      result.diagnostic = e.what();
    } catch (const std::exception& e) {
      result.halted = true;
      result.invariant = "internal";
      result.diagnostic = e.what();
    }
    if (result.halted) {
      Log(EventKind::kHalt, {{"invariant", result.invariant}, {"detail", result.diagnostic}});
      break;
    }
    ++result.steps;
  }
  return result;
}

void Simulation::CheckInvariants() const {
  std::map<std::string, std::set<int>> ordinals;
  std::map<Ipv4, std::string> ip_owner;
  std::map<std::string, ResourceUsage> requested;
  for (const Pod& p : pods_) {
    if (p.ordinal && !ordinals[p.set].insert(*p.ordinal).second) {
      throw InvariantViolation("ordinal-uniqueness", "duplicate ordinal in set " + p.set);
    }
    if (p.ip) {
      if (!p.node) throw InvariantViolation("cidr-confinement", p.name + " has ip but no node");
      if (!cluster_.node(*p.node).pod_cidr.Contains(*p.ip)) {
        throw InvariantViolation("cidr-confinement",
                                 p.name + " ip " + p.ip->ToString() + " outside " + *p.node);
      }
      if (auto [it, fresh] = ip_owner.emplace(*p.ip, p.name); !fresh) {
        throw InvariantViolation("ip-uniqueness",
                                 p.ip->ToString() + " held by " + it->second + " and " + p.name);
      }
    }
    if (p.node && HoldsResources(p.phase)) requested[*p.node] += p.requests;
  }
  for (const NodeSpec& n : cluster_.nodes()) {
    const ResourceUsage r = requested[n.name];
    if (r.cpu_millicores > n.cpu_capacity || r.mem_mib > n.mem_capacity) {
      throw InvariantViolation("capacity-safety", "requests exceed capacity on " + n.name);
    }
    if (!(r == cluster_.committed(n.name))) {
      throw InvariantViolation("capacity-safety", "committed requests out of sync on " + n.name);
    }
  }
  for (const FronthaulPair& fp : pairs_) {
    const Pod* b = FindPod(fp.bbu);
    const Pod* r = FindPod(fp.rrh);
    const bool both = b && r && b->phase == Phase::kRunning && r->phase == Phase::kRunning;
    if (both != fp.active) {
      throw InvariantViolation("pair-consistency", fp.bbu + "<->" + fp.rrh);
    }
  }
}

}  // namespace cransim
