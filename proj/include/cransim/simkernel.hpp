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

#ifndef CRANSIM_SIMKERNEL_HPP_
#define CRANSIM_SIMKERNEL_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cransim/autoscaler.hpp"
#include "cransim/cluster.hpp"
#include "cransim/common.hpp"
#include "cransim/orchestrator.hpp"
#include "cransim/pod.hpp"
#include "cransim/ranmodel.hpp"
#include "cransim/registry.hpp"
#include "cransim/scenario.hpp"

namespace cransim {

enum class EventKind {
  kScaleCmd,
  kPhaseTransition,
  kRegistryMutation,
  kAutoscaleDecision,
  kMetricsSample,
  kHalt,
};

std::string_view ToString(EventKind kind);

struct SimEvent {
  SimTime time;
  uint64_t seq = 0;
  EventKind kind = EventKind::kMetricsSample;
  std::vector<std::pair<std::string, std::string>> fields;

  /// Value of `key`, or empty if absent.
  std::string_view Field(std::string_view key) const;
};

struct RunResult {
  int64_t steps = 0;
  bool halted = false;
  std::string invariant;   // set when halted
  std::string diagnostic;  // set when halted
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tick-driven kernel owning every piece of mutable state. Each Step() runs,
/// in order: due timeline commands, reconcilers (set declaration order),
/// scheduling of PENDING pods, lifecycle progress (at most one transition per
/// pod per tick), fronthaul/usage recomputation, the autoscaler, and metrics
/// emission; then the global invariant sweep.
class Simulation {
 public:
  /// Throws ScenarioError if the config does not validate.
  explicit Simulation(ScenarioConfig config);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Throws InvariantViolation; the simulation is unusable afterwards.
  void Step();
  /// Executes ceil(duration / tick) steps, converting a halt into the result
  /// (plus a HALT event).
  RunResult Run();
  RunResult Run(SimTime duration);

  /// Sets desired replicas immediately (as a SCALE command at `now`).
  void Scale(std::string_view set, int replicas);

  const ScenarioConfig& config() const { return config_; }
  SimTime now() const { return now_; }
  const std::vector<SimEvent>& events() const { return events_; }
  const std::vector<MetricsSample>& samples() const { return samples_; }
  /// Live pods (not GONE) in creation order.
  const std::vector<Pod>& pods() const { return pods_; }
  const Pod* FindPod(std::string_view name) const;
  const std::vector<FronthaulPair>& pairs() const { return pairs_; }
  const Cluster& cluster() const { return cluster_; }
  Registry& registry() { return *registry_; }
  const Registry& registry() const { return *registry_; }
  int replicas(std::string_view set) const;
  const Autoscaler& autoscaler() const { return autoscaler_; }

  /// Runs the global invariant sweep; throws InvariantViolation.
  void CheckInvariants() const;

 private:
  SimEvent& Log(EventKind kind, std::vector<std::pair<std::string, std::string>> fields);
  void LogTransition(const Transition& t);
  void DrainRegistry();
  void Transitioned(Pod& pod, const Transition& t);

  void ApplyTimeline();
  void RunReconcilers();
  void RunScheduler();
  void AdvanceLifecycles();
  void AdvancePod(Pod& pod, LifecycleContext& ctx);
  MetricsSample ComputeSample();
  void RunAutoscaler();
  void CollectGone();

  StatefulSetSpec& SetSpec(std::string_view name);
  const StatefulSetSpec* FirstSetOfKind(PodKind kind) const;
  Pod* MutablePod(std::string_view name);

  ScenarioConfig config_;
  std::unique_ptr<Registry> registry_;
  std::shared_ptr<WatchStream> registry_log_;
  Cluster cluster_;
  std::vector<StatefulSetSpec> sets_;
  std::vector<Pod> pods_;
  std::vector<FronthaulPair> pairs_;
  std::set<std::string> moved_this_tick_;
  Autoscaler autoscaler_;
  std::mt19937_64 rng_;
  SimTime now_;
  size_t next_command_ = 0;
  uint64_t seq_ = 0;
  std::vector<SimEvent> events_;
  std::vector<MetricsSample> samples_;
  bool halted_ = false;
};

}  // namespace cransim

#endif  // CRANSIM_SIMKERNEL_HPP_
