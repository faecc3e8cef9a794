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

#ifndef CRANSIM_AUTOSCALER_HPP_
#define CRANSIM_AUTOSCALER_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cransim/common.hpp"
#include "cransim/ranmodel.hpp"

namespace cransim {

enum class ScaleMetric { kCpu, kMemory };
enum class MetricAggregation { kMax, kMean };
enum class ScaleDecision { kScaleUp, kScaleDown, kHold };

std::string_view ToString(ScaleMetric m);
std::string_view ToString(MetricAggregation a);
std::string_view ToString(ScaleDecision d);

/// Watermark policy with hysteresis band [low, high] and a cooldown between
/// actions. Steps are always +/-1 pair.
struct AutoscalePolicy {
  ScaleMetric metric = ScaleMetric::kCpu;
  MetricAggregation aggregation = MetricAggregation::kMax;
  double high_watermark = 0.80;
  double low_watermark = 0.30;
  int min_replicas = 1;
  int max_replicas = 2;
  SimTime cooldown = SimTime::FromMillis(30'000);
  bool enabled = false;

  friend bool operator==(const AutoscalePolicy&, const AutoscalePolicy&) = default;
};

std::vector<std::string> ValidatePolicy(const AutoscalePolicy& policy);

/// Metric fraction of `sample` aggregated over nodes (max or mean of
/// used/capacity).
double LoadFraction(const AutoscalePolicy& policy, const MetricsSample& sample);

/// Pure decision over the latest of `samples`. `last_action` is nullopt when
/// the policy has never acted. Throws std::invalid_argument on empty samples.
ScaleDecision Evaluate(const AutoscalePolicy& policy, std::span<const MetricsSample> samples,
                       int current_replicas, std::optional<SimTime> last_action, SimTime now);

struct PairReplicas {
  int bbu = 0;
  int rrh = 0;

  friend bool operator==(const PairReplicas&, const PairReplicas&) = default;
};

/// Moves both sets by the same step, clamped to [min, max].
PairReplicas Apply(ScaleDecision decision, PairReplicas current, const AutoscalePolicy& policy);

/// Evaluate() plus the single piece of state it needs.
class Autoscaler {
 public:
  explicit Autoscaler(AutoscalePolicy policy) : policy_(std::move(policy)) {}

  ScaleDecision Tick(std::span<const MetricsSample> samples, int current_replicas, SimTime now);

  const AutoscalePolicy& policy() const { return policy_; }
  std::optional<SimTime> last_action() const { return last_action_; }

 private:
  AutoscalePolicy policy_;
  std::optional<SimTime> last_action_;
};

}  // namespace cransim

#endif  // CRANSIM_AUTOSCALER_HPP_
