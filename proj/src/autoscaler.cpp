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

#include "cransim/autoscaler.hpp"

#include <algorithm>
#include <stdexcept>

namespace cransim {

std::string_view ToString(ScaleMetric m) { return m == ScaleMetric::kCpu ? "CPU" : "MEMORY"; }

std::string_view ToString(MetricAggregation a) {
  return a == MetricAggregation::kMax ? "MAX" : "MEAN";
}

std::string_view ToString(ScaleDecision d) {
  switch (d) {
    case ScaleDecision::kScaleUp: return "SCALE_UP";
    case ScaleDecision::kScaleDown: return "SCALE_DOWN";
    case ScaleDecision::kHold: return "HOLD";
  }
  return "?";
}

std::vector<std::string> ValidatePolicy(const AutoscalePolicy& p) {
  std::vector<std::string> errors;
  if (!(p.high_watermark > 0.0 && p.high_watermark <= 1.0)) {
    errors.push_back("high_watermark must be in (0, 1]");
  }
  if (!(p.low_watermark >= 0.0 && p.low_watermark < p.high_watermark)) {
    errors.push_back("low_watermark must be in [0, high_watermark)");
  }
  if (p.min_replicas < 0) errors.push_back("min_replicas must be >= 0");
  if (p.max_replicas < p.min_replicas) errors.push_back("max_replicas must be >= min_replicas");
  if (p.cooldown.ms < 0) errors.push_back("cooldown_s must be >= 0");
  return errors;
}

double LoadFraction(const AutoscalePolicy& policy, const MetricsSample& sample) {
  double peak = 0.0;
  double sum = 0.0;
  for (const NodeSample& n : sample.nodes) {
    const bool cpu = policy.metric == ScaleMetric::kCpu;
    const double used = static_cast<double>(cpu ? n.used.cpu_millicores : n.used.mem_mib);
    const double cap = static_cast<double>(cpu ? n.capacity.cpu_millicores : n.capacity.mem_mib);
    const double f = cap > 0 ? used / cap : 0.0;
    peak = std::max(peak, f);
    sum += f;
  }
  if (policy.aggregation == MetricAggregation::kMax || sample.nodes.empty()) return peak;
  return sum / static_cast<double>(sample.nodes.size());
}

ScaleDecision Evaluate(const AutoscalePolicy& policy, std::span<const MetricsSample> samples,
                       int current_replicas, std::optional<SimTime> last_action, SimTime now) {
  if (samples.empty()) throw std::invalid_argument("autoscaler needs at least one sample");
  if (!policy.enabled) return ScaleDecision::kHold;
  const bool cooled = !last_action || now - *last_action >= policy.cooldown;
  if (!cooled) return ScaleDecision::kHold;
  const double load = LoadFraction(policy, samples.back());
  if (load > policy.high_watermark && current_replicas < policy.max_replicas) {
    return ScaleDecision::kScaleUp;
  }
  if (load < policy.low_watermark && current_replicas > policy.min_replicas) {
    return ScaleDecision::kScaleDown;
  }
  return ScaleDecision::kHold;
}

PairReplicas Apply(ScaleDecision decision, PairReplicas current, const AutoscalePolicy& policy) {
  const int delta = decision == ScaleDecision::kScaleUp     ? 1
                    : decision == ScaleDecision::kScaleDown ? -1
                                                            : 0;
  if (delta == 0) return current;
  auto clamp = [&](int v) { return std::clamp(v + delta, policy.min_replicas, policy.max_replicas); };
  return {clamp(current.bbu), clamp(current.rrh)};
}

ScaleDecision Autoscaler::Tick(std::span<const MetricsSample> samples, int current_replicas,
                               SimTime now) {
  const ScaleDecision d = Evaluate(policy_, samples, current_replicas, last_action_, now);
  if (d != ScaleDecision::kHold) last_action_ = now;
  return d;
}

}  // namespace cransim
