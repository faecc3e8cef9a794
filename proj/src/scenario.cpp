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

#include "cransim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace cransim {

using nlohmann::json;

namespace {

std::string Join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string Index(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  Reader(bool strict, LoadResult& out) : strict_(strict), out_(out) {}

  void Error(const std::string& path, const std::string& msg) {
    out_.errors.push_back(path.empty() ? msg : path + ": " + msg);
  }

  bool ExpectObject(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      Error(path, "expected an object");
      return false;
    }
    for (const auto& [key, _] : j.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      const std::string msg = Join(path, key) + ": unknown field";
      if (strict_) {
        out_.errors.push_back(msg);
      } else {
        out_.warnings.push_back(msg);
      }
    }
    return true;
  }

  template <typename T>
  std::optional<T> Field(const json& obj, const std::string& path, std::string_view key,
                         bool required) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) {
      if (required) Error(Join(path, key), "missing required field");
      return std::nullopt;
    }
    const std::string where = Join(path, key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) return Bad<T>(where, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) return Bad<T>(where, "expected a string");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) return Bad<T>(where, "expected a number");
    } else if constexpr (std::is_same_v<T, uint64_t>) {
      if (!it->is_number_unsigned()) return Bad<T>(where, "expected a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) return Bad<T>(where, "expected an integer");
    } else if constexpr (std::is_same_v<T, json>) {
      return *it;
    }
    return it->template get<T>();
  }

 private:
  template <typename T>
  std::optional<T> Bad(const std::string& where, const char* msg) {
    Error(where, msg);
    return std::nullopt;
  }

  bool strict_;
  LoadResult& out_;
};

std::optional<NodeRole> ParseRole(std::string_view s) {
  if (s == "MASTER") return NodeRole::kMaster;
  if (s == "WORKER") return NodeRole::kWorker;
  return std::nullopt;
}

std::optional<NodeSelector> ParseSelector(std::string_view s) {
  if (s == "MASTER") return NodeSelector::kMaster;
  if (s == "WORKER") return NodeSelector::kWorker;
  if (s == "ANY") return NodeSelector::kAny;
  return std::nullopt;
}

ResourceUsage ReadUsage(Reader& r, const json& j, const std::string& path) {
  ResourceUsage u;
  if (!r.ExpectObject(j, path, {"cpu_millicores", "mem_mib"})) return u;
  if (auto v = r.Field<int64_t>(j, path, "cpu_millicores", true)) u.cpu_millicores = *v;
  if (auto v = r.Field<int64_t>(j, path, "mem_mib", true)) u.mem_mib = *v;
  if (u.cpu_millicores < 0) r.Error(Join(path, "cpu_millicores"), "must be >= 0");
  if (u.mem_mib < 0) r.Error(Join(path, "mem_mib"), "must be >= 0");
  return u;
}

void ReadNodes(Reader& r, const json& arr, std::vector<NodeSpec>& nodes) {
  const std::string path = "nodes";
  if (!arr.is_array()) {
    r.Error(path, "expected an array");
    return;
  }
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Index(path, i);
    const json& j = arr[i];
    if (!r.ExpectObject(j, p, {"name", "role", "cpu_millicores", "mem_mib", "pod_cidr"})) continue;
    NodeSpec n;
    n.pod_cidr = DefaultPodCidr(static_cast<int>(i));
    if (auto v = r.Field<std::string>(j, p, "name", true)) n.name = *v;
    if (auto v = r.Field<std::string>(j, p, "role", true)) {
      if (auto role = ParseRole(*v)) {
        n.role = *role;
      } else {
        r.Error(Join(p, "role"), "must be MASTER or WORKER");
      }
    }
    if (auto v = r.Field<int64_t>(j, p, "cpu_millicores", true)) n.cpu_capacity = *v;
    if (auto v = r.Field<int64_t>(j, p, "mem_mib", true)) n.mem_capacity = *v;
    if (auto v = r.Field<std::string>(j, p, "pod_cidr", false)) {
      if (auto c = Cidr::Parse(*v)) {
        n.pod_cidr = *c;
      } else {
        r.Error(Join(p, "pod_cidr"), "invalid IPv4 CIDR '" + *v + "'");
      }
    }
    nodes.push_back(std::move(n));
  }
}

void ReadSets(Reader& r, const json& arr, std::vector<StatefulSetSpec>& sets) {
  const std::string path = "sets";
  if (!arr.is_array()) {
    r.Error(path, "expected an array");
    return;
  }
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Index(path, i);
    const json& j = arr[i];
    if (!r.ExpectObject(j, p, {"name", "kind", "replicas", "requests", "placement"})) continue;
    StatefulSetSpec s;
    if (auto v = r.Field<std::string>(j, p, "name", true)) s.name = *v;
    if (auto v = r.Field<std::string>(j, p, "kind", true)) {
      auto kind = ParsePodKind(*v);
      if (kind && *kind != PodKind::kEpc) {
        s.kind = *kind;
      } else {
        r.Error(Join(p, "kind"), "must be BBU or RRH");
      }
    }
    if (auto v = r.Field<int>(j, p, "replicas", false)) s.replicas = *v;
    if (auto v = r.Field<json>(j, p, "requests", true)) s.requests = ReadUsage(r, *v, Join(p, "requests"));
    if (auto v = r.Field<json>(j, p, "placement", false)) {
      const std::string pp = Join(p, "placement");
      if (r.ExpectObject(*v, pp, {"node_role", "anti_affinity"})) {
        if (auto sel = r.Field<std::string>(*v, pp, "node_role", false)) {
          if (auto parsed = ParseSelector(*sel)) {
            s.placement.selector = *parsed;
          } else {
            r.Error(Join(pp, "node_role"), "must be MASTER, WORKER or ANY");
          }
        }
        if (auto aa = r.Field<bool>(*v, pp, "anti_affinity", false)) s.placement.anti_affinity = *aa;
      }
    }
    sets.push_back(std::move(s));
  }
}

void ReadProfile(Reader& r, const json& j, WorkloadProfile& p) {
  const std::string path = "profile";
  if (!r.ExpectObject(j, path, {"bbu_cpu", "bbu_mem", "rrh_cpu_real", "rrh_cpu_oaisim_delta", "rrh_mem"})) {
    return;
  }
  if (auto v = r.Field<int64_t>(j, path, "bbu_cpu", false)) p.bbu_cpu = *v;
  if (auto v = r.Field<int64_t>(j, path, "bbu_mem", false)) p.bbu_mem = *v;
  if (auto v = r.Field<int64_t>(j, path, "rrh_cpu_real", false)) p.rrh_cpu_real = *v;
  if (auto v = r.Field<int64_t>(j, path, "rrh_cpu_oaisim_delta", false)) p.rrh_cpu_oaisim_delta = *v;
  if (auto v = r.Field<int64_t>(j, path, "rrh_mem", false)) p.rrh_mem = *v;
}

void ReadPolicy(Reader& r, const json& j, AutoscalePolicy& p) {
  const std::string path = "policy";
  if (!r.ExpectObject(j, path, {"enabled", "metric", "aggregation", "high_watermark", "low_watermark",
                                "min_replicas", "max_replicas", "cooldown_s"})) {
    return;
  }
  if (auto v = r.Field<bool>(j, path, "enabled", false)) p.enabled = *v;
  if (auto v = r.Field<std::string>(j, path, "metric", false)) {
    if (*v == "CPU") {
      p.metric = ScaleMetric::kCpu;
    } else if (*v == "MEMORY") {
      p.metric = ScaleMetric::kMemory;
    } else {
      r.Error(Join(path, "metric"), "must be CPU or MEMORY");
    }
  }
  if (auto v = r.Field<std::string>(j, path, "aggregation", false)) {
    if (*v == "MAX") {
      p.aggregation = MetricAggregation::kMax;
    } else if (*v == "MEAN") {
      p.aggregation = MetricAggregation::kMean;
    } else {
      r.Error(Join(path, "aggregation"), "must be MAX or MEAN");
    }
  }
  if (auto v = r.Field<double>(j, path, "high_watermark", false)) p.high_watermark = *v;
  if (auto v = r.Field<double>(j, path, "low_watermark", false)) p.low_watermark = *v;
  if (auto v = r.Field<int>(j, path, "min_replicas", false)) p.min_replicas = *v;
  if (auto v = r.Field<int>(j, path, "max_replicas", false)) p.max_replicas = *v;
  if (auto v = r.Field<double>(j, path, "cooldown_s", false)) p.cooldown = SimTime::FromSeconds(*v);
}

void ReadTimeline(Reader& r, const json& arr, std::vector<TimelineCommand>& timeline) {
  const std::string path = "timeline";
  if (!arr.is_array()) {
    r.Error(path, "expected an array");
    return;
  }
  for (size_t i = 0; i < arr.size(); ++i) {
    const std::string p = Index(path, i);
    const json& j = arr[i];
    if (!r.ExpectObject(j, p, {"time_s", "command", "set", "replicas"})) continue;
    TimelineCommand c;
    if (auto v = r.Field<double>(j, p, "time_s", true)) c.time = SimTime::FromSeconds(*v);
    if (auto v = r.Field<std::string>(j, p, "command", false); v && *v != "SCALE") {
      r.Error(Join(p, "command"), "unsupported command '" + *v + "' (only SCALE)");
    }
    if (auto v = r.Field<std::string>(j, p, "set", true)) c.set = *v;
    if (auto v = r.Field<int>(j, p, "replicas", true)) c.replicas = *v;
    timeline.push_back(std::move(c));
  }
}

void ReadLifecycle(Reader& r, const json& j, ScenarioConfig& cfg) {
  const std::string path = "lifecycle";
  if (!r.ExpectObject(j, path, {"order", "discovery_backoff_s", "discovery_retry_limit"})) return;
  if (auto v = r.Field<std::string>(j, path, "order", false)) {
    if (*v == "ORDERED") {
      cfg.lifecycle_order = LifecycleOrder::kOrdered;
    } else if (*v == "SHUFFLED") {
      cfg.lifecycle_order = LifecycleOrder::kShuffled;
    } else {
      r.Error(Join(path, "order"), "must be ORDERED or SHUFFLED");
    }
  }
  if (auto v = r.Field<double>(j, path, "discovery_backoff_s", false)) {
    cfg.discovery_backoff = SimTime::FromSeconds(*v);
  }
  if (auto v = r.Field<int>(j, path, "discovery_retry_limit", false)) cfg.discovery_retry_limit = *v;
}

json UsageJson(const ResourceUsage& u) {
  return {{"cpu_millicores", u.cpu_millicores}, {"mem_mib", u.mem_mib}};
}

}  // namespace

ScenarioConfig PaperTestbed() {
  ScenarioConfig cfg;
  cfg.name = "paper-testbed";
  // 7th-gen Core i5: 4 cores, 8 GiB each.
  cfg.nodes = {
      {"master", NodeRole::kMaster, 4000, 8192, DefaultPodCidr(0)},
      {"worker-1", NodeRole::kWorker, 4000, 8192, DefaultPodCidr(1)},
      {"worker-2", NodeRole::kWorker, 4000, 8192, DefaultPodCidr(2)},
  };
  cfg.sets = {
      {"rrh", PodKind::kRrh, 0, {1200, 512}, {NodeSelector::kWorker, true}},
      {"bbu", PodKind::kBbu, 0, {1000, 1024}, {NodeSelector::kMaster, false}},
  };
  cfg.ue_mode = UeMode::kOaisim;
  cfg.policy.enabled = false;
  cfg.policy.min_replicas = 1;
  cfg.policy.max_replicas = 2;  // one RRH per worker
  // A pod needs four ticks from creation to RUNNING, so scaling at 6 s and
  // 56 s brings the pairs up at 10 s and 60 s.
  cfg.timeline = {
      {SimTime::FromMillis(6'000), "rrh", 1},
      {SimTime::FromMillis(6'000), "bbu", 1},
      {SimTime::FromMillis(56'000), "rrh", 2},
      {SimTime::FromMillis(56'000), "bbu", 2},
  };
  cfg.duration = SimTime::FromMillis(120'000);
  cfg.seed = 1;
  return cfg;
}

std::vector<std::string> ValidateScenario(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  for (auto& e : ValidateNodes(cfg.nodes)) errors.push_back("nodes: " + e);
  for (auto& e : ValidateProfile(cfg.profile)) errors.push_back("profile: " + e);
  for (auto& e : ValidatePolicy(cfg.policy)) errors.push_back("policy: " + e);
  if (cfg.tick.ms <= 0) errors.push_back("tick_s: must be > 0");
  if (cfg.duration.ms < 0) errors.push_back("duration_s: must be >= 0");
  if (cfg.fh_rate.kbps <= 0) errors.push_back("fh_rate_mbps: must be > 0");
  if (cfg.discovery_backoff.ms < 0) errors.push_back("lifecycle.discovery_backoff_s: must be >= 0");
  if (cfg.discovery_retry_limit && *cfg.discovery_retry_limit < 1) {
    errors.push_back("lifecycle.discovery_retry_limit: must be >= 1");
  }
  for (const NodeSpec& n : cfg.nodes) {
    if (n.pod_cidr.Contains(cfg.epc_ip)) {
      errors.push_back("epc_ip: must lie outside pod_cidr of " + n.name);
    }
  }

  std::set<std::string> names;
  bool has_bbu = false;
  bool has_rrh = false;
  for (size_t i = 0; i < cfg.sets.size(); ++i) {
    const auto& s = cfg.sets[i];
    const std::string p = Index("sets", i);
    if (s.name.empty()) errors.push_back(p + ".name: must be non-empty");
    if (!names.insert(s.name).second) errors.push_back(p + ".name: duplicate set '" + s.name + "'");
    if (s.replicas < 0) errors.push_back(p + ".replicas: must be >= 0");
    if (s.kind == PodKind::kEpc) errors.push_back(p + ".kind: must be BBU or RRH");
    if (s.requests.cpu_millicores < 0 || s.requests.mem_mib < 0) {
      errors.push_back(p + ".requests: must be >= 0");
    }
    has_bbu |= s.kind == PodKind::kBbu;
    has_rrh |= s.kind == PodKind::kRrh;
  }
  if (has_bbu && !has_rrh) errors.push_back("sets: a BBU set needs an RRH set to pair with");

  for (size_t i = 0; i < cfg.timeline.size(); ++i) {
    const auto& c = cfg.timeline[i];
    const std::string p = Index("timeline", i);
    if (c.time.ms < 0) errors.push_back(p + ".time_s: must be >= 0");
    if (c.time > cfg.duration) errors.push_back(p + ".time_s: after duration");
    if (i > 0 && c.time < cfg.timeline[i - 1].time) errors.push_back(p + ".time_s: timeline not sorted");
    if (!names.contains(c.set)) errors.push_back(p + ".set: unknown set '" + c.set + "'");
    if (c.replicas < 0) errors.push_back(p + ".replicas: must be >= 0");
  }
  return errors;
}

LoadResult ParseScenario(std::string_view json_text, bool strict) {
  LoadResult out;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    out.errors.push_back(std::string("parse error: ") + e.what());
    return out;
  }
  Reader r(strict, out);
  if (!r.ExpectObject(root, "", {"name", "seed", "duration_s", "tick_s", "ue_mode", "fh_rate_mbps",
                                 "epc_ip", "nodes", "sets", "profile", "policy", "timeline",
                                 "lifecycle", "usage_jitter"})) {
    return out;
  }
  ScenarioConfig cfg;
  cfg.nodes.clear();
  if (auto v = r.Field<std::string>(root, "", "name", false)) cfg.name = *v;
  if (auto v = r.Field<uint64_t>(root, "", "seed", false)) cfg.seed = *v;
  if (auto v = r.Field<double>(root, "", "duration_s", true)) cfg.duration = SimTime::FromSeconds(*v);
  if (auto v = r.Field<double>(root, "", "tick_s", false)) cfg.tick = SimTime::FromSeconds(*v);
  if (auto v = r.Field<std::string>(root, "", "ue_mode", false)) {
    if (auto m = ParseUeMode(*v)) {
      cfg.ue_mode = *m;
    } else {
      r.Error("ue_mode", "must be OAISIM or REAL_UE");
    }
  }
  if (auto v = r.Field<double>(root, "", "fh_rate_mbps", false)) cfg.fh_rate = Throughput::FromMbps(*v);
  if (auto v = r.Field<std::string>(root, "", "epc_ip", false)) {
    if (auto ip = Ipv4::Parse(*v)) {
      cfg.epc_ip = *ip;
    } else {
      r.Error("epc_ip", "invalid IPv4 address '" + *v + "'");
    }
  }
  if (auto v = r.Field<bool>(root, "", "usage_jitter", false)) cfg.usage_jitter = *v;
  if (auto v = r.Field<json>(root, "", "nodes", true)) ReadNodes(r, *v, cfg.nodes);
  if (auto v = r.Field<json>(root, "", "sets", true)) ReadSets(r, *v, cfg.sets);
  if (auto v = r.Field<json>(root, "", "profile", false)) ReadProfile(r, *v, cfg.profile);
  if (auto v = r.Field<json>(root, "", "policy", false)) ReadPolicy(r, *v, cfg.policy);
  if (auto v = r.Field<json>(root, "", "timeline", false)) ReadTimeline(r, *v, cfg.timeline);
  if (auto v = r.Field<json>(root, "", "lifecycle", false)) ReadLifecycle(r, *v, cfg);

  for (auto& e : ValidateScenario(cfg)) out.errors.push_back(std::move(e));
  if (out.errors.empty()) out.config = std::move(cfg);
  return out;
}

LoadResult LoadScenario(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) {
    LoadResult out;
    out.errors.push_back(path.string() + ": cannot open scenario file");
    return out;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str(), strict);
}

std::string ScenarioToJson(const ScenarioConfig& cfg) {
  json nodes = json::array();
  for (const auto& n : cfg.nodes) {
    nodes.push_back({{"name", n.name},
                     {"role", std::string(ToString(n.role))},
                     {"cpu_millicores", n.cpu_capacity},
                     {"mem_mib", n.mem_capacity},
                     {"pod_cidr", n.pod_cidr.ToString()}});
  }
  json sets = json::array();
  for (const auto& s : cfg.sets) {
    sets.push_back({{"name", s.name},
                    {"kind", std::string(ToString(s.kind))},
                    {"replicas", s.replicas},
                    {"requests", UsageJson(s.requests)},
                    {"placement",
                     {{"node_role", std::string(ToString(s.placement.selector))},
                      {"anti_affinity", s.placement.anti_affinity}}}});
  }
  json timeline = json::array();
  for (const auto& c : cfg.timeline) {
    timeline.push_back(
        {{"time_s", c.time.seconds()}, {"command", "SCALE"}, {"set", c.set}, {"replicas", c.replicas}});
  }
  const auto& p = cfg.policy;
  json lifecycle = {{"order", cfg.lifecycle_order == LifecycleOrder::kOrdered ? "ORDERED" : "SHUFFLED"},
                    {"discovery_backoff_s", cfg.discovery_backoff.seconds()},
                    {"discovery_retry_limit", nullptr}};
  if (cfg.discovery_retry_limit) lifecycle["discovery_retry_limit"] = *cfg.discovery_retry_limit;

  json root = {
      {"name", cfg.name},
      {"seed", cfg.seed},
      {"duration_s", cfg.duration.seconds()},
      {"tick_s", cfg.tick.seconds()},
      {"ue_mode", std::string(ToString(cfg.ue_mode))},
      {"fh_rate_mbps", static_cast<double>(cfg.fh_rate.kbps) / 1000.0},
      {"epc_ip", cfg.epc_ip.ToString()},
      {"usage_jitter", cfg.usage_jitter},
      {"nodes", nodes},
      {"sets", sets},
      {"profile",
       {{"bbu_cpu", cfg.profile.bbu_cpu},
        {"bbu_mem", cfg.profile.bbu_mem},
        {"rrh_cpu_real", cfg.profile.rrh_cpu_real},
        {"rrh_cpu_oaisim_delta", cfg.profile.rrh_cpu_oaisim_delta},
        {"rrh_mem", cfg.profile.rrh_mem}}},
      {"policy",
       {{"enabled", p.enabled},
        {"metric", std::string(ToString(p.metric))},
        {"aggregation", std::string(ToString(p.aggregation))},
        {"high_watermark", p.high_watermark},
        {"low_watermark", p.low_watermark},
        {"min_replicas", p.min_replicas},
        {"max_replicas", p.max_replicas},
        {"cooldown_s", p.cooldown.seconds()}}},
      {"timeline", timeline},
      {"lifecycle", lifecycle},
  };
  return root.dump(2) + "\n";
}

}  // namespace cransim
