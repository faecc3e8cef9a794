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

#include "cransim/cluster.hpp"

#include <algorithm>

namespace cransim {

namespace {

constexpr uint64_t kRouterOffset = 1;
constexpr uint64_t kFirstPodOffset = 2;

// Offsets [2, size-1) are assignable; tiny blocks have none.
uint64_t LastPodOffsetExclusive(const Cidr& c) {
  return c.size() >= 4 ? c.size() - 1 : kFirstPodOffset;
}

}  // namespace

std::string_view ToString(NodeRole role) {
  return role == NodeRole::kMaster ? "MASTER" : "WORKER";
}

Cidr DefaultPodCidr(int index) {
  return Cidr(Ipv4((10u << 24) | (244u << 16) | (static_cast<uint32_t>(index) << 8)), 24);
}

std::vector<std::string> ValidateNodes(const std::vector<NodeSpec>& nodes) {
  std::vector<std::string> errors;
  const auto masters = std::count_if(nodes.begin(), nodes.end(), [](const NodeSpec& n) {
    return n.role == NodeRole::kMaster;
  });
  if (masters != 1) errors.push_back("exactly one MASTER required");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const NodeSpec& n = nodes[i];
    if (n.name.empty()) errors.push_back("node " + std::to_string(i) + ": empty name");
    if (n.cpu_capacity <= 0) errors.push_back("node " + n.name + ": cpu_capacity must be > 0");
    if (n.mem_capacity <= 0) errors.push_back("node " + n.name + ": mem_capacity must be > 0");
    for (size_t j = 0; j < i; ++j) {
      if (nodes[j].name == n.name) errors.push_back("duplicate node name " + n.name);
      if (nodes[j].pod_cidr.Overlaps(n.pod_cidr)) {
        errors.push_back("pod_cidr of " + n.name + " overlaps " + nodes[j].name);
      }
    }
  }
  return errors;
}

Admission Admit(const ResourceUsage& request, const ResourceUsage& committed,
                const NodeSpec& node) {
  const bool fits = committed.cpu_millicores + request.cpu_millicores <= node.cpu_capacity &&
                    committed.mem_mib + request.mem_mib <= node.mem_capacity;
  return fits ? Admission::kAccept : Admission::kReject;
}

Cluster::Cluster(std::vector<NodeSpec> nodes) : nodes_(std::move(nodes)) {
  if (auto errors = ValidateNodes(nodes_); !errors.empty()) {
    std::string msg = "invalid cluster:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw ClusterError(msg);
  }
  state_.resize(nodes_.size());
}

size_t Cluster::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return i;
  }
  throw ClusterError("unknown node '" + std::string(name) + "'");
}

const NodeSpec& Cluster::node(std::string_view name) const { return nodes_[IndexOf(name)]; }

bool Cluster::has_node(std::string_view name) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [&](const NodeSpec& n) { return n.name == name; });
}

std::optional<Ipv4> Cluster::AllocateIp(std::string_view node_name) {
  const size_t idx = IndexOf(node_name);
  const Cidr& cidr = nodes_[idx].pod_cidr;
  auto& used = state_[idx].allocated;
  uint64_t offset = kFirstPodOffset;
  for (uint64_t taken : used) {  // ordered; find the first hole
    if (taken != offset) break;
    ++offset;
  }
  if (offset >= LastPodOffsetExclusive(cidr)) return std::nullopt;
  used.insert(offset);
  const Ipv4 ip = cidr.at(offset);
  owner_[ip] = idx;
  return ip;
}

void Cluster::ReleaseIp(std::string_view node_name, Ipv4 ip) {
  const size_t idx = IndexOf(node_name);
  auto it = owner_.find(ip);
  if (it == owner_.end() || it->second != idx) {
    throw ClusterError("release of unallocated ip " + ip.ToString() + " on " +
                       std::string(node_name));
  }
  state_[idx].allocated.erase(ip.value() - nodes_[idx].pod_cidr.network().value());
  owner_.erase(it);
}

size_t Cluster::FreeAddresses(std::string_view node_name) const {
  const size_t idx = IndexOf(node_name);
  const uint64_t usable = LastPodOffsetExclusive(nodes_[idx].pod_cidr) - kFirstPodOffset;
  return static_cast<size_t>(usable - state_[idx].allocated.size());
}

bool Cluster::IsAllocated(Ipv4 ip) const { return owner_.contains(ip); }

const std::string& Cluster::NodeOf(Ipv4 ip) const {
  auto it = owner_.find(ip);
  if (it == owner_.end()) throw ClusterError("ip " + ip.ToString() + " is not allocated");
  return nodes_[it->second].name;
}

Ipv4 Cluster::RouterAddress(std::string_view node_name) const {
  return nodes_[IndexOf(node_name)].pod_cidr.at(kRouterOffset);
}

std::vector<std::string> Cluster::Route(Ipv4 src, Ipv4 dst) const {
  const std::string& a = NodeOf(src);
  const std::string& b = NodeOf(dst);
  if (a == b) return {a};
  return {a, b};
}

std::vector<RouteEntry> Cluster::RouteTable(std::string_view node_name) const {
  const size_t self = IndexOf(node_name);
  std::vector<RouteEntry> table;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (i != self) table.push_back({nodes_[i].pod_cidr, nodes_[i].name});
  }
  return table;
}

Admission Cluster::Admit(const ResourceUsage& request, std::string_view node_name) const {
  const size_t idx = IndexOf(node_name);
  return cransim::Admit(request, state_[idx].committed, nodes_[idx]);
}

void Cluster::Commit(const ResourceUsage& request, std::string_view node_name) {
  const size_t idx = IndexOf(node_name);
  if (cransim::Admit(request, state_[idx].committed, nodes_[idx]) != Admission::kAccept) {
    throw ClusterError("commit exceeds capacity of " + std::string(node_name));
  }
  state_[idx].committed += request;
}

void Cluster::Uncommit(const ResourceUsage& request, std::string_view node_name) {
  auto& c = state_[IndexOf(node_name)].committed;
  if (c.cpu_millicores < request.cpu_millicores || c.mem_mib < request.mem_mib) {
    throw ClusterError("uncommit below zero on " + std::string(node_name));
  }
  c -= request;
}

const ResourceUsage& Cluster::committed(std::string_view node_name) const {
  return state_[IndexOf(node_name)].committed;
}

}  // namespace cransim
