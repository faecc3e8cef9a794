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

#ifndef CRANSIM_CLUSTER_HPP_
#define CRANSIM_CLUSTER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cransim/ipv4.hpp"

namespace cransim {

enum class NodeRole { kMaster, kWorker };

std::string_view ToString(NodeRole role);

struct ResourceUsage {
  int64_t cpu_millicores = 0;
  int64_t mem_mib = 0;

  ResourceUsage& operator+=(const ResourceUsage& o) {
    cpu_millicores += o.cpu_millicores;
    mem_mib += o.mem_mib;
    return *this;
  }
  ResourceUsage& operator-=(const ResourceUsage& o) {
    cpu_millicores -= o.cpu_millicores;
    mem_mib -= o.mem_mib;
    return *this;
  }
  friend ResourceUsage operator+(ResourceUsage a, const ResourceUsage& b) { return a += b; }
  friend ResourceUsage operator*(int64_t k, ResourceUsage a) {
    return {k * a.cpu_millicores, k * a.mem_mib};
  }
  friend bool operator==(const ResourceUsage&, const ResourceUsage&) = default;
};

struct NodeSpec {
  std::string name;
  NodeRole role = NodeRole::kWorker;
  int64_t cpu_capacity = 0;  // millicores
  int64_t mem_capacity = 0;  // MiB
  Cidr pod_cidr;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct RouteEntry {
  Cidr dst_cidr;
  std::string via_node;

  friend bool operator==(const RouteEntry&, const RouteEntry&) = default;
};

enum class Admission { kAccept, kReject };

class ClusterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Validates a node list: positive capacities, unique names, exactly one
/// master, pairwise-disjoint pod CIDRs. Returns one message per problem.
std::vector<std::string> ValidateNodes(const std::vector<NodeSpec>& nodes);

/// Default pod CIDR for the node at `index`: 10.244.<index>.0/24.
Cidr DefaultPodCidr(int index);

/// Pure feasibility check: committed + request fits within capacity in both
/// dimensions.
Admission Admit(const ResourceUsage& request, const ResourceUsage& committed,
                const NodeSpec& node);

/// Node inventory, per-node IPAM, committed resource requests, and the
/// per-node virtual routers.
///
/// Address allocation: offset 0 (network) and the broadcast address are never
/// handed out and offset 1 belongs to the node's virtual router. Pods get the
/// lowest free offset starting at 2.
class Cluster {
 public:
  Cluster() = default;
  /// Throws ClusterError if ValidateNodes() reports any problem.
  explicit Cluster(std::vector<NodeSpec> nodes);

  const std::vector<NodeSpec>& nodes() const { return nodes_; }
  const NodeSpec& node(std::string_view name) const;
  bool has_node(std::string_view name) const;

  /// Returns nullopt when the CIDR has no free pod address left.
  std::optional<Ipv4> AllocateIp(std::string_view node_name);
  /// Throws ClusterError if `ip` is not currently allocated on that node.
  void ReleaseIp(std::string_view node_name, Ipv4 ip);
  size_t FreeAddresses(std::string_view node_name) const;
  bool IsAllocated(Ipv4 ip) const;
  /// Node owning an allocated pod ip; throws ClusterError otherwise.
  const std::string& NodeOf(Ipv4 ip) const;
  Ipv4 RouterAddress(std::string_view node_name) const;

  /// Hop sequence through the per-node virtual routers:
  /// [node(src)] when co-located, else [node(src), node(dst)].
  std::vector<std::string> Route(Ipv4 src, Ipv4 dst) const;
  /// One entry per peer node's pod CIDR.
  std::vector<RouteEntry> RouteTable(std::string_view node_name) const;

  Admission Admit(const ResourceUsage& request, std::string_view node_name) const;
  void Commit(const ResourceUsage& request, std::string_view node_name);
  void Uncommit(const ResourceUsage& request, std::string_view node_name);
  const ResourceUsage& committed(std::string_view node_name) const;

 private:
  struct NodeState {
    std::set<uint64_t> allocated;  // offsets within pod_cidr
    ResourceUsage committed;
  };

  size_t IndexOf(std::string_view name) const;

  std::vector<NodeSpec> nodes_;
  std::vector<NodeState> state_;
  std::map<Ipv4, size_t> owner_;  // allocated ip -> node index
};

}  // namespace cransim

#endif  // CRANSIM_CLUSTER_HPP_
