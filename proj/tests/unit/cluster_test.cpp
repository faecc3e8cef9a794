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

#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>
#include <set>

namespace cransim {
namespace {

NodeSpec Node(std::string name, NodeRole role, int index, int64_t cpu = 4000,
              int64_t mem = 8192) {
  return {std::move(name), role, cpu, mem, DefaultPodCidr(index)};
}

std::vector<NodeSpec> ThreeNodes() {
  return {Node("master", NodeRole::kMaster, 0), Node("worker-1", NodeRole::kWorker, 1),
          Node("worker-2", NodeRole::kWorker, 2)};
}

Ipv4 Ip(const char* text) { return *Ipv4::Parse(text); }

TEST(CidrTest, ParseAndArithmetic) {
  auto c = Cidr::Parse("10.244.1.0/24");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->size(), 256u);
  EXPECT_EQ(c->at(2), Ip("10.244.1.2"));
  EXPECT_EQ(c->broadcast(), Ip("10.244.1.255"));
  EXPECT_TRUE(c->Contains(Ip("10.244.1.77")));
  EXPECT_FALSE(c->Contains(Ip("10.244.2.1")));
  EXPECT_TRUE(c->Overlaps(*Cidr::Parse("10.244.0.0/16")));
  EXPECT_FALSE(c->Overlaps(*Cidr::Parse("10.244.2.0/24")));
  EXPECT_EQ(Cidr::Parse("10.244.1.5/24"), std::nullopt);
  EXPECT_EQ(Cidr::Parse("10.244.1.0/33"), std::nullopt);
  EXPECT_EQ(Cidr::Parse("garbage"), std::nullopt);
  EXPECT_EQ(DefaultPodCidr(2).ToString(), "10.244.2.0/24");
}

TEST(ClusterTest, ValidateNodes) {
  EXPECT_TRUE(ValidateNodes(ThreeNodes()).empty());

  auto no_master = ThreeNodes();
  no_master[0].role = NodeRole::kWorker;
  EXPECT_EQ(ValidateNodes(no_master), std::vector<std::string>{"exactly one MASTER required"});

  auto two_masters = ThreeNodes();
  two_masters[1].role = NodeRole::kMaster;
  EXPECT_EQ(ValidateNodes(two_masters), std::vector<std::string>{"exactly one MASTER required"});

  auto overlap = ThreeNodes();
  overlap[2].pod_cidr = *Cidr::Parse("10.244.1.128/25");
  EXPECT_FALSE(ValidateNodes(overlap).empty());

  auto dup = ThreeNodes();
  dup[2].name = "worker-1";
  EXPECT_FALSE(ValidateNodes(dup).empty());

  EXPECT_THROW(Cluster{no_master}, ClusterError);
}

TEST(ClusterTest, FirstAllocationSkipsNetworkAndRouter) {
  Cluster c(ThreeNodes());
  EXPECT_EQ(c.RouterAddress("worker-1"), Ip("10.244.1.1"));
  EXPECT_EQ(c.AllocateIp("worker-1"), Ip("10.244.1.2"));
  EXPECT_EQ(c.AllocateIp("worker-1"), Ip("10.244.1.3"));
  EXPECT_EQ(c.AllocateIp("master"), Ip("10.244.0.2"));
  EXPECT_EQ(c.NodeOf(Ip("10.244.1.3")), "worker-1");
}

TEST(ClusterTest, SlashThirtyHoldsOnePod) {
  auto nodes = ThreeNodes();
  nodes[1].pod_cidr = *Cidr::Parse("10.244.1.0/30");
  Cluster c(nodes);
  EXPECT_EQ(c.FreeAddresses("worker-1"), 1u);
  EXPECT_EQ(c.AllocateIp("worker-1"), Ip("10.244.1.2"));
  EXPECT_EQ(c.AllocateIp("worker-1"), std::nullopt);
  c.ReleaseIp("worker-1", Ip("10.244.1.2"));
  EXPECT_EQ(c.AllocateIp("worker-1"), Ip("10.244.1.2"));
}

TEST(ClusterTest, SlashTwentyFourExhaustsAfter253) {
  Cluster c(ThreeNodes());
  std::set<Ipv4> seen;
  for (int i = 0; i < 253; ++i) {
    auto ip = c.AllocateIp("worker-2");
    ASSERT_TRUE(ip);
    EXPECT_TRUE(seen.insert(*ip).second);
  }
  EXPECT_EQ(c.AllocateIp("worker-2"), std::nullopt);
  EXPECT_FALSE(seen.contains(Ip("10.244.2.0")));
  EXPECT_FALSE(seen.contains(Ip("10.244.2.1")));
  EXPECT_FALSE(seen.contains(Ip("10.244.2.255")));
}

TEST(ClusterTest, ReleaseErrors) {
  Cluster c(ThreeNodes());
  auto ip = *c.AllocateIp("worker-1");
  EXPECT_THROW(c.ReleaseIp("worker-2", ip), ClusterError);
  EXPECT_THROW(c.ReleaseIp("worker-1", Ip("10.244.1.9")), ClusterError);
  EXPECT_THROW(c.ReleaseIp("nope", ip), ClusterError);
  c.ReleaseIp("worker-1", ip);
  EXPECT_THROW(c.ReleaseIp("worker-1", ip), ClusterError);
  EXPECT_THROW(c.NodeOf(ip), ClusterError);
}

// Brute-force allocator: scan offsets 2..size-2 for the first free one.
class ReferenceAllocator {
 public:
  explicit ReferenceAllocator(Cidr cidr) : cidr_(cidr) {}
  std::optional<Ipv4> Allocate() {
    for (uint64_t off = 2; off + 1 < cidr_.size(); ++off) {
      if (!used_.contains(off)) {
        used_.insert(off);
        return cidr_.at(off);
      }
    }
    return std::nullopt;
  }
  void Release(Ipv4 ip) { used_.erase(ip.value() - cidr_.network().value()); }

 private:
  Cidr cidr_;
  std::set<uint64_t> used_;
};

TEST(ClusterTest, InterleavedAllocateReleaseMatchesBruteForce) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto nodes = ThreeNodes();
    nodes[1].pod_cidr = *Cidr::Parse("10.244.1.0/28");  // 13 usable
    Cluster c(nodes);
    std::map<std::string, ReferenceAllocator> ref;
    for (const auto& n : nodes) ref.emplace(n.name, ReferenceAllocator(n.pod_cidr));
    std::map<std::string, std::vector<Ipv4>> held;
    std::set<Ipv4> all_held;
    std::mt19937_64 rng(seed);
    for (int op = 0; op < 200; ++op) {
      const auto& node = nodes[rng() % nodes.size()];
      auto& mine = held[node.name];
      if (!mine.empty() && rng() % 3 == 0) {
        const size_t k = rng() % mine.size();
        c.ReleaseIp(node.name, mine[k]);
        ref.at(node.name).Release(mine[k]);
        all_held.erase(mine[k]);
        mine.erase(mine.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        auto got = c.AllocateIp(node.name);
        auto want = ref.at(node.name).Allocate();
        ASSERT_EQ(got, want) << "seed " << seed << " op " << op;
        if (got) {
          EXPECT_TRUE(node.pod_cidr.Contains(*got));
          EXPECT_NE(*got, c.RouterAddress(node.name));
          EXPECT_NE(*got, node.pod_cidr.network());
          EXPECT_NE(*got, node.pod_cidr.broadcast());
          EXPECT_TRUE(all_held.insert(*got).second) << "duplicate " << got->ToString();
          mine.push_back(*got);
        }
      }
    }
  }
}

// Shortest path over the star of per-node routers; returns the node sequence.
std::vector<std::string> BfsPath(const std::vector<NodeSpec>& nodes, const std::string& from,
                                 const std::string& to) {
  // Every pair of routers is directly connected (one L2 segment).
  std::map<std::string, std::string> parent{{from, from}};
  std::deque<std::string> q{from};
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    if (u == to) break;
    for (const auto& n : nodes) {
      if (!parent.contains(n.name)) {
        parent[n.name] = u;
        q.push_back(n.name);
      }
    }
  }
  std::vector<std::string> path{to};
  while (path.back() != from) path.push_back(parent.at(path.back()));
  return {path.rbegin(), path.rend()};
}

TEST(ClusterTest, RoutesMatchBfsForAllPairs) {
  const auto nodes = ThreeNodes();
  Cluster c(nodes);
  std::vector<Ipv4> ips;
  for (const auto& n : nodes) {
    for (int k = 0; k < 3; ++k) ips.push_back(*c.AllocateIp(n.name));
  }
  for (Ipv4 a : ips) {
    for (Ipv4 b : ips) {
      const auto route = c.Route(a, b);
      EXPECT_EQ(route, BfsPath(nodes, c.NodeOf(a), c.NodeOf(b)));
      auto back = c.Route(b, a);
      std::reverse(back.begin(), back.end());
      EXPECT_EQ(route, back);
    }
  }
}

TEST(ClusterTest, RouteTableListsPeerCidrs) {
  Cluster c(ThreeNodes());
  const auto table = c.RouteTable("master");
  ASSERT_EQ(table.size(), 2u);
  EXPECT_EQ(table[0], (RouteEntry{DefaultPodCidr(1), "worker-1"}));
  EXPECT_EQ(table[1], (RouteEntry{DefaultPodCidr(2), "worker-2"}));
}

TEST(AdmitTest, Examples) {
  const NodeSpec n = Node("w", NodeRole::kWorker, 1, 4000, 8192);
  EXPECT_EQ(Admit({1200, 512}, {2800, 0}, n), Admission::kAccept);
  EXPECT_EQ(Admit({1200, 512}, {2801, 0}, n), Admission::kReject);
  EXPECT_EQ(Admit({1, 8192}, {0, 1}, n), Admission::kReject);
  EXPECT_EQ(Admit({0, 0}, {4000, 8192}, n), Admission::kAccept);
}

TEST(AdmitTest, RandomSequencesAgainstRunningSum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Cluster c(ThreeNodes());
    std::map<std::string, ResourceUsage> sum;
    std::vector<std::pair<std::string, ResourceUsage>> committed;
    for (int op = 0; op < 200; ++op) {
      const std::string node = ThreeNodes()[rng() % 3].name;
      if (!committed.empty() && rng() % 4 == 0) {
        const size_t k = rng() % committed.size();
        auto [where, req] = committed[k];
        c.Uncommit(req, where);
        sum[where] -= req;
        committed.erase(committed.begin() + static_cast<std::ptrdiff_t>(k));
        continue;
      }
      const ResourceUsage req{static_cast<int64_t>(rng() % 1500),
                              static_cast<int64_t>(rng() % 3000)};
      const ResourceUsage after = sum[node] + req;
      const bool fits = after.cpu_millicores <= 4000 && after.mem_mib <= 8192;
      ASSERT_EQ(c.Admit(req, node), fits ? Admission::kAccept : Admission::kReject);
      if (fits) {
        c.Commit(req, node);
        sum[node] = after;
        committed.emplace_back(node, req);
      } else {
        EXPECT_THROW(c.Commit(req, node), ClusterError);
      }
      EXPECT_EQ(c.committed(node), sum[node]);
      EXPECT_LE(c.committed(node).cpu_millicores, 4000);
      EXPECT_LE(c.committed(node).mem_mib, 8192);
    }
  }
}

}  // namespace
}  // namespace cransim
