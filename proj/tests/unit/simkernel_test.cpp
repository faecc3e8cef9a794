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

#include <gtest/gtest.h>

#include "cransim/report.hpp"

namespace cransim {
namespace {

// Index of the first event matching `pred`, or -1.
template <typename Pred>
long FirstEvent(const Simulation& sim, Pred pred) {
  const auto& ev = sim.events();
  for (size_t i = 0; i < ev.size(); ++i) {
    if (pred(ev[i])) return static_cast<long>(i);
  }
  return -1;
}

bool Reached(const SimEvent& e, std::string_view pod, std::string_view phase) {
  return e.kind == EventKind::kPhaseTransition && e.Field("pod") == pod && e.Field("to") == phase;
}

ScenarioConfig Quiet() {
  ScenarioConfig cfg = PaperTestbed();
  cfg.timeline.clear();
  return cfg;
}

TEST(SimulationTest, EmptyStepsOnlySample) {
  Simulation sim(Quiet());
  for (int i = 0; i < 10; ++i) sim.Step();
  ASSERT_EQ(sim.samples().size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(sim.samples()[i].time, SimTime::FromSeconds(i));
    EXPECT_EQ(sim.samples()[i].fh.kbps, 0);
  }
  EXPECT_EQ(sim.now(), SimTime::FromSeconds(10));
  EXPECT_TRUE(sim.pods().empty());
  // The EPC registration is the only registry write.
  EXPECT_EQ(sim.registry().revision(), 1);
  EXPECT_EQ(sim.registry().Get("pods/epc/ip"), "192.168.56.10");
}

TEST(SimulationTest, RejectsInvalidConfig) {
  auto cfg = Quiet();
  cfg.tick = SimTime::FromMillis(0);
  EXPECT_THROW(Simulation{cfg}, ScenarioError);
}

TEST(SimulationTest, PodNeedsFourTicksToRun) {
  Simulation sim(Quiet());
  sim.Scale("rrh", 1);
  std::vector<Phase> seen;
  for (int i = 0; i < 5; ++i) {
    sim.Step();
    seen.push_back(sim.FindPod("rrh-0")->phase);
  }
  EXPECT_EQ(seen, (std::vector<Phase>{Phase::kPending, Phase::kScheduled, Phase::kStarting,
                                      Phase::kRegistering, Phase::kRunning}));
  EXPECT_EQ(sim.FindPod("rrh-0")->ip, Ipv4::Parse("10.244.1.2"));
}

TEST(SimulationTest, StockTimelineActivatesPairsOnSchedule) {
  Simulation sim(PaperTestbed());
  const RunResult r = sim.Run();
  ASSERT_FALSE(r.halted) << r.diagnostic;
  EXPECT_EQ(r.steps, 120);
  const auto& s = sim.samples();
  ASSERT_EQ(s.size(), 120u);
  for (const auto& sample : s) {
    const int64_t t = sample.time.ms / 1000;
    const int64_t want = t < 10 ? 0 : t < 60 ? 614000 : 1228000;
    EXPECT_EQ(sample.fh.kbps, want) << "t=" << t;
  }
  EXPECT_EQ(sim.FindPod("bbu-1")->node, "master");
  EXPECT_EQ(sim.FindPod("rrh-1")->node, "worker-2");
  EXPECT_EQ(sim.pairs().size(), 2u);
  EXPECT_EQ(sim.pairs()[0].activated_at, SimTime::FromSeconds(10));
  EXPECT_EQ(sim.pairs()[1].activated_at, SimTime::FromSeconds(60));
}

TEST(SimulationTest, RrhRegistersBeforeBbuRuns) {
  Simulation sim(PaperTestbed());
  sim.Run(SimTime::FromSeconds(15));
  const long put = FirstEvent(sim, [](const SimEvent& e) {
    return e.kind == EventKind::kRegistryMutation && e.Field("op") == "PUT" &&
           e.Field("key") == "pods/rrh-0/ip";
  });
  const long rrh = FirstEvent(sim, [](const SimEvent& e) { return Reached(e, "rrh-0", "RUNNING"); });
  const long bbu = FirstEvent(sim, [](const SimEvent& e) { return Reached(e, "bbu-0", "RUNNING"); });
  ASSERT_GE(put, 0);
  ASSERT_GE(rrh, 0);
  ASSERT_GE(bbu, 0);
  EXPECT_LT(put, rrh);
  EXPECT_LT(rrh, bbu);
  const Pod* b = sim.FindPod("bbu-0");
  EXPECT_EQ(b->peer_ip, sim.FindPod("rrh-0")->ip);
  EXPECT_EQ(b->epc_ip, Ipv4::Parse("192.168.56.10"));
}

TEST(SimulationTest, ShuffledOrderStillDiscoversSafely) {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    auto cfg = PaperTestbed();
    cfg.lifecycle_order = LifecycleOrder::kShuffled;
    cfg.seed = seed;
    Simulation sim(cfg);
    const RunResult r = sim.Run();
    ASSERT_FALSE(r.halted) << "seed " << seed << ": " << r.diagnostic;
    EXPECT_EQ(sim.samples().back().pairs_active, 2);
  }
}

TEST(SimulationTest, DeterministicForAGivenSeed) {
  auto cfg = PaperTestbed();
  cfg.lifecycle_order = LifecycleOrder::kShuffled;
  cfg.usage_jitter = true;
  cfg.seed = 42;
  Simulation a(cfg);
  Simulation b(cfg);
  a.Run();
  b.Run();
  EXPECT_EQ(a.samples(), b.samples());
  EXPECT_EQ(EmitEventLog(a.events(), LogVerbosity::kDebug),
            EmitEventLog(b.events(), LogVerbosity::kDebug));
}

TEST(SimulationTest, ScaleDownReleasesResources) {
  Simulation sim(PaperTestbed());
  sim.Run(SimTime::FromSeconds(70));
  sim.Scale("rrh", 0);
  sim.Scale("bbu", 0);
  sim.Run(SimTime::FromSeconds(5));
  EXPECT_TRUE(sim.pods().empty());
  EXPECT_TRUE(sim.pairs().empty());
  for (const auto& n : sim.cluster().nodes()) {
    EXPECT_EQ(sim.cluster().committed(n.name), (ResourceUsage{0, 0}));
  }
  EXPECT_EQ(sim.samples().back().fh.kbps, 0);
  // Only the EPC key is left.
  EXPECT_EQ(sim.registry().Range("pods/").size(), 1u);
}

TEST(SimulationTest, ThirdRrhStaysPendingWithReason) {
  auto cfg = Quiet();
  cfg.timeline = {{SimTime::FromSeconds(0), "rrh", 3}};
  Simulation sim(cfg);
  sim.Run(SimTime::FromSeconds(20));
  const Pod* p = sim.FindPod("rrh-2");
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->phase, Phase::kPending);
  EXPECT_EQ(p->reason, "no feasible node");
}

TEST(SimulationTest, DiscoveryRetryLimitFlagsBbu) {
  auto cfg = Quiet();
  cfg.discovery_retry_limit = 3;
  cfg.timeline = {{SimTime::FromSeconds(0), "bbu", 1}};  // no RRH ever appears
  Simulation sim(cfg);
  sim.Run(SimTime::FromSeconds(20));
  const Pod* b = sim.FindPod("bbu-0");
  EXPECT_EQ(b->phase, Phase::kDiscovering);
  EXPECT_TRUE(b->failed_discovery);
  EXPECT_EQ(b->discovery_attempts, 3);
  EXPECT_EQ(b->reason, "FAILED-DISCOVERY");
}

TEST(SimulationTest, FailureInsideStepHaltsTheRun) {
  auto cfg = Quiet();
  cfg.timeline = {{SimTime::FromSeconds(0), "rrh", 1}};
  Simulation sim(cfg);
  sim.registry().SetFaultHook([](std::string_view key) -> bool {
    if (key == "pods/rrh-0/ip") throw std::runtime_error("disk on fire");
    return false;
  });
  const RunResult r = sim.Run(SimTime::FromSeconds(10));
  EXPECT_TRUE(r.halted);
  EXPECT_EQ(r.steps, 4);  // the put happens on the fifth tick
  EXPECT_NE(r.diagnostic.find("disk on fire"), std::string::npos);
  EXPECT_EQ(sim.events().back().kind, EventKind::kHalt);
  EXPECT_THROW(sim.Step(), std::logic_error);
}

TEST(SimulationTest, AutoscalerScalesPairsTogether) {
  auto cfg = PaperTestbed();
  cfg.policy.enabled = true;
  cfg.policy.high_watermark = 0.25;  // a single RUNNING RRH (1200/4000) is "hot"
  cfg.policy.low_watermark = 0.05;
  cfg.timeline = {{SimTime::FromSeconds(0), "rrh", 1}, {SimTime::FromSeconds(0), "bbu", 1}};
  Simulation sim(cfg);
  ASSERT_FALSE(sim.Run(SimTime::FromSeconds(40)).halted);
  EXPECT_EQ(sim.replicas("rrh"), 2);
  EXPECT_EQ(sim.replicas("bbu"), 2);
  const long up = FirstEvent(sim, [](const SimEvent& e) {
    return e.kind == EventKind::kAutoscaleDecision && e.Field("decision") == "SCALE_UP";
  });
  ASSERT_GE(up, 0);
  EXPECT_EQ(sim.events()[up].Field("bbu"), "2");
  EXPECT_EQ(sim.events()[up].Field("rrh"), "2");
}

}  // namespace
}  // namespace cransim
