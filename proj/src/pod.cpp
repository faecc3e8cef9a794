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

#include "cransim/pod.hpp"

namespace cransim {

std::string_view ToString(PodKind kind) {
  switch (kind) {
    case PodKind::kBbu: return "BBU";
    case PodKind::kRrh: return "RRH";
    case PodKind::kEpc: return "EPC";
  }
  return "?";
}

std::optional<PodKind> ParsePodKind(std::string_view text) {
  if (text == "BBU") return PodKind::kBbu;
  if (text == "RRH") return PodKind::kRrh;
  if (text == "EPC") return PodKind::kEpc;
  return std::nullopt;
}

std::string_view ToString(Phase phase) {
  switch (phase) {
    case Phase::kPending: return "PENDING";
    case Phase::kScheduled: return "SCHEDULED";
    case Phase::kStarting: return "STARTING";
    case Phase::kRegistering: return "REGISTERING";
    case Phase::kDiscovering: return "DISCOVERING";
    case Phase::kRunning: return "RUNNING";
    case Phase::kTerminating: return "TERMINATING";
    case Phase::kGone: return "GONE";
  }
  return "?";
}

bool IsValidTransition(PodKind kind, Phase from, Phase to) {
  if (to == Phase::kTerminating) return from != Phase::kTerminating && from != Phase::kGone;
  switch (from) {
    case Phase::kPending: return to == Phase::kScheduled;
    case Phase::kScheduled: return to == Phase::kStarting;
    case Phase::kStarting:
      switch (kind) {
        case PodKind::kRrh: return to == Phase::kRegistering;
        case PodKind::kBbu: return to == Phase::kDiscovering;
        case PodKind::kEpc: return to == Phase::kRunning;
      }
      return false;
    case Phase::kRegistering: return kind == PodKind::kRrh && to == Phase::kRunning;
    case Phase::kDiscovering: return kind == PodKind::kBbu && to == Phase::kRunning;
    case Phase::kRunning: return false;
    case Phase::kTerminating: return to == Phase::kGone;
    case Phase::kGone: return false;
  }
  return false;
}

std::string_view ToString(NodeSelector sel) {
  switch (sel) {
    case NodeSelector::kMaster: return "MASTER";
    case NodeSelector::kWorker: return "WORKER";
    case NodeSelector::kAny: return "ANY";
  }
  return "?";
}

bool Matches(NodeSelector sel, NodeRole role) {
  switch (sel) {
    case NodeSelector::kMaster: return role == NodeRole::kMaster;
    case NodeSelector::kWorker: return role == NodeRole::kWorker;
    case NodeSelector::kAny: return true;
  }
  return false;
}

std::string PodName(std::string_view set, int ordinal) {
  return std::string(set) + "-" + std::to_string(ordinal);
}

}  // namespace cransim
