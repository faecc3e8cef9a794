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

#ifndef CRANSIM_REGISTRY_HPP_
#define CRANSIM_REGISTRY_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cransim {

// Discovery keys live under "pods/<pod-name>/{ip,sim}".
inline constexpr std::string_view kPodKeyPrefix = "pods/";
std::string PodIpKey(std::string_view pod_name);
std::string PodSimKey(std::string_view pod_name);

class MalformedKey : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by Put when an installed fault hook refuses the write. The store is
/// left unchanged.
class RegistryUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RegistryEntry {
  std::string key;
  std::string value;
  int64_t revision = 0;  // revision of the last mutation of this key

  friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

enum class WatchEventKind { kPut, kDelete };

struct WatchEvent {
  WatchEventKind kind = WatchEventKind::kPut;
  // For deletes, `entry.value` carries the value that was removed.
  RegistryEntry entry;
  int64_t revision = 0;

  friend bool operator==(const WatchEvent&, const WatchEvent&) = default;
};

/// Consumer side of a watch. Mutators only append to an unbounded queue, so a
/// slow consumer never blocks a writer.
class WatchStream {
 public:
  explicit WatchStream(std::string prefix) : prefix_(std::move(prefix)) {}

  const std::string& prefix() const { return prefix_; }

  /// Returns every queued event without waiting.
  std::vector<WatchEvent> Drain();
  /// Waits up to `timeout` for the next event. Returns nullopt on timeout or
  /// after Cancel().
  std::optional<WatchEvent> Next(std::chrono::milliseconds timeout);
  void Cancel();
  bool cancelled() const;

 private:
  friend class Registry;
  void Push(const WatchEvent& ev);

  const std::string prefix_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<WatchEvent> queue_;
  bool cancelled_ = false;
};

/// In-process revisioned key-value store with prefix watch.
///
/// Every successful mutation takes the next value of a single store-wide
/// counter, so revisions are gap-free: the n-th successful mutation returns
/// revision n. All operations take one mutex and are therefore linearizable;
/// the linearization point of each operation is its critical section.
class Registry {
 public:
  struct ReadResult {
    std::optional<RegistryEntry> entry;
    int64_t revision = 0;  // store revision at which the read was served
  };

  using FaultHook = std::function<bool(std::string_view key)>;

  /// Throws MalformedKey for keys that are empty, contain whitespace or
  /// control characters, or have empty path segments.
  int64_t Put(std::string_view key, std::string value);
  std::optional<std::string> Get(std::string_view key) const;
  ReadResult GetWithRevision(std::string_view key) const;
  /// Returns the revision of the delete, or nullopt (store untouched) when the
  /// key was absent.
  std::optional<int64_t> Delete(std::string_view key);
  std::vector<RegistryEntry> Range(std::string_view prefix) const;

  /// Opens a stream receiving all mutations under `prefix` with revision
  /// greater than `from_revision`. Past events still in history are queued
  /// immediately; a `from_revision` ahead of the store yields an empty stream
  /// until the store catches up.
  std::shared_ptr<WatchStream> Watch(std::string_view prefix,
                                     int64_t from_revision);

  int64_t revision() const;
  size_t size() const;

  /// When the hook returns true for a key, Put throws RegistryUnavailable.
  void SetFaultHook(FaultHook hook);

  static bool IsValidKey(std::string_view key);
  static bool IsValidPrefix(std::string_view prefix);

 private:
  void Publish(const WatchEvent& ev);  // requires mu_

  mutable std::mutex mu_;
  std::map<std::string, RegistryEntry, std::less<>> entries_;
  std::vector<WatchEvent> history_;
  std::vector<std::weak_ptr<WatchStream>> watchers_;
  int64_t revision_ = 0;
  FaultHook fault_hook_;
};

}  // namespace cransim

#endif  // CRANSIM_REGISTRY_HPP_
