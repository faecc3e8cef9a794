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

#include "cransim/registry.hpp"

#include <algorithm>

namespace cransim {

namespace {

bool IsBadChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u <= 0x20 || u == 0x7f;
}

void CheckKey(std::string_view key) {
  if (!Registry::IsValidKey(key)) {
    throw MalformedKey("malformed key: '" + std::string(key) + "'");
  }
}

}  // namespace

std::string PodIpKey(std::string_view pod_name) {
  return std::string(kPodKeyPrefix) + std::string(pod_name) + "/ip";
}

std::string PodSimKey(std::string_view pod_name) {
  return std::string(kPodKeyPrefix) + std::string(pod_name) + "/sim";
}

std::vector<WatchEvent> WatchStream::Drain() {
  std::lock_guard lock(mu_);
  std::vector<WatchEvent> out(queue_.begin(), queue_.end());
  queue_.clear();
  return out;
}

std::optional<WatchEvent> WatchStream::Next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return cancelled_ || !queue_.empty(); });
  if (queue_.empty() || cancelled_) return std::nullopt;
  WatchEvent ev = std::move(queue_.front());
  queue_.pop_front();
  return ev;
}

void WatchStream::Cancel() {
  {
    std::lock_guard lock(mu_);
    cancelled_ = true;
  }
  cv_.notify_all();
}

bool WatchStream::cancelled() const {
  std::lock_guard lock(mu_);
  return cancelled_;
}

void WatchStream::Push(const WatchEvent& ev) {
  {
    std::lock_guard lock(mu_);
    if (cancelled_) return;
    queue_.push_back(ev);
  }
  cv_.notify_one();
}

bool Registry::IsValidKey(std::string_view key) {
  if (key.empty()) return false;
  if (std::any_of(key.begin(), key.end(), IsBadChar)) return false;
  // Path segments must be non-empty: no leading, trailing or doubled '/'.
  if (key.front() == '/' || key.back() == '/') return false;
  return key.find("//") == std::string_view::npos;
}

bool Registry::IsValidPrefix(std::string_view prefix) {
  return std::none_of(prefix.begin(), prefix.end(), IsBadChar);
}

int64_t Registry::Put(std::string_view key, std::string value) {
  CheckKey(key);
  std::lock_guard lock(mu_);
  if (fault_hook_ && fault_hook_(key)) {
    throw RegistryUnavailable("put refused for key '" + std::string(key) + "'");
  }
  const int64_t rev = ++revision_;
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    it = entries_.emplace(std::string(key), RegistryEntry{std::string(key), {}, 0})
             .first;
  }
  it->second.value = std::move(value);
  it->second.revision = rev;
  Publish(WatchEvent{WatchEventKind::kPut, it->second, rev});
  return rev;
}

std::optional<std::string> Registry::Get(std::string_view key) const {
  auto r = GetWithRevision(key);
  if (!r.entry) return std::nullopt;
  return std::move(r.entry->value);
}

Registry::ReadResult Registry::GetWithRevision(std::string_view key) const {
  CheckKey(key);
  std::lock_guard lock(mu_);
  ReadResult r;
  r.revision = revision_;
  if (auto it = entries_.find(key); it != entries_.end()) r.entry = it->second;
  return r;
}

std::optional<int64_t> Registry::Delete(std::string_view key) {
  CheckKey(key);
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  const int64_t rev = ++revision_;
  RegistryEntry removed = std::move(it->second);
  entries_.erase(it);
  removed.revision = rev;
  Publish(WatchEvent{WatchEventKind::kDelete, std::move(removed), rev});
  return rev;
}

std::vector<RegistryEntry> Registry::Range(std::string_view prefix) const {
  if (!IsValidPrefix(prefix)) {
    throw MalformedKey("malformed prefix: '" + std::string(prefix) + "'");
  }
  std::lock_guard lock(mu_);
  std::vector<RegistryEntry> out;
  for (auto it = entries_.lower_bound(prefix);
       it != entries_.end() && it->first.starts_with(prefix); ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::shared_ptr<WatchStream> Registry::Watch(std::string_view prefix,
                                             int64_t from_revision) {
  if (!IsValidPrefix(prefix)) {
    throw MalformedKey("malformed prefix: '" + std::string(prefix) + "'");
  }
  auto stream = std::make_shared<WatchStream>(std::string(prefix));
  std::lock_guard lock(mu_);
  // history_[i] has revision i + 1.
  const int64_t start = std::max<int64_t>(from_revision, 0);
  for (int64_t i = start; i < static_cast<int64_t>(history_.size()); ++i) {
    if (history_[i].entry.key.starts_with(prefix)) stream->Push(history_[i]);
  }
  watchers_.push_back(stream);
  return stream;
}

int64_t Registry::revision() const {
  std::lock_guard lock(mu_);
  return revision_;
}

size_t Registry::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void Registry::SetFaultHook(FaultHook hook) {
  std::lock_guard lock(mu_);
  fault_hook_ = std::move(hook);
}

void Registry::Publish(const WatchEvent& ev) {
  history_.push_back(ev);
  std::erase_if(watchers_, [&](const std::weak_ptr<WatchStream>& w) {
    auto s = w.lock();
    if (!s || s->cancelled()) return true;
    if (ev.entry.key.starts_with(s->prefix())) s->Push(ev);
    return false;
  });
}

}  // namespace cransim
