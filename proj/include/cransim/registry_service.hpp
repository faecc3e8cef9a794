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

// Line-oriented TCP front end for Registry.
//
// Requests (one per '\n'-terminated UTF-8 line):
//   PUT <key> <base64(value)>   -> OK <rev>
//   GET <key>                   -> OK <rev> <base64(value)> | ABSENT
//   DEL <key>                   -> OK <rev> | ABSENT
//   WATCH <prefix> <rev>        -> OK <store-rev>, then a stream of
//                                  EVT <PUT|DEL> <rev> <key> <base64(value)>
// Any failure answers ERR <message>. After WATCH the connection carries only
// events until the client disconnects.

#ifndef CRANSIM_REGISTRY_SERVICE_HPP_
#define CRANSIM_REGISTRY_SERVICE_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cransim/registry.hpp"

namespace cransim {

std::string Base64Encode(std::string_view raw);
/// Returns nullopt for input that is not canonical padded base64.
std::optional<std::string> Base64Decode(std::string_view text);

std::string FormatWatchEvent(const WatchEvent& ev);

struct ProtocolReply {
  std::string line;
  // Set for a successful WATCH; the caller pumps it onto the connection.
  std::shared_ptr<WatchStream> watch;
};

/// Executes one request line against `registry`. Never throws.
ProtocolReply HandleRequestLine(Registry& registry, std::string_view line);

class RegistryServer {
 public:
  explicit RegistryServer(Registry& registry) : registry_(registry) {}
  ~RegistryServer();

  RegistryServer(const RegistryServer&) = delete;
  RegistryServer& operator=(const RegistryServer&) = delete;

  /// Binds and starts accepting in a background thread. Port 0 picks an
  /// ephemeral port. Returns the bound port; throws std::system_error.
  uint16_t Start(const std::string& host, uint16_t port);
  void Stop();

 private:
  void AcceptLoop();
  void Serve(int fd);

  Registry& registry_;
  std::atomic<bool> stopping_{false};
  int listen_fd_ = -1;
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> sessions_;
  std::vector<int> session_fds_;
};

}  // namespace cransim

#endif  // CRANSIM_REGISTRY_SERVICE_HPP_
