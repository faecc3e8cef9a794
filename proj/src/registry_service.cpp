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

#include "cransim/registry_service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <openssl/evp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <sstream>
#include <system_error>

namespace cransim {

namespace {

std::vector<std::string_view> SplitWords(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    size_t j = line.find(' ', i);
    if (j == std::string_view::npos) j = line.size();
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool WriteAll(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<size_t>(n));
  }
  return true;
}

[[noreturn]] void ThrowErrno(const char* what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::string Base64Encode(std::string_view raw) {
  std::string out(4 * ((raw.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(raw.data()),
                                static_cast<int>(raw.size()));
  out.resize(static_cast<size_t>(n));
  return out;
}

std::optional<std::string> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  if (text.empty()) return std::string();
  std::string out(3 * text.size() / 4, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  // EVP_DecodeBlock counts padding as zero bytes.
  size_t pad = 0;
  if (text.back() == '=') ++pad;
  if (text.size() >= 2 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<size_t>(n) - pad);
  if (Base64Encode(out) != text) return std::nullopt;
  return out;
}

std::string FormatWatchEvent(const WatchEvent& ev) {
  std::ostringstream os;
  os << "EVT " << (ev.kind == WatchEventKind::kPut ? "PUT" : "DEL") << ' '
     << ev.revision << ' ' << ev.entry.key << ' ' << Base64Encode(ev.entry.value);
  return os.str();
}

ProtocolReply HandleRequestLine(Registry& registry, std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto words = SplitWords(line);
  auto err = [](std::string msg) { return ProtocolReply{"ERR " + msg, nullptr}; };
  if (words.empty()) return err("empty request");
  const std::string_view verb = words[0];
  try {
    if (verb == "PUT") {
      if (words.size() != 3) return err("usage: PUT <key> <base64>");
      auto value = Base64Decode(words[2]);
      if (!value) return err("invalid base64 value");
      const int64_t rev = registry.Put(words[1], std::move(*value));
      return {"OK " + std::to_string(rev), nullptr};
    }
    if (verb == "GET") {
      if (words.size() != 2) return err("usage: GET <key>");
      auto r = registry.GetWithRevision(words[1]);
      if (!r.entry) return {"ABSENT", nullptr};
      return {"OK " + std::to_string(r.entry->revision) + " " +
                  Base64Encode(r.entry->value),
              nullptr};
    }
    if (verb == "DEL") {
      if (words.size() != 2) return err("usage: DEL <key>");
      auto rev = registry.Delete(words[1]);
      if (!rev) return {"ABSENT", nullptr};
      return {"OK " + std::to_string(*rev), nullptr};
    }
    if (verb == "WATCH") {
      if (words.size() != 3) return err("usage: WATCH <prefix> <rev>");
      int64_t from = 0;
      const auto rev_text = words[2];
      auto [p, ec] = std::from_chars(rev_text.data(),
                                     rev_text.data() + rev_text.size(), from);
      if (ec != std::errc() || p != rev_text.data() + rev_text.size() || from < 0) {
        return err("invalid revision");
      }
      const int64_t current = registry.revision();
      auto stream = registry.Watch(words[1], from);
      return {"OK " + std::to_string(current), std::move(stream)};
    }
  } catch (const std::exception& e) {
    return err(e.what());
  }
  return err("unknown command '" + std::string(verb) + "'");
}

RegistryServer::~RegistryServer() { Stop(); }

uint16_t RegistryServer::Start(const std::string& host, uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) ThrowErrno("socket");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::invalid_argument("invalid listen address: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ThrowErrno("bind");
  }
  if (::listen(listen_fd_, 16) < 0) ThrowErrno("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  acceptor_ = std::thread([this] { AcceptLoop(); });
  return ntohs(addr.sin_port);
}

void RegistryServer::Stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
  std::vector<std::thread> sessions;
  {
    std::lock_guard lock(mu_);
    for (int fd : session_fds_) ::shutdown(fd, SHUT_RDWR);
    sessions.swap(sessions_);
  }
  for (auto& t : sessions) t.join();
}

void RegistryServer::AcceptLoop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    std::lock_guard lock(mu_);
    session_fds_.push_back(fd);
    sessions_.emplace_back([this, fd] { Serve(fd); });
  }
}

void RegistryServer::Serve(int fd) {
  std::string buffer;
  char chunk[4096];
  std::shared_ptr<WatchStream> watch;
  while (!stopping_.load() && !watch) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t nl;
    while (!watch && (nl = buffer.find('\n')) != std::string::npos) {
      ProtocolReply reply = HandleRequestLine(registry_, std::string_view(buffer).substr(0, nl));
      buffer.erase(0, nl + 1);
      if (!WriteAll(fd, reply.line + "\n")) break;
      watch = std::move(reply.watch);
    }
  }
  while (watch && !stopping_.load()) {
    if (auto ev = watch->Next(std::chrono::milliseconds(50))) {
      if (!WriteAll(fd, FormatWatchEvent(*ev) + "\n")) break;
      continue;
    }
    pollfd pfd{fd, POLLIN, 0};
    if (::poll(&pfd, 1, 0) > 0) {
      // Input after WATCH is discarded; EOF ends the stream.
      if (::recv(fd, chunk, sizeof(chunk), 0) <= 0) break;
    }
  }
  if (watch) watch->Cancel();
  {
    std::lock_guard lock(mu_);
    std::erase(session_fds_, fd);
  }
  ::close(fd);
}

}  // namespace cransim
