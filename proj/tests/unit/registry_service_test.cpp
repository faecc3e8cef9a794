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
#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <random>
#include <string>

namespace cransim {
namespace {

TEST(Base64Test, KnownVectorsAndRoundTrip) {
  EXPECT_EQ(Base64Encode(""), "");
  EXPECT_EQ(Base64Encode("f"), "Zg==");
  EXPECT_EQ(Base64Encode("fo"), "Zm8=");
  EXPECT_EQ(Base64Encode("foo"), "Zm9v");
  EXPECT_EQ(Base64Encode("10.244.1.2"), "MTAuMjQ0LjEuMg==");
  EXPECT_EQ(Base64Decode("Zm8="), "fo");
  EXPECT_EQ(Base64Decode("Zg"), std::nullopt);
  EXPECT_EQ(Base64Decode("Z!=="), std::nullopt);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    std::string raw(rng() % 40, '\0');
    for (char& c : raw) c = static_cast<char>(rng() & 0xff);
    ASSERT_EQ(Base64Decode(Base64Encode(raw)), raw);
  }
}

TEST(LineProtocolTest, PutGetDelete) {
  Registry r;
  EXPECT_EQ(HandleRequestLine(r, "PUT pods/rrh-0/ip MTAuMjQ0LjEuMg==").line, "OK 1");
  EXPECT_EQ(HandleRequestLine(r, "GET pods/rrh-0/ip").line, "OK 1 MTAuMjQ0LjEuMg==");
  EXPECT_EQ(r.Get("pods/rrh-0/ip"), "10.244.1.2");
  EXPECT_EQ(HandleRequestLine(r, "DEL pods/rrh-0/ip").line, "OK 2");
  EXPECT_EQ(HandleRequestLine(r, "GET pods/rrh-0/ip").line, "ABSENT");
  EXPECT_EQ(HandleRequestLine(r, "DEL pods/rrh-0/ip").line, "ABSENT");
}

TEST(LineProtocolTest, Errors) {
  Registry r;
  EXPECT_TRUE(HandleRequestLine(r, "").line.starts_with("ERR "));
  EXPECT_TRUE(HandleRequestLine(r, "FROB x").line.starts_with("ERR "));
  EXPECT_TRUE(HandleRequestLine(r, "PUT k").line.starts_with("ERR "));
  EXPECT_TRUE(HandleRequestLine(r, "PUT k not*base64").line.starts_with("ERR "));
  EXPECT_TRUE(HandleRequestLine(r, "PUT /bad Zg==").line.starts_with("ERR malformed key"));
  EXPECT_TRUE(HandleRequestLine(r, "WATCH pods/ -1").line.starts_with("ERR "));
  EXPECT_EQ(r.revision(), 0);
}

TEST(LineProtocolTest, WatchReturnsStream) {
  Registry r;
  r.Put("pods/rrh-0/ip", "a");
  auto reply = HandleRequestLine(r, "WATCH pods/ 0\r");
  EXPECT_EQ(reply.line, "OK 1");
  ASSERT_NE(reply.watch, nullptr);
  r.Delete("pods/rrh-0/ip");
  const auto events = reply.watch->Drain();
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(FormatWatchEvent(events[0]), "EVT PUT 1 pods/rrh-0/ip YQ==");
  EXPECT_EQ(FormatWatchEvent(events[1]), "EVT DEL 2 pods/rrh-0/ip YQ==");
}

class Client {
 public:
  explicit Client(uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    connected_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0;
    timeval tv{5, 0};
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }
  ~Client() { ::close(fd_); }

  bool connected() const { return connected_; }
  void Send(const std::string& line) {
    const std::string data = line + "\n";
    ASSERT_EQ(::send(fd_, data.data(), data.size(), 0), static_cast<ssize_t>(data.size()));
  }
  std::string ReadLine() {
    while (true) {
      if (auto nl = buf_.find('\n'); nl != std::string::npos) {
        std::string line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return line;
      }
      char chunk[512];
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      if (n <= 0) return "<eof>";
      buf_.append(chunk, static_cast<size_t>(n));
    }
  }

 private:
  int fd_ = -1;
  bool connected_ = false;
  std::string buf_;
};

TEST(RegistryServerTest, ServesProtocolOverTcp) {
  Registry registry;
  RegistryServer server(registry);
  const uint16_t port = server.Start("127.0.0.1", 0);
  ASSERT_NE(port, 0);

  Client watcher(port);
  ASSERT_TRUE(watcher.connected());
  watcher.Send("WATCH pods/ 0");
  EXPECT_EQ(watcher.ReadLine(), "OK 0");

  Client c(port);
  ASSERT_TRUE(c.connected());
  c.Send("PUT pods/rrh-0/ip " + Base64Encode("10.244.1.2"));
  EXPECT_EQ(c.ReadLine(), "OK 1");
  c.Send("PUT other/key Zg==");
  EXPECT_EQ(c.ReadLine(), "OK 2");
  c.Send("GET pods/rrh-0/ip");
  EXPECT_EQ(c.ReadLine(), "OK 1 " + Base64Encode("10.244.1.2"));
  c.Send("DEL pods/rrh-0/ip");
  EXPECT_EQ(c.ReadLine(), "OK 3");
  c.Send("GET pods/rrh-0/ip");
  EXPECT_EQ(c.ReadLine(), "ABSENT");

  EXPECT_EQ(watcher.ReadLine(), "EVT PUT 1 pods/rrh-0/ip " + Base64Encode("10.244.1.2"));
  EXPECT_EQ(watcher.ReadLine(), "EVT DEL 3 pods/rrh-0/ip " + Base64Encode("10.244.1.2"));
  server.Stop();
}

}  // namespace
}  // namespace cransim
