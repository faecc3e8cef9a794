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

#include "cransim/common.hpp"

#include <cmath>
#include <cstdlib>

#include "cransim/ipv4.hpp"

#include <arpa/inet.h>

namespace cransim {

SimTime SimTime::FromSeconds(double s) {
  return SimTime{static_cast<int64_t>(std::llround(s * 1000.0))};
}

std::string FormatMilli(int64_t thousandths) {
  const bool negative = thousandths < 0;
  const uint64_t mag = negative ? static_cast<uint64_t>(-(thousandths + 1)) + 1
                                : static_cast<uint64_t>(thousandths);
  std::string frac = std::to_string(mag % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(mag / 1000) + "." + frac;
}

int64_t RatioMilli(int64_t num, int64_t den) {
  return (num * 2000 + den) / (2 * den);
}

std::optional<Ipv4> Ipv4::Parse(std::string_view text) {
  std::string buf(text);
  in_addr addr{};
  if (inet_pton(AF_INET, buf.c_str(), &addr) != 1) return std::nullopt;
  return Ipv4(ntohl(addr.s_addr));
}

std::string Ipv4::ToString() const {
  in_addr addr{};
  addr.s_addr = htonl(value_);
  char out[INET_ADDRSTRLEN];
  inet_ntop(AF_INET, &addr, out, sizeof(out));
  return out;
}

Cidr::Cidr(Ipv4 network, int prefix_len) : prefix_len_(prefix_len) {
  if (prefix_len < 0 || prefix_len > 32) {
    throw std::invalid_argument("prefix length out of range: " +
                                std::to_string(prefix_len));
  }
  network_ = Ipv4(network.value() & mask());
}

std::optional<Cidr> Cidr::Parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto ip = Ipv4::Parse(text.substr(0, slash));
  if (!ip) return std::nullopt;
  const std::string len_text(text.substr(slash + 1));
  if (len_text.empty() || len_text.size() > 2 ||
      len_text.find_first_not_of("0123456789") != std::string::npos) {
    return std::nullopt;
  }
  const int len = std::atoi(len_text.c_str());
  if (len > 32) return std::nullopt;
  Cidr c(*ip, len);
  // Reject host bits so typos like 10.244.1.7/24 surface instead of being
  // silently normalized.
  if (c.network() != *ip) return std::nullopt;
  return c;
}

uint32_t Cidr::mask() const {
  return prefix_len_ == 0 ? 0u : ~uint32_t{0} << (32 - prefix_len_);
}

Ipv4 Cidr::broadcast() const { return Ipv4(network_.value() | ~mask()); }

Ipv4 Cidr::at(uint64_t offset) const {
  return Ipv4(network_.value() + static_cast<uint32_t>(offset));
}

bool Cidr::Contains(Ipv4 ip) const {
  return (ip.value() & mask()) == network_.value();
}

bool Cidr::Overlaps(const Cidr& other) const {
  return Contains(other.network()) || other.Contains(network_);
}

std::string Cidr::ToString() const {
  return network_.ToString() + "/" + std::to_string(prefix_len_);
}

}  // namespace cransim
