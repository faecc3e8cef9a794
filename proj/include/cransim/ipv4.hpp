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

#ifndef CRANSIM_IPV4_HPP_
#define CRANSIM_IPV4_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cransim {

class Ipv4 {
 public:
  constexpr Ipv4() = default;
  constexpr explicit Ipv4(uint32_t host_order) : value_(host_order) {}

  /// Parses dotted-quad text. Returns nullopt on malformed input.
  static std::optional<Ipv4> Parse(std::string_view text);

  constexpr uint32_t value() const { return value_; }
  std::string ToString() const;

  friend constexpr auto operator<=>(Ipv4, Ipv4) = default;

 private:
  uint32_t value_ = 0;
};

/// An IPv4 prefix. The network address is always normalized (host bits
/// cleared).
class Cidr {
 public:
  Cidr() = default;
  Cidr(Ipv4 network, int prefix_len);

  /// Parses "a.b.c.d/n". Returns nullopt on malformed input.
  static std::optional<Cidr> Parse(std::string_view text);

  Ipv4 network() const { return network_; }
  int prefix_len() const { return prefix_len_; }
  uint64_t size() const { return uint64_t{1} << (32 - prefix_len_); }
  Ipv4 broadcast() const;
  /// `offset`-th address in the block (0 = network address).
  Ipv4 at(uint64_t offset) const;

  bool Contains(Ipv4 ip) const;
  bool Overlaps(const Cidr& other) const;
  std::string ToString() const;

  friend bool operator==(const Cidr&, const Cidr&) = default;

 private:
  uint32_t mask() const;

  Ipv4 network_;
  int prefix_len_ = 32;
};

}  // namespace cransim

#endif  // CRANSIM_IPV4_HPP_
