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

#ifndef CRANSIM_COMMON_HPP_
#define CRANSIM_COMMON_HPP_

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cransim {

/// Raised when a global simulation invariant is breached. `invariant()` names
/// the violated property (e.g. "ordinal-uniqueness").
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : std::runtime_error(invariant + ": " + detail),
        invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// Simulated time in milliseconds. Configs speak seconds; everything inside
/// the kernel is integral so that runs are bit-reproducible.
struct SimTime {
  int64_t ms = 0;

  static constexpr SimTime FromMillis(int64_t v) { return SimTime{v}; }
  static SimTime FromSeconds(double s);

  double seconds() const { return static_cast<double>(ms) / 1000.0; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return {a.ms + b.ms}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return {a.ms - b.ms}; }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;
};

/// Formats an integer count of thousandths as fixed-point with three decimals
/// ("614000" -> "614.000"). Exact; no floating point involved.
std::string FormatMilli(int64_t thousandths);

/// round(num * 1000 / den) with half-up rounding, for non-negative num and
/// positive den.
int64_t RatioMilli(int64_t num, int64_t den);

}  // namespace cransim

#endif  // CRANSIM_COMMON_HPP_
