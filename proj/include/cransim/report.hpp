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

// Output artifacts of a run: metrics.csv, events.log and summary.json.

#ifndef CRANSIM_REPORT_HPP_
#define CRANSIM_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cransim/ranmodel.hpp"
#include "cransim/simkernel.hpp"

namespace cransim {

inline constexpr std::string_view kMetricsHeader =
    "time_s,node,cpu_millicores,cpu_frac,mem_mib,mem_frac,fh_throughput_mbps,pairs_active";

/// One row per (sample, node) followed by an `ALL` row with cluster totals.
/// Every non-count column is fixed-point with three decimals; lines end in
/// '\n'.
std::string EmitMetricsCsv(std::span<const MetricsSample> samples);

enum class LogVerbosity { kQuiet, kInfo, kDebug };

/// Reads CRAN_SIM_LOG (quiet|info|debug); unset or unknown means info.
LogVerbosity VerbosityFromEnv();

/// `<time_s> <seq> <KIND> key=value ...`; values containing spaces are
/// double-quoted.
std::string FormatEvent(const SimEvent& ev);

/// quiet keeps scale commands, autoscaler decisions and halts; info adds
/// phase transitions and registry mutations; debug adds metrics samples.
std::string EmitEventLog(std::span<const SimEvent> events, LogVerbosity verbosity);

std::string SummaryJson(const Simulation& sim, const RunResult& result);

struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<double> duration_s;
  bool strict = true;
};

/// Loads the scenario, runs it, and writes metrics.csv, events.log and
/// summary.json under `out_dir`. Returns 0 on a clean run, 2 for an invalid
/// scenario, 3 when the run halted on an invariant, 1 on I/O failure.
/// Diagnostics go to `err`.
int RunCommand(const std::filesystem::path& scenario_path, const std::filesystem::path& out_dir,
               const RunOverrides& overrides, std::ostream& err);

}  // namespace cransim

#endif  // CRANSIM_REPORT_HPP_
