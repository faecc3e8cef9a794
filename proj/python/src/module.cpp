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

// Python bindings. Results cross the boundary as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cransim/registry.hpp"
#include "cransim/report.hpp"
#include "cransim/scenario.hpp"
#include "cransim/simkernel.hpp"

namespace py = pybind11;
using namespace cransim;

namespace {

std::string Join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += l;
  }
  return out;
}

ScenarioConfig ConfigFrom(const std::optional<std::string>& json) {
  if (!json) return PaperTestbed();
  LoadResult r = ParseScenario(*json);
  if (!r.config) throw ScenarioError(Join(r.errors));
  return *r.config;
}

py::dict PodDict(const Pod& p) {
  py::dict d;
  d["name"] = p.name;
  d["kind"] = std::string(ToString(p.kind));
  d["set"] = p.set;
  d["ordinal"] = p.ordinal;
  d["node"] = p.node;
  d["ip"] = p.ip ? py::cast(p.ip->ToString()) : py::none();
  d["phase"] = std::string(ToString(p.phase));
  d["peer_ip"] = p.peer_ip ? py::cast(p.peer_ip->ToString()) : py::none();
  d["failed_discovery"] = p.failed_discovery;
  d["reason"] = p.reason;
  return d;
}

py::dict SampleDict(const MetricsSample& s) {
  py::dict d;
  d["time_ms"] = s.time.ms;
  d["fh_kbps"] = s.fh.kbps;
  d["pairs_active"] = s.pairs_active;
  py::list nodes;
  for (const auto& n : s.nodes) {
    py::dict nd;
    nd["node"] = n.node;
    nd["cpu_millicores"] = n.used.cpu_millicores;
    nd["mem_mib"] = n.used.mem_mib;
    nd["fh_kbps"] = n.fh.kbps;
    nodes.append(nd);
  }
  d["nodes"] = nodes;
  return d;
}

py::dict EventDict(const SimEvent& e) {
  py::dict d;
  d["time_ms"] = e.time.ms;
  d["kind"] = std::string(ToString(e.kind));
  for (const auto& [k, v] : e.fields) d[py::str(k)] = v;
  return d;
}

py::dict ResultDict(const RunResult& r) {
  py::dict d;
  d["steps"] = r.steps;
  d["halted"] = r.halted;
  d["invariant"] = r.invariant;
  d["diagnostic"] = r.diagnostic;
  return d;
}

LogVerbosity ParseVerbosity(std::string_view v) {
  if (v == "quiet") return LogVerbosity::kQuiet;
  if (v == "debug") return LogVerbosity::kDebug;
  if (v == "info") return LogVerbosity::kInfo;
  throw py::value_error("verbosity must be quiet, info or debug");
}

}  // namespace

PYBIND11_MODULE(_cransim, m) {
  m.doc() = "Deterministic C-RAN orchestration simulator";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<MalformedKey>(m, "MalformedKey", PyExc_ValueError);
  py::register_exception<RegistryUnavailable>(m, "RegistryUnavailable", PyExc_RuntimeError);

  py::class_<WatchStream, std::shared_ptr<WatchStream>>(m, "WatchStream")
      .def_property_readonly("prefix", &WatchStream::prefix)
      .def("drain", [](WatchStream& w) {
        py::list out;
        for (const auto& ev : w.Drain()) {
          py::dict d;
          d["op"] = ev.kind == WatchEventKind::kPut ? "PUT" : "DEL";
          d["key"] = ev.entry.key;
          d["value"] = ev.entry.value;
          d["revision"] = ev.revision;
          out.append(d);
        }
        return out;
      })
      .def("cancel", &WatchStream::Cancel);

  py::class_<Registry>(m, "Registry")
      .def(py::init<>())
      .def("put", &Registry::Put, py::arg("key"), py::arg("value"))
      .def("get", &Registry::Get, py::arg("key"))
      .def("delete", &Registry::Delete, py::arg("key"))
      .def("range",
           [](const Registry& r, std::string_view prefix) {
             std::vector<std::pair<std::string, std::string>> out;
             for (const auto& e : r.Range(prefix)) out.emplace_back(e.key, e.value);
             return out;
           },
           py::arg("prefix") = "")
      .def("watch", &Registry::Watch, py::arg("prefix"), py::arg("from_revision") = 0)
      .def_property_readonly("revision", &Registry::revision)
      .def("__len__", &Registry::size);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init([](std::optional<std::string> json) {
             return std::make_unique<Simulation>(ConfigFrom(json));
           }),
           py::arg("scenario_json") = py::none(),
           "Builds a simulation from a JSON scenario; the stock testbed when omitted.")
      .def("step", &Simulation::Step)
      .def("run",
           [](Simulation& s, std::optional<double> seconds) {
             return ResultDict(seconds ? s.Run(SimTime::FromSeconds(*seconds)) : s.Run());
           },
           py::arg("seconds") = py::none())
      .def("scale", &Simulation::Scale, py::arg("set"), py::arg("replicas"))
      .def("replicas", &Simulation::replicas, py::arg("set"))
      .def_property_readonly("now_ms", [](const Simulation& s) { return s.now().ms; })
      .def_property_readonly("pods",
                             [](const Simulation& s) {
                               py::list out;
                               for (const auto& p : s.pods()) out.append(PodDict(p));
                               return out;
                             })
      .def_property_readonly("samples",
                             [](const Simulation& s) {
                               py::list out;
                               for (const auto& x : s.samples()) out.append(SampleDict(x));
                               return out;
                             })
      .def_property_readonly("events",
                             [](const Simulation& s) {
                               py::list out;
                               for (const auto& e : s.events()) out.append(EventDict(e));
                               return out;
                             })
      .def("registry_get",
           [](const Simulation& s, std::string_view key) { return s.registry().Get(key); })
      .def("metrics_csv", [](const Simulation& s) { return EmitMetricsCsv(s.samples()); })
      .def(
          "event_log",
          [](const Simulation& s, std::string_view verbosity) {
            return EmitEventLog(s.events(), ParseVerbosity(verbosity));
          },
          py::arg("verbosity") = "info");

  m.def("paper_testbed_json", [] { return ScenarioToJson(PaperTestbed()); },
        "The stock three-node testbed scenario as JSON.");
  m.def(
      "validate_scenario",
      [](const std::string& json, bool strict) {
        LoadResult r = ParseScenario(json, strict);
        return py::make_tuple(r.errors, r.warnings);
      },
      py::arg("scenario_json"), py::arg("strict") = true,
      "Returns (errors, warnings); the scenario is valid iff errors is empty.");
  m.def(
      "run",
      [](const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
         std::optional<uint64_t> seed, std::optional<double> duration_s) {
        std::ostringstream err;
        const int code = RunCommand(scenario, out_dir, {seed, duration_s, true}, err);
        return py::make_tuple(code, err.str());
      },
      py::arg("scenario_path"), py::arg("out_dir"), py::arg("seed") = py::none(),
      py::arg("duration_s") = py::none(),
      "Same as `cran-sim run`; returns (exit_code, diagnostics).");
}
