# Copyright 2026 The cransim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

import cransim


def test_default_run_doubles_fronthaul():
    sim = cransim.Simulation()
    result = sim.run()
    assert result["steps"] == 120 and not result["halted"]
    fh = {s["time_ms"] // 1000: s["fh_kbps"] for s in sim.samples}
    assert fh[5] == 0
    assert fh[10] == 614000
    assert fh[59] == 614000
    assert fh[60] == 1228000
    nodes = {p["name"]: p["node"] for p in sim.pods}
    assert nodes["bbu-0"] == nodes["bbu-1"] == "master"
    assert {nodes["rrh-0"], nodes["rrh-1"]} == {"worker-1", "worker-2"}


def test_stepping_and_scaling():
    doc = json.loads(cransim.paper_testbed_json())
    doc["timeline"] = []
    sim = cransim.Simulation(json.dumps(doc))
    sim.scale("rrh", 3)
    sim.run(20)
    assert sim.now_ms == 20000
    third = next(p for p in sim.pods if p["name"] == "rrh-2")
    assert third["phase"] == "PENDING"
    assert third["reason"] == "no feasible node"
    assert sim.registry_get("pods/rrh-0/ip") == "10.244.1.2"


def test_output_is_deterministic():
    a, b = cransim.Simulation(), cransim.Simulation()
    a.run()
    b.run()
    assert a.metrics_csv() == b.metrics_csv()
    assert a.event_log("debug") == b.event_log("debug")
    assert a.metrics_csv().startswith("time_s,node,")


def test_validation_reports_errors():
    doc = json.loads(cransim.paper_testbed_json())
    errors, _ = cransim.validate_scenario(json.dumps(doc))
    assert errors == []
    doc["nodes"][1]["role"] = "MASTER"
    errors, _ = cransim.validate_scenario(json.dumps(doc))
    assert "nodes: exactly one MASTER required" in errors
    with pytest.raises(ValueError):
        cransim.Simulation(json.dumps(doc))


def test_registry_and_watch():
    reg = cransim.Registry()
    assert reg.put("pods/rrh-0/ip", "10.244.1.2") == 1
    watch = reg.watch("pods/", 0)
    assert reg.delete("pods/rrh-0/ip") == 2
    assert reg.delete("pods/rrh-0/ip") is None
    reg.put("cfg/x", "1")
    ops = [(e["op"], e["key"], e["value"], e["revision"]) for e in watch.drain()]
    assert ops == [
        ("PUT", "pods/rrh-0/ip", "10.244.1.2", 1),
        ("DEL", "pods/rrh-0/ip", "10.244.1.2", 2),
    ]
    assert reg.revision == 3 and len(reg) == 1
    with pytest.raises(ValueError):
        reg.put("bad key", "v")


def test_run_writes_artifacts(tmp_path):
    scenario = tmp_path / "s.json"
    scenario.write_text(cransim.paper_testbed_json())
    code, err = cransim.run(scenario, tmp_path / "out", seed=3)
    assert code == 0, err
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["steps"] == 120
    assert (tmp_path / "out" / "metrics.csv").stat().st_size > 0
