from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from finhom.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    return code, (json.loads(out) if out.strip() else None), err


def test_validate(data_dir):
    code, out, _ = call_json("validate", "-p", data_dir / "S.json", "-f", data_dir / "idS.json")
    assert code == 0 and out["poset"] == {"elements": 4, "hasse": 4} and out["map-f"] == "OrderMap"


def test_core_of_w(data_dir):
    code, out, _ = call_json("core", "-p", data_dir / "W.json")
    assert code == 0 and out["core_size"] == 1 and len(out["removed"]) == 4


def test_homotopic(data_dir):
    code, out, _ = call_json("homotopic", "-f", data_dir / "idW.json", "-g", data_dir / "constW.json")
    assert code == 0 and out["homotopic"] is True
    code, out, _ = call_json("homotopic", "-f", data_dir / "idS.json", "-g", data_dir / "constc.json")
    assert code == 0 and out["homotopic"] is False
    code, out, _ = call_json("homotopic", "-f", data_dir / "kid.json", "-g", data_dir / "kconst.json")
    assert out["same_contiguity_class"] is False


@pytest.mark.parametrize("kind", ["D", "cD", "sD"])
def test_distance_circle(data_dir, kind):
    code, out, _ = call_json("distance", "--kind", kind, "-f", data_dir / "idS.json", "-g", data_dir / "constc.json")
    assert code == 0 and out["value"] == 1
    assert len(out["witness"]["parts"]) == 2


def test_distance_groups(data_dir):
    code, out, _ = call_json("distance", "--kind", "cD", "-f", data_dir / "z2_id.json", "-g", data_dir / "z2_trivial.json")
    assert code == 0 and out["value"] == "inf"


def test_ccat_and_ctc(data_dir):
    assert call_json("ccat", "-p", data_dir / "S.json")[1]["value"] == 1
    assert call_json("ccat", "-p", data_dir / "W.json")[1]["value"] == 0
    assert call_json("distance", "--kind", "ccat", "-p", data_dir / "S.json")[1]["value"] == 1
    assert call_json("ctc", "-p", data_dir / "C2.json")[1]["value"] == 0


def test_sd_on_complex_maps(data_dir):
    code, out, _ = call_json("sd", "-f", data_dir / "kid.json", "-g", data_dir / "kconst.json")
    assert code == 0 and out["value"] == 1


def test_subdivide(data_dir):
    code, out, _ = call_json("subdivide", "-p", data_dir / "S.json")
    assert code == 0 and len(out["elements"]) == 8
    code, out, _ = call_json("subdivide", "-p", data_dir / "C2.json", "--times", 2)
    assert len(out["elements"]) == 5
    code, out, _ = call_json("subdivide", "-f", data_dir / "idS.json")
    assert len(out["assignment"]) == 8


def test_stabilize(data_dir):
    code, out, _ = call_json("stabilize", "-f", data_dir / "idS.json", "-g", data_dir / "constc.json", "--kmax", 1)
    assert code == 0 and out["stabilized_at"] == 0 and out["interleaving_ok"]
    assert [(lv["D"], lv["cD"]) for lv in out["levels"]] == [(1, 1), (1, 1)]


def test_chain_report(data_dir):
    code, out, _ = call_json("chain-report", "-f", data_dir / "idS.json", "-g", data_dir / "constc.json")
    assert code == 0 and out == {"sD": 1, "cD": 1, "D": 1, "chain_ok": True}


def test_audit_small(tmp_path):
    report = tmp_path / "audit.json"
    code, out, _ = call_json("audit", "--count", 3, "--max-elements", 4, "--output", report)
    assert code == 0 and out["ok"]
    saved = json.loads(report.read_text())
    assert saved["instances"] == 3


def test_audit_replay(tmp_path):
    entry = {"law": "symmetry", "seed": 0, "index": 1, "config": {"max_elements": 6, "relation_density": 0.4}}
    path = tmp_path / "entry.json"
    path.write_text(json.dumps(entry))
    code, _, _ = call_json("audit", "--replay", path)
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["core", "-p", "bad_key.json"],
        ["core", "-p", "cycle.json"],
        ["homotopic", "-f", "bad_monotone.json", "-g", "idS.json"],
        ["distance", "--kind", "cD", "-f", "idS.json", "-g", "idW.json"],
        ["core"],
        ["core", "-p", "missing.json"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_2(data_dir, argv):
    resolved = [str(data_dir / a) if a.endswith(".json") else a for a in argv]
    code, out, err = call(*resolved)
    assert code == 2
    assert out == ""


def test_cap_exhaustion_exits_3(data_dir):
    code, _, err = call("ctc", "-p", data_dir / "S.json", "--cap", 1)
    assert code == 3


def test_human_output(data_dir):
    code, out, _ = call("ccat", "-p", data_dir / "S.json")
    assert code == 0 and "value: 1" in out


def test_console_script(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "finhom.cli", "ccat", "-p", str(data_dir / "W.json"), "--json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 0
