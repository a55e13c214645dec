import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from tropchab.cli import run
from tropchab.series import compute_Np_scan


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], buf)
    text = buf.getvalue()
    assert text.endswith("\n") and text.count("\n") == 1
    return code, json.loads(text)


def no_floats(doc):
    if isinstance(doc, float):
        return False
    if isinstance(doc, dict):
        return all(no_floats(v) for v in doc.values())
    if isinstance(doc, list):
        return all(no_floats(v) for v in doc)
    return True


@pytest.fixture
def fx(tmp_path):
    code, doc = call("--fixtures", tmp_path)
    assert code == 0 and len(doc["fixtures"]) == 4
    return tmp_path


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def test_np():
    assert call("np", 7, 1, 4) == (0, {"Np": 5})
    assert call("np", 3, "1/2", 2)[1] == {"Np": compute_Np_scan(3, Fraction(1, 2), 2, 1000)}


def test_curve_commands(fx):
    gg = fx / "gordon_grant.json"
    assert call("curve", "coleman", gg, 7, 1) == (0, {"bound": 10, "points_Fp": 8})
    assert call("curve", "count", fx / "mccallum_poonen.json", 3) == (0, {"points_Fp": 4})
    assert call("curve", "check-point", gg, 10, 120)[1]["on_curve"] is True
    assert call("curve", "check-point", gg, "inf")[1]["on_curve"] is True
    code, doc = call("curve", "tiny-int", gg, 7, "3,6", 0, 0, 1)
    assert code == 0 and int(doc["integral"]["valuation"]) == 1
    code, doc = call("curve", "coleman", gg, 3, 1)
    assert code == 1 and doc["error"] == "HypothesisFailure" and doc["hypothesis"] == "p > 2g"


def test_graph_commands(fx, tmp_path):
    theta = fx / "theta.json"
    assert call("graph", "genus", theta)[1] == {"genus": 2, "first_betti": 2}
    assert call("graph", "canonical", theta)[1]["divisor"] == {"v1": 1, "v2": 1}
    code, doc = call("graph", "jacobian", theta)
    assert code == 0 and doc["rank"] == 2 and doc["positive_definite"]
    code, doc = call("graph", "aj", theta, "v1", "e1@1/2")
    assert code == 0 and all(isinstance(c, str) for c in doc["coordinates"])
    div = write(tmp_path, "div.json", {"v1": 1, "e1@1/2": -1})
    assert call("graph", "principal", theta, div)[1] == {"principal": False}
    pl = write(tmp_path, "pl.json", {
        "vertex_values": {"v1": "0", "v2": "0"},
        "edges": {"e1": {"breakpoints": ["1/2"], "slopes": [1, -1]}},
    })
    code, doc = call("graph", "slope-check", theta, pl)
    assert code == 0 and doc["canonical_section"] and doc["max_abs_slope"] == 1 and doc["holds"]
    assert call("dagger", theta)[1] == {"genus": 2, "dagger": False}


def test_chip_commands(tmp_path):
    g = write(tmp_path, "g.json", {"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"], ["c", "a"]]})
    d = write(tmp_path, "d.json", {"a": 1})
    assert call("chip", "rank", g, d) == (0, {"rank": 0})
    code, doc = call("chip", "rr", g, d)
    assert code == 0 and doc["holds"] and doc["dual_rank"] == -1


def test_series_commands(tmp_path):
    f = write(tmp_path, "f.json", {"prime": 3, "low": 0, "coeffs": ["3", "1"]})
    assert call("series", "zeros", f, "(0,2)")[1] == {"zeros": 1, "window": "(0,2)"}
    w = write(tmp_path, "w.json", {"prime": 5, "low": 0, "coeffs": ["0", "0", "1", "0", "-1"]})
    code, doc = call("series", "antider", w)
    assert doc["antiderivative"]["coeffs"] == ["0", "0", "1/2", "0", "-1/4"]
    r = write(tmp_path, "r.json", {"prime": 5, "low": 0, "coeffs": ["1", "1"]})
    code, doc = call("series", "antider", r)
    assert code == 1 and doc["error"] == "NonExactResidue"


def test_bounds_eval(tmp_path):
    req = write(tmp_path, "req.json", {"kind": "krzb_p3", "parameters": {"g": 3}})
    code, doc = call("bounds", "eval", req)
    assert code == 0 and doc["value"] == "490" and doc["kind"] == "krzb_p3"
    req = write(tmp_path, "req2.json", {"kind": "stoll_uniform_hyp", "parameters": {"g": 4, "r": 2}})
    code, doc = call("bounds", "eval", req)
    assert code == 1 and doc["hypothesis"] == "r <= g - 3"


def test_schema_errors(tmp_path):
    bad = write(tmp_path, "bad.json", "{not json")
    assert call("bounds", "eval", bad)[0] == 2
    assert call("graph", "genus", tmp_path / "missing.json")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call()[0] == 2
    assert call("np", 7, "x", 4)[0] == 2
    assert call("series", "zeros", write(tmp_path, "s.json", {"prime": 3, "coeffs": ["1"]}), "0,2")[0] == 2


def test_outputs_never_contain_floats(fx, tmp_path):
    theta = fx / "theta.json"
    gg = fx / "gordon_grant.json"
    req = write(tmp_path, "req.json", {"kind": "geometric_torsion", "parameters": {"g": 2, "p": 3}})
    runs = [
        ("np", 5, "1/3", 7),
        ("graph", "jacobian", theta),
        ("graph", "aj", theta, "v1", "e2@1/3"),
        ("curve", "tiny-int", gg, 7, "3,6", 1, 0, 7),
        ("bounds", "eval", req),
    ]
    for argv in runs:
        code, doc = call(*argv)
        assert code == 0 and no_floats(doc)


def test_deterministic(fx):
    a = call("curve", "tiny-int", fx / "gordon_grant.json", 7, "3,6", 0, 0, 2)
    b = call("curve", "tiny-int", fx / "gordon_grant.json", 7, "3,6", 0, 0, 2)
    assert a == b


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "tropchab", "np", "7", "1", "4"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout) == {"Np": 5}
