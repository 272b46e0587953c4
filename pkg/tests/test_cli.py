import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import jsonschema
import pytest

from canontri.cli import main
from canontri.report import emit_json, load_schema, validate_report
from canontri.volume import V3

GOLDEN = Path(__file__).parent / "golden"


def _run(tmp_path, *args):
    out = tmp_path / "out.json"
    code = main([*args, "--json", str(out)])
    return code, json.loads(out.read_text()), out


def _close(a, b, path="$"):
    if isinstance(a, float) or isinstance(b, float):
        assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-11), (path, a, b)
    elif isinstance(a, dict):
        assert set(a) == set(b), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    else:
        assert a == b, (path, a, b)


# residual entries sit at the rounding floor and are not reproducible digit for digit
_NOISE = {"holonomy_residuals", "gradient_norm", "fan_margins"}


@pytest.mark.parametrize(
    "name,args",
    [
        ("bundle_RL", ["bundle", "--word", "RL"]),
        ("bundle_RRLL", ["bundle", "--word", "RRLL"]),
        ("bridge_RL", ["bridge", "--word", "RL"]),
        ("bridge_R3L2R", ["bridge", "--word", "R3L2R"]),
    ],
)
def test_golden(tmp_path, name, args):
    code, got, _ = _run(tmp_path, *args)
    assert code == 0
    want = json.loads((GOLDEN / f"{name}.json").read_text())
    for k in set(want) - _NOISE:
        _close(got[k], want[k], k)
    assert got["holonomy_residuals"]["max"] < 1e-8
    assert [f["hinge"] for f in got["fan_margins"]] == [f["hinge"] for f in want["fan_margins"]]


def test_rl_volume_and_convergence(tmp_path):
    code, rep, _ = _run(tmp_path, "bundle", "--word", "RL")
    assert code == 0 and rep["converged"]
    assert rep["volume"] == pytest.approx(2 * V3, abs=1e-9)
    assert rep["volume"] == pytest.approx(2.029883, abs=1e-6)


def test_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    sa = tmp_path / "a.svg"
    sb = tmp_path / "b.svg"
    main(["bridge", "--word", "R3L2R", "--json", str(a), "--svg", str(sa)])
    main(["bridge", "--word", "R3L2R", "--json", str(b), "--svg", str(sb)])
    assert a.read_bytes() == b.read_bytes()
    assert sa.read_bytes() == sb.read_bytes()


def test_subprocess_stdout_matches_file(tmp_path):
    code, _, out = _run(tmp_path, "sphere", "--word", "RRLL")
    assert code == 0
    proc = subprocess.run(
        [sys.executable, "-m", "canontri", "sphere", "--word", "RRLL"], capture_output=True, check=True
    )
    assert proc.stdout == out.read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["bundle", "--word", "R2L3RL"],
        ["bundle", "--matrix", "2,1,1,1"],
        ["bundle", "--matrix=-2,-1,-1,-1"],
        ["sphere", "--word", "RLL"],
        ["bridge", "--word", "LRRL"],
        ["bundle", "--word", "R5L5", "--rnlm", "5,5"],
    ],
)
def test_schema_valid(tmp_path, args):
    code, rep, _ = _run(tmp_path, *args)
    assert code == 0
    validate_report(rep)


def test_matrix_and_word_agree(tmp_path):
    _, a, _ = _run(tmp_path, "bundle", "--matrix", "2,1,1,1")
    _, b, _ = _run(tmp_path, "bundle", "--word", "RL")
    assert a["volume"] == pytest.approx(b["volume"], abs=1e-12)


def test_rnlm_section(tmp_path):
    code, rep, _ = _run(tmp_path, "bundle", "--word", "R20L20", "--rnlm", "20,20")
    assert code == 0
    assert rep["rnlm"]["residual"] < 1e-13
    assert rep["rnlm"]["checks"]["R_vertex_error"] < 1e-6


@pytest.mark.parametrize(
    "args,status,code_name",
    [
        (["bundle", "--matrix", "1,1,0,1"], 3, "ENotAnosov"),
        (["bundle", "--word", "RX"], 2, "EParse"),
        (["bundle", "--word", "RRR"], 3, None),
        (["bridge", "--word", "RRR"], 3, "ETooFewSyllables"),
        (["bundle", "--word", "R3L2RL", "--max-iter", "1"], 4, "ENotConverged"),
        (["bundle", "--word", "RL", "--max-iter", "0"], 2, "EParse"),
        (["bundle", "--word", "RL", "--tol", "-1"], 2, "EParse"),
        (["bundle", "--word", "R4L4", "--rnlm", "5,5"], 2, "EParse"),
    ],
)
def test_exit_codes(tmp_path, capsys, args, status, code_name):
    code, rep, _ = _run(tmp_path, *args)
    assert code == status
    validate_report(rep)
    assert rep["error"]["exit_status"] == status
    if code_name:
        assert rep["error"]["code"] == code_name
    assert "error:" in capsys.readouterr().err


def test_schema_rejects_bad_reports():
    schema = load_schema()
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"input": {"mode": "bundle"}}, schema)
    with pytest.raises(ValueError):
        emit_json({"x": float("nan")})


def test_json_formatting():
    text = emit_json({"b": 0.1, "a": [1, 2.5e-20]}).decode()
    assert text == '{"a": [1, 2.4999999999999999e-20], "b": 0.10000000000000001}\n'


def _svg_domain(path):
    root = ET.parse(path).getroot()
    groups = {g.get("id"): g for g in root}
    return groups


@pytest.mark.parametrize("word,count,grey", [("RL", 4, 2), ("R4L4", 16, 2), ("R2L3RL", 14, 4)])
def test_svg_counts(tmp_path, word, count, grey):
    svg = tmp_path / "c.svg"
    assert main(["bundle", "--word", word, "--json", str(tmp_path / "o.json"), "--svg", str(svg)]) == 0
    groups = _svg_domain(svg)
    polys = list(groups["domain"])
    assert len(polys) == count
    layers = {p.get("data-layer") for p in polys if p.get("class") == "hinge"}
    assert len(layers) == grey
    assert "period" in groups


def test_svg_rl_equilateral_and_scaled(tmp_path):
    svg = tmp_path / "c.svg"
    main(["bundle", "--word", "RL", "--json", str(tmp_path / "o.json"), "--svg", str(svg)])
    groups = _svg_domain(svg)
    period = [tuple(map(float, p.split(","))) for p in groups["period"].get("points").split()]
    assert period[1][0] - period[0][0] == pytest.approx(1000, abs=1e-3)
    assert period[1][1] == pytest.approx(period[0][1], abs=1e-3)
    for p in groups["domain"]:
        pts = [complex(*map(float, q.split(","))) for q in p.get("points").split()]
        sides = [abs(pts[i] - pts[i - 1]) for i in range(3)]
        assert max(sides) - min(sides) < 0.01


def test_svg_bridge_strip(tmp_path):
    svg = tmp_path / "c.svg"
    main(["bridge", "--word", "R3L2R", "--json", str(tmp_path / "o.json"), "--svg", str(svg), "--svg-periods", "2"])
    groups = _svg_domain(svg)
    assert len(groups["domain"]) == 20
    assert len(groups["tiles"]) == 3 * 20
