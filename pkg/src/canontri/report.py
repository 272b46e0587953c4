"""Assemble pipeline results into a plain dict and serialize it deterministically."""
from __future__ import annotations

import json
import math
from importlib import resources

import numpy as np

__all__ = ["build_report", "error_report", "emit_json", "load_schema", "validate_report"]

SCHEMA_NAME = "report.schema.json"


def _c(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def build_report(cfg_input: dict, tri, s, vreport, dev, fans, geodesics, residuals, rnlm=None) -> dict:
    out = {
        "input": cfg_input,
        "word": tri.word.letters,
        "kind": tri.kind,
        "m_or_c": tri.word.m if tri.periodic else tri.word.c,
        "hinges": list(tri.hinges),
        "w": [float(v) for v in s.w],
        "angles": [[float(v) for v in row] for row in s.angles],
        "volume": vreport.total_volume,
        "bounds": {
            "lower": vreport.lower_bound,
            "upper": vreport.upper_bound,
            "certificate": vreport.certificate_volume,
        },
        "gradient_norm": vreport.gradient_inf_norm,
        "iterations": vreport.iterations,
        "converged": vreport.converged,
        "holonomy_residuals": {
            "max": max((r for _, r in residuals), default=0.0),
            "entries": [{"id": k, "value": r} for k, r in residuals],
            "periods": {k: float(v) for k, v in sorted(dev.period_residuals.items())},
        },
        "periods": {k: _c(v) for k, v in sorted(dev.periods.items())},
        "fan_margins": [
            {
                "hinge": f.hinge,
                "side": f.side,
                "letter": f.letter,
                "terminal": f.terminal,
                "Q": f.Q,
                "P": f.P,
                "T": f.T,
                "margin": f.margin,
            }
            for f in fans
        ],
        "geodesic_lengths": [
            {"syllable": g.syllable, **_c(g.length), "orbit_residual": g.orbit_residual}
            for g in geodesics
        ],
        "degeneracy": list(vreport.degeneracy),
    }
    if rnlm is not None:
        sol, checks = rnlm
        out["rnlm"] = {
            "N": sol.N,
            "M": sol.M,
            "a": _c(sol.a),
            "a_prime": _c(sol.a_prime),
            "b": _c(sol.b),
            "b_prime": _c(sol.b_prime),
            "iterations": sol.iterations,
            "residual": sol.residual,
            "checks": {k: float(v) for k, v in sorted(checks.items())},
        }
    return out


def error_report(cfg_input: dict, exc) -> dict:
    return {
        "input": cfg_input,
        "error": {"code": exc.code, "message": str(exc), "exit_status": exc.exit_status},
    }


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError("non-finite float in report")
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        items = sorted(x.items())
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in items) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def emit_json(report: dict) -> bytes:
    """Sorted keys, 17 significant digits for every float."""
    return (_fmt(report) + "\n").encode()


def load_schema() -> dict:
    return json.loads(resources.files("canontri").joinpath(SCHEMA_NAME).read_text())


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, load_schema())
