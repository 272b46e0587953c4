"""Command-line front end.

    canontri bundle --word R2L2 --json out.json
    canontri bridge --word R3L2R --svg cusp.svg
    canontri bundle --matrix 2,1,1,1

Exit status: 0 on success, 2 on parse errors, 3 for words or matrices that do
not give a hyperbolic manifold, 4 when the solver does not converge.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import errors
from .angles import initial_structure
from .farey import matrix_to_word, normalize_sign, parse_bridge_word, parse_bundle_word, parse_matrix
from .geometry import develop_cusp, fan_diagnostics, geodesic_complex_lengths, holonomy_residuals
from .report import build_report, emit_json, error_report
from .rnlm import rnlm_crosscheck, solve_rnlm
from .svg import emit_svg
from .triangulation import build_bridge_triangulation, build_bundle_triangulation
from .volume import maximize_volume


@dataclass
class RunConfig:
    mode: str
    word: str | None = None
    matrix: str | None = None
    tol: float = 1e-12
    max_iter: int = 200
    json_path: str | None = None
    svg_path: str | None = None
    svg_periods: int = 1
    rnlm: str | None = None

    def describe(self) -> dict:
        mat = None
        if self.matrix is not None:
            try:
                mat = [int(t) for t in self.matrix.split(",")]
            except ValueError:
                mat = None
        return {"mode": self.mode, "word": self.word, "matrix": mat, "tol": self.tol, "max_iter": self.max_iter}


def _triangulate(cfg: RunConfig):
    if (cfg.word is None) == (cfg.matrix is None):
        raise errors.ParseError("give exactly one of --word and --matrix")
    if cfg.mode == "bridge":
        if cfg.matrix is not None:
            raise errors.ParseError("two-bridge links are given by words only")
        return build_bridge_triangulation(parse_bridge_word(cfg.word))
    if cfg.word is not None:
        w = parse_bundle_word(cfg.word)
    else:
        M, _ = normalize_sign(parse_matrix(cfg.matrix))
        w = matrix_to_word(M)
    return build_bundle_triangulation(w, "torus" if cfg.mode == "bundle" else "sphere")


def _parse_rnlm(text: str) -> tuple[int, int]:
    try:
        N, M = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise errors.ParseError(f"--rnlm expects N,M, got {text!r}") from exc
    return N, M


def pipeline(cfg: RunConfig):
    """Run everything and return (report dict, development)."""
    if cfg.tol <= 0:
        raise errors.ParseError("--tol must be positive")
    if cfg.max_iter < 1:
        raise errors.ParseError("--max-iter must be at least 1")
    tri = _triangulate(cfg)
    s0 = initial_structure(tri)
    s, vrep = maximize_volume(tri, s0.w, tol=cfg.tol, max_iter=cfg.max_iter)
    dev = develop_cusp(tri, s)
    fans = fan_diagnostics(tri, s)
    geo = geodesic_complex_lengths(tri, s)
    res = holonomy_residuals(dev)
    extra = None
    if cfg.rnlm is not None:
        N, M = _parse_rnlm(cfg.rnlm)
        if not tri.periodic or tri.word.letters != "R" * N + "L" * M:
            raise errors.ParseError(f"--rnlm {N},{M} needs the bundle word R{N}L{M}")
        sol = solve_rnlm(N, M)
        extra = (sol, rnlm_crosscheck(tri, s, sol))
    return build_report(cfg.describe(), tri, s, vrep, dev, fans, geo, res, extra), dev


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(path).write_bytes(data)


def run(cfg: RunConfig) -> int:
    try:
        report, dev = pipeline(cfg)
    except errors.CanonTriError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        _write(cfg.json_path, emit_json(error_report(cfg.describe(), exc)))
        return exc.exit_status
    _write(cfg.json_path, emit_json(report))
    if cfg.svg_path is not None:
        Path(cfg.svg_path).write_bytes(emit_svg(dev, cfg.svg_periods))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canontri",
        description="Canonical layered triangulations, volume maximization and cusp geometry.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    helps = {
        "bundle": "once-punctured torus bundle",
        "sphere": "4-punctured sphere bundle",
        "bridge": "two-bridge link complement",
    }
    for mode, text in helps.items():
        p = sub.add_parser(mode, help=text)
        p.add_argument("--word", help="RL-word, exponents allowed (e.g. R3L2R)")
        if mode != "bridge":
            p.add_argument("--matrix", help="monodromy a,b,c,d (row major)")
        p.add_argument("--tol", type=float, default=1e-12, help="gradient tolerance (default 1e-12)")
        p.add_argument("--max-iter", type=int, default=200)
        p.add_argument("--json", dest="json_path", metavar="PATH", help="report path (default stdout)")
        p.add_argument("--svg", dest="svg_path", metavar="PATH")
        p.add_argument("--svg-periods", type=int, default=1, metavar="K", help="K x K copies of the domain")
        if mode == "bundle":
            p.add_argument("--rnlm", metavar="N,M", help="compare with the closed form for R^N L^M")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        mode=args.mode,
        word=args.word,
        matrix=getattr(args, "matrix", None),
        tol=args.tol,
        max_iter=args.max_iter,
        json_path=args.json_path,
        svg_path=args.svg_path,
        svg_periods=args.svg_periods,
        rnlm=getattr(args, "rnlm", None),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
