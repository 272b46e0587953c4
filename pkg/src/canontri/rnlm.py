"""Closed-form realization of the cusp for the words R^N L^M.

The complex numbers a, a', b, b' solve

    sin a  =  i tan b  cos b'        b  = (pi - 2a)  / N
    sin a' = -i tan b' cos b         b' = (pi - 2a') / M

and the R-fan is then the set of points cot(a + s b) between the nodes
+-cot b.  Comparing this with the numerically developed fan checks the
maximizer against an independent route.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import AngleStructure
from .errors import DimensionMismatchError, NoContractionError
from .geometry import fan_patch, geodesic_complex_lengths
from .triangulation import LayeredTriangulation

__all__ = ["RNLMSolution", "solve_rnlm", "rnlm_crosscheck", "pinched_angle_estimate"]


@dataclass(frozen=True)
class RNLMSolution:
    N: int
    M: int
    a: complex
    a_prime: complex
    b: complex
    b_prime: complex
    iterations: int
    residual: float

    def fan_vertices(self, prime: bool = False) -> np.ndarray:
        """cot(a + s b) for s = -1 .. N + 1."""
        a, b, n = (self.a_prime, self.b_prime, self.M) if prime else (self.a, self.b, self.N)
        s = np.arange(-1, n + 2)
        return 1 / np.tan(a + s * b)

    def nodes(self, prime: bool = False) -> tuple[complex, complex]:
        b = self.b_prime if prime else self.b
        c = 1 / np.tan(b)
        return complex(c), complex(-c)


def _residual(a, ap, N, M) -> float:
    b, bp = (np.pi - 2 * a) / N, (np.pi - 2 * ap) / M
    r1 = np.sin(a) - 1j * np.tan(b) * np.cos(bp)
    r2 = np.sin(ap) + 1j * np.tan(bp) * np.cos(b)
    return float(max(abs(r1), abs(r2)))


def solve_rnlm(N: int, M: int, tol: float = 1e-15, max_iter: int = 500) -> RNLMSolution:
    """Fixed-point iteration started from a = a' = 0."""
    if N < 4 or M < 4:
        raise NoContractionError(f"the iteration needs N, M >= 4 (got {N}, {M})")
    a = ap = 0j
    for it in range(1, max_iter + 1):
        an = np.arcsin(1j * np.tan((np.pi - 2 * a) / N) * np.cos((np.pi - 2 * ap) / M))
        apn = np.arcsin(-1j * np.tan((np.pi - 2 * ap) / M) * np.cos((np.pi - 2 * a) / N))
        step = max(abs(an - a), abs(apn - ap))
        a, ap = complex(an), complex(apn)
        if not np.isfinite(step):
            break
        if step <= tol:
            break
    else:
        raise NoContractionError(f"no convergence after {max_iter} iterations")
    res = _residual(a, ap, N, M)
    if not np.isfinite(res) or res > 1e-10:
        raise NoContractionError(f"iteration diverged (residual {res:.3e})")
    return RNLMSolution(N, M, a, ap, (np.pi - 2 * a) / N, (np.pi - 2 * ap) / M, it, res)


def pinched_angle_estimate(N: int, M: int) -> float:
    return 2 * np.pi**2 * (N**-3.0 + M**-3.0)


def _similarity(z1, z2, w1, w2):
    k = (w2 - w1) / (z2 - z1)
    return lambda z: w1 + k * (np.asarray(z) - z1)


def _best_match(patch, target, nodes) -> tuple[float, np.ndarray | None]:
    """Relative error after sending the developed nodes to the analytic ones.

    The development may be mirrored or read backwards relative to the
    analytic picture, so the best of those variants is reported.
    """
    z = np.array(patch.vertices)
    n1, n2 = nodes
    unmirror = _similarity(np.conj(n1), np.conj(n2), n1, n2)
    best: tuple[float, np.ndarray | None] = (np.inf, None)
    for src in ((patch.node_plus, patch.node_minus), (patch.node_minus, patch.node_plus)):
        w = _similarity(src[0], src[1], n1, n2)(z)
        for cand in (w, unmirror(np.conj(w))):
            for order in (1, -1):
                c = cand[::order]
                if len(c) != len(target):
                    continue
                err = float(np.max(np.abs(c - target)) / np.max(np.abs(target)))
                if err < best[0]:
                    best = (err, c)
    return best


def rnlm_crosscheck(tri: LayeredTriangulation, s: AngleStructure, sol: RNLMSolution) -> dict:
    """Compare the developed maximizer of R^N L^M with the analytic solution."""
    letters = tri.word.letters
    if letters != "R" * sol.N + "L" * sol.M:
        raise DimensionMismatchError("triangulation word is not R^N L^M")
    out: dict = {}
    pivots = {}
    for e in tri.edge_classes:
        if e.subword == "L" + "R" * sol.N + "L":
            pivots["R"] = e
        elif e.subword == "R" + "L" * sol.M + "R":
            pivots["L"] = e
    for key, prime in (("R", False), ("L", True)):
        e = pivots[key]
        patch = fan_patch(tri, s, e.born, e.dies)
        target = sol.fan_vertices(prime)
        err, matched = _best_match(patch, target, sol.nodes(prime))
        out[f"{key}_vertex_error"] = err
        # consecutive triangles (node+, z_s, z_{s+1}) have ratio sin^2(a+sb)/sin^2 b
        a, b = (sol.a_prime, sol.b_prime) if prime else (sol.a, sol.b)
        nplus = sol.nodes(prime)[0]
        if matched is not None:
            ratios = (matched[2:] - nplus) / (matched[2:] - matched[1:-1])
            A = a + np.arange(0, len(ratios)) * b
            expect = np.sin(A) ** 2 / np.sin(b) ** 2
            out[f"{key}_ratio_error"] = float(np.max(np.abs(ratios - expect) / np.abs(expect)))
    out["parallelogram"] = float(abs(1 / np.tan(sol.a + sol.N * sol.b) + 1 / np.tan(sol.a)))
    out["congruence"] = float(abs(np.tan(sol.b) / np.tan(sol.a) + np.tan(sol.b_prime) / np.tan(sol.a_prime)))
    hinge_min = min(float(np.min(s.angles[tri.layer_position(j)])) for j in tri.hinges)
    out["pinched_angle"] = hinge_min
    out["pinched_estimate"] = pinched_angle_estimate(sol.N, sol.M)
    lengths = {g.syllable[0]: g.length for g in geodesic_complex_lengths(tri, s)}
    for key, value in (("R", 2j * sol.b), ("L", -2j * sol.b_prime)):
        ell = lengths.get(key)
        if ell is None:
            continue
        v = value if value.real >= 0 else -value
        out[f"{key}_geodesic_error"] = float(min(abs(ell - v), abs(ell - np.conj(v))))
    return out
