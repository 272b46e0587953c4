"""Angle structures parameterized by the half pleating angles w.

Each layer's dihedral angles are affine in (w_{i-1}, w_i, w_{i+1}) with
coefficients that depend only on the layer's context; z_i = pi - 2 w_i
always.  Bridges carry w_0 = w_c = pi/2 as fixed endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InfeasibleError
from .triangulation import LayeredTriangulation

__all__ = [
    "AngleStructure",
    "angle_map",
    "angles_from_w",
    "constraint_residuals",
    "initial_structure",
    "edge_angle_sums",
    "pleating_angles",
]

HALF_PI = np.pi / 2

# (x, y) coefficients on (w_{i-1}, w_i, w_{i+1})
CONTEXT_COEFFS = {
    "LL": ((1, 0, 1), (-1, 2, -1)),
    "RR": ((-1, 2, -1), (1, 0, 1)),
    "LR": ((1, 1, -1), (-1, 1, 1)),
    "RL": ((-1, 1, 1), (1, 1, -1)),
}
LABEL_COLUMN = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class AngleStructure:
    w: np.ndarray  # full pleating vector (bridges include the pinned ends)
    angles: np.ndarray  # shape (layers, 3): columns x, y, z
    interior: bool

    def angle(self, layer_pos: int, label: str) -> float:
        return float(self.angles[layer_pos, LABEL_COLUMN[label]])


@dataclass(frozen=True)
class AngleMap:
    """theta = A @ w_free + const, theta flattened layer by layer as (x, y, z)."""

    A: np.ndarray
    const: np.ndarray
    free: np.ndarray  # indices of free entries in the full w vector
    pinned: dict  # index -> value

    def full_w(self, w_free) -> np.ndarray:
        n = len(self.free) + len(self.pinned)
        w = np.empty(n)
        w[self.free] = w_free
        for i, v in self.pinned.items():
            w[i] = v
        return w

    def theta(self, w_free) -> np.ndarray:
        return self.A @ np.asarray(w_free, dtype=float) + self.const


def _neighbours(tri: LayeredTriangulation, i: int) -> tuple[int, int, int]:
    if tri.periodic:
        m = len(tri.layers)
        return (i - 1) % m, i % m, (i + 1) % m
    return i - 1, i, i + 1


def _full_map(tri: LayeredTriangulation) -> tuple[np.ndarray, np.ndarray]:
    n_layers = len(tri.layers)
    A = np.zeros((3 * n_layers, tri.w_length))
    const = np.zeros(3 * n_layers)
    for row, L in enumerate(tri.layers):
        idx = _neighbours(tri, L.index)
        cx, cy = CONTEXT_COEFFS[L.context]
        for col, coeffs in ((0, cx), (1, cy)):
            for j, c in zip(idx, coeffs):
                A[3 * row + col, j] += c
        A[3 * row + 2, idx[1]] -= 2
        const[3 * row + 2] = np.pi
    return A, const


def angle_map(tri: LayeredTriangulation) -> AngleMap:
    A, const = _full_map(tri)
    if tri.periodic:
        return AngleMap(A, const, np.arange(tri.w_length), {})
    c = tri.w_length - 1
    pinned = {0: HALF_PI, c: HALF_PI}
    free = np.arange(1, c)
    const = const + A[:, 0] * HALF_PI + A[:, c] * HALF_PI
    return AngleMap(A[:, free], const, free, pinned)


def constraint_residuals(tri: LayeredTriangulation, w) -> list[tuple[str, float]]:
    """Signed margins of the range, concavity and hinge conditions."""
    w = _check_length(tri, w)
    out = []
    free = range(len(w)) if tri.periodic else range(1, len(w) - 1)
    for i in free:
        out.append((f"range_lo:{i}", float(w[i])))
        out.append((f"range_hi:{i}", float(HALF_PI - w[i])))
    for L in tri.layers:
        a, b, c = (w[j] for j in _neighbours(tri, L.index))
        if L.hinge:
            out.append((f"hinge:{L.index}", float(b - abs(c - a))))
        else:
            out.append((f"concavity:{L.index}", float(2 * b - a - c)))
    return out


def _check_length(tri, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (tri.w_length,):
        raise DimensionMismatchError(
            f"w has shape {w.shape}, expected ({tri.w_length},)"
        )
    return w


def angles_from_w(tri: LayeredTriangulation, w) -> AngleStructure:
    w = _check_length(tri, w)
    A, const = _full_map(tri)
    theta = (A @ w + const).reshape(-1, 3)
    interior = all(m > 0 for _, m in constraint_residuals(tri, w))
    return AngleStructure(w.copy(), theta, interior)


def _parabola(j: int, k: int, i: int) -> float:
    return np.pi / 3 + (i - j) * (k - i) / (k - j) ** 2


def _terminal(h: int, i: int) -> float:
    # linear from pi/2 to pi/3 plus half the gap parabola, so concavity is strict
    return HALF_PI - (np.pi / 6) * i / h + i * (h - i) / (2 * h * h)


def initial_structure(tri: LayeredTriangulation) -> AngleStructure:
    hinges = tri.hinges
    if tri.periodic:
        m = len(tri.layers)
        w = np.full(m, np.pi / 3)
        for a, j in enumerate(hinges):
            k = hinges[(a + 1) % len(hinges)]
            if k <= j:
                k += m
            for i in range(j + 1, k):
                w[i % m] = _parabola(j, k, i)
    else:
        c = tri.w_length - 1
        w = np.full(c + 1, np.pi / 3)
        first, last = hinges[0], hinges[-1]
        for i in range(0, first):
            w[i] = _terminal(first, i)
        for i in range(last + 1, c + 1):
            w[i] = _terminal(c - last, c - i)
        for j, k in zip(hinges, hinges[1:]):
            for i in range(j + 1, k):
                w[i] = _parabola(j, k, i)
    s = angles_from_w(tri, w)
    if not s.interior:
        raise InfeasibleError("starting point is not interior")
    return s


def edge_angle_sums(tri: LayeredTriangulation, s: AngleStructure) -> list[float]:
    """Angle sum around each edge class."""
    out = []
    for e in tri.edge_classes:
        out.append(sum(s.angle(tri.layer_position(i), lab) for i, lab in e.slots))
    return out


def pleating_angles(w, i: int) -> tuple[float, float, float]:
    """Pleating angles along the three edges shared by layers i and i+1."""
    n = len(w)
    a, b = w[i % n], w[(i + 1) % n]
    return (-2 * a, 2 * b, 2 * a - 2 * b)
