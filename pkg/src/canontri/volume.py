"""Volume functional on the space of angle structures and its maximizer.

With theta = A w + const (all dihedral angles, three per layer) the volume is
V(w) = mult * sum L(theta), so

    grad V = -mult * A^T log(2 sin theta)
    hess V = -mult * A^T diag(cot theta) A.

Every layer's three coefficient rows sum to zero, which makes each layer's
contribution to the Hessian negative semidefinite even when an angle exceeds
pi/2.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .angles import AngleStructure, angle_map, angles_from_w, initial_structure
from .errors import AngleSumError, BoundaryError, NotConvergedError, OutOfRangeError
from .lobachevsky import lobachevsky, lobachevsky_unchecked
from .triangulation import LayeredTriangulation

__all__ = [
    "V3",
    "V8",
    "VolumeReport",
    "tet_volume",
    "total_volume",
    "volume_gradient",
    "volume_hessian",
    "maximize_volume",
    "volume_bounds",
    "degeneracy_patterns",
    "double_degeneracy_rate",
]

V3 = 3 * float(lobachevsky(np.pi / 3))
V8 = 8 * float(lobachevsky(np.pi / 4))
BRIDGE_LOWER_OFFSET = 2.7066
_EPS = np.finfo(float).eps
# theta = A w + const loses digits to cancellation when angles are pinched,
# so the functional works in extended precision where the platform has it
_LD = np.longdouble
_PI_LD = 4 * np.arctan(_LD(1))


@dataclass
class VolumeReport:
    total_volume: float
    per_tet_volumes: list
    gradient_inf_norm: float
    iterations: int
    converged: bool
    lower_bound: float
    upper_bound: float
    certificate_volume: float
    history: list = field(default_factory=list)
    newton_steps: int = 0
    gradient_steps: int = 0
    seconds: float = 0.0
    degeneracy: list = field(default_factory=list)


def tet_volume(x: float, y: float, z: float, tol: float = 1e-9) -> float:
    if abs(x + y + z - np.pi) > tol:
        raise AngleSumError(f"angles sum to {x + y + z!r}, not pi")
    if min(x, y, z) < 0:
        raise OutOfRangeError("negative dihedral angle")
    # clip rounding excursions past pi before evaluating
    return float(sum(lobachevsky(min(t, np.pi)) for t in (x, y, z)))


def total_volume(tri: LayeredTriangulation, s: AngleStructure) -> float:
    vals = lobachevsky_unchecked(np.clip(s.angles, 0.0, np.pi))
    return float(tri.multiplicity * vals.sum())


class _Functional:
    def __init__(self, tri: LayeredTriangulation):
        self.tri = tri
        self.map = angle_map(tri)
        self.mult = tri.multiplicity
        self.A = self.map.A.astype(_LD)
        # every constant is an integer multiple of pi/2
        self.const = np.rint(self.map.const / (np.pi / 2)).astype(_LD) * (_PI_LD / 2)

    def theta(self, w):
        return self.A @ np.asarray(w, dtype=_LD) + self.const

    def value(self, w) -> float:
        return float(self.mult * lobachevsky_unchecked(self.theta(w).astype(float)).sum())

    def _interior_theta(self, w):
        th = self.theta(w)
        if np.any(th <= 0):
            raise BoundaryError("an angle is not positive")
        return th

    def gradient(self, w) -> np.ndarray:
        th = self._interior_theta(w)
        return -self.mult * (self.A.T @ np.log(2 * np.sin(th)))

    def hessian(self, w) -> np.ndarray:
        th = self._interior_theta(w).astype(float)
        A = self.map.A
        return -self.mult * (A.T * (1 / np.tan(th))) @ A


def _free(tri, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if tri.periodic:
        return w
    return w[1:-1]


def volume_gradient(tri: LayeredTriangulation, w) -> np.ndarray:
    """Gradient with respect to the free entries of w (bridges drop the ends)."""
    return _Functional(tri).gradient(_free(tri, w)).astype(float)


def volume_hessian(tri: LayeredTriangulation, w) -> np.ndarray:
    return _Functional(tri).hessian(_free(tri, w))


def volume_bounds(tri: LayeredTriangulation):
    """(lower, upper, certificate structure) from the sharp volume estimates."""
    if tri.periodic:
        n = tri.word.n
        k = 2 * n * tri.multiplicity
        cert = angles_from_w(tri, np.full(tri.w_length, np.pi / 3))
        return k * V3, k * V8, cert
    w = tri.word
    syl = w.syllables
    a1, an, c, tw = syl[0][1], syl[-1][1], w.c, w.tw
    ws = np.full(c + 1, np.pi / 3)
    for i in range(a1):
        ws[i] = np.pi / 2 - (np.pi / 6) * i / a1
    for i in range(c - an + 1, c + 1):
        ws[i] = np.pi / 2 - (np.pi / 6) * (c - i) / an
    cert = angles_from_w(tri, ws)
    return 2 * V3 * tw - BRIDGE_LOWER_OFFSET, 2 * V8 * (tw - 1), cert


def _line_search(F, w, d, V, gnorm):
    t = 1.0
    while t > 1e-16:
        wn = w + t * d
        if np.all(F.theta(wn) > 0):
            Vn = F.value(wn)
            if Vn > V:
                return wn, Vn
            if abs(Vn - V) <= 4 * _EPS * abs(V):
                # at the rounding floor of V: accept only if the gradient shrinks
                gn = np.max(np.abs(F.gradient(wn)))
                if gn < gnorm:
                    return wn, Vn
        t *= 0.5
    return None, None


def maximize_volume(tri: LayeredTriangulation, w0=None, tol: float = 1e-12, max_iter: int = 200):
    """Damped Newton ascent over the open polytope of angle structures."""
    t0 = time.perf_counter()
    F = _Functional(tri)
    if w0 is None:
        w0 = initial_structure(tri).w
    w = _free(tri, w0).astype(_LD)
    if not np.all(F.theta(w) > 0):
        raise BoundaryError("starting point is not interior")
    V = F.value(w)
    history = [V]
    newton = grad_steps = 0
    converged = False
    it = 0
    g = F.gradient(w)
    gnorm = float(np.max(np.abs(g)))
    for it in range(1, max_iter + 1):
        if gnorm < tol:
            converged = True
            it -= 1
            break
        H = F.hessian(w)
        try:
            d = np.linalg.solve(H, -g.astype(float))
            ok = np.all(np.isfinite(d)) and g @ d > 0
        except np.linalg.LinAlgError:
            ok = False
        wn = None
        if ok:
            wn, Vn = _line_search(F, w, d, V, gnorm)
            if wn is not None:
                newton += 1
        if wn is None:
            wn, Vn = _line_search(F, w, g.astype(float), V, gnorm)
            if wn is None:
                break
            grad_steps += 1
        w, V = wn, Vn
        history.append(V)
        g = F.gradient(w)
        gnorm = float(np.max(np.abs(g)))
    else:
        converged = gnorm < tol
        if converged:
            it = max_iter

    s = angles_from_w(tri, F.map.full_w(w.astype(float)))
    lo, hi, cert = volume_bounds(tri)
    per_layer = lobachevsky_unchecked(np.clip(s.angles, 0, np.pi)).sum(axis=1)
    report = VolumeReport(
        total_volume=total_volume(tri, s),
        per_tet_volumes=[float(v) for v in np.repeat(per_layer, tri.multiplicity)],
        gradient_inf_norm=gnorm,
        iterations=it,
        converged=converged,
        lower_bound=lo,
        upper_bound=hi,
        certificate_volume=total_volume(tri, cert),
        history=history,
        newton_steps=newton,
        gradient_steps=grad_steps,
        seconds=time.perf_counter() - t0,
        degeneracy=degeneracy_patterns(tri, s.w),
    )
    if not converged:
        raise NotConvergedError(
            f"gradient norm {gnorm:.3e} after {it} iterations", report=report
        )
    return s, report


def degeneracy_patterns(tri: LayeredTriangulation, w, eps: float = 1e-6) -> list[str]:
    """Flattening patterns such as 'RR|L' for indices where w is nearly 0.

    The bar sits at index i, between the letters on either side of layer i.
    Reported as telemetry only: such points are never maximizers.
    """
    letters = tri.word.letters
    out = []
    for L in tri.layers:
        i = L.index
        if w[i] >= eps:
            continue
        if tri.periodic:
            m = len(letters)
            get = lambda j: letters[j % m]  # noqa: E731
        else:
            get = lambda j: letters[j - 1] if 1 <= j <= len(letters) else ""  # noqa: E731
        out.append(f"{get(i - 1)}{get(i)}|{get(i + 1)}{get(i + 2)}")
    return out


def double_degeneracy_rate(lam: float, U: float, V: float) -> float:
    """exp(-dV/de) along the deformation that spreads a flat hinge over its neighbour."""
    return (1 - lam * lam) / 4 * U * ((1 + lam) / (1 - lam) * V) ** lam
