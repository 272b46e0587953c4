"""Euclidean realization of the cusp cross-section and what it certifies.

The cusp triangulation is developed triangle by triangle into C along a
spanning tree of its dual graph.  Every gluing not used by the tree then
yields a similarity between two placements of one side; the structure is
complete exactly when all of these are translations.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .angles import LABEL_COLUMN, AngleStructure
from .errors import DegenerateError
from .gluing import CUSP_CORNERS, EDGE_LABEL, CuspGraph, cusp_graph
from .triangulation import LayeredTriangulation, _states

__all__ = [
    "CuspDevelopment",
    "FanDiagnostics",
    "GeodesicLength",
    "triangle_shape",
    "develop_cusp",
    "holonomy_residuals",
    "fan_diagnostics",
    "geodesic_complex_lengths",
    "fan_patch",
]


def triangle_shape(x: float, y: float, z: float) -> complex:
    """Third vertex of the triangle (0, 1, s) with angles x, y, z at 0, 1, s."""
    if min(x, y, z) <= 0:
        raise DegenerateError("triangle with a non-positive angle")
    return complex(np.sin(y) / np.sin(z) * np.exp(1j * x))


def _third(pu: complex, pv: complex, au: float, av: float, aw: float) -> complex:
    """Vertex w of the counterclockwise triangle (u, v, w) with angles au, av, aw."""
    return pu + (pv - pu) * (np.sin(av) / np.sin(aw)) * np.exp(1j * au)


@dataclass
class CuspDevelopment:
    graph: CuspGraph
    corner_angles: np.ndarray  # (triangles, 4): angle at each tetrahedron-vertex corner
    positions: dict  # triangle id -> {corner vertex: complex}
    components: list  # lists of triangle ids
    tree: set  # indices of gluings used by the spanning tree
    gluing_maps: dict  # gluing index -> (scale, shift): z_b -> scale * z_b + shift
    vertex_residuals: list
    periods: dict = field(default_factory=dict)
    period_residuals: dict = field(default_factory=dict)
    sigma: tuple | None = None  # (scale, shift) of the elliptic involution, bundles only

    def triangle(self, tid: int) -> tuple[complex, complex, complex]:
        T = self.graph.triangles[tid]
        return tuple(self.positions[tid][c] for c in T.corners)

    def signed_areas(self) -> np.ndarray:
        out = []
        for T in self.graph.triangles:
            a, b, c = self.triangle(T.id)
            out.append(((b - a).conjugate() * (c - a)).imag / 2)
        return np.array(out)


def _corner_angles(graph: CuspGraph, tri: LayeredTriangulation, s: AngleStructure) -> np.ndarray:
    out = np.zeros((len(graph.triangles), 4))
    for T in graph.triangles:
        row = tri.layer_position(T.layer)
        for c, lab in zip(T.corners, T.labels):
            out[T.id, c] = s.angles[row, LABEL_COLUMN[lab]]
    return out


def develop_cusp(tri: LayeredTriangulation, s: AngleStructure, graph: CuspGraph | None = None) -> CuspDevelopment:
    graph = graph or cusp_graph(tri)
    if np.any(s.angles <= 0):
        raise DegenerateError("development needs strictly positive angles")
    ang = _corner_angles(graph, tri, s)
    tris = graph.triangles
    adj: dict[int, list[int]] = {T.id: [] for T in tris}
    for gi, g in enumerate(graph.gluings):
        adj[g.tri_a].append(gi)
        adj[g.tri_b].append(gi)

    pos: dict[int, dict[int, complex]] = {}
    tree: set[int] = set()
    components = []

    def place_from(gi, src):
        g = graph.gluings[gi]
        if src == g.tri_a:
            dst, cs, cd = g.tri_b, g.corners_a, g.corners_b
        else:
            dst, cs, cd = g.tri_a, g.corners_b, g.corners_a
        T = tris[dst]
        known = {cd[0]: pos[src][cs[0]], cd[1]: pos[src][cs[1]]}
        order = T.corners
        # rotate the counterclockwise corner list so the unknown corner is last
        r = next(i for i in range(3) if order[i] not in known)
        u, v, wv = order[(r + 1) % 3], order[(r + 2) % 3], order[r]
        pw = _third(known[u], known[v], ang[dst, u], ang[dst, v], ang[dst, wv])
        pos[dst] = {u: known[u], v: known[v], wv: pw}
        return dst

    for T in tris:
        if T.id in pos:
            continue
        c0, c1, c2 = T.corners
        pos[T.id] = {c0: 0j, c1: 1 + 0j, c2: triangle_shape(ang[T.id, c0], ang[T.id, c1], ang[T.id, c2])}
        comp = [T.id]
        # breadth-first, postponing gluings across the monodromy so they close loops
        for allowed in (("layer", "fold"), ("layer", "fold", "wrap")):
            queue = deque(comp)
            while queue:
                a = queue.popleft()
                for gi in adj[a]:
                    g = graph.gluings[gi]
                    if g.kind not in allowed:
                        continue
                    other = g.tri_b if g.tri_a == a else g.tri_a
                    if other in pos:
                        continue
                    place_from(gi, a)
                    tree.add(gi)
                    comp.append(other)
                    queue.append(other)
        components.append(comp)

    maps = {}
    for gi, g in enumerate(graph.gluings):
        pa = [pos[g.tri_a][c] for c in g.corners_a]
        pb = [pos[g.tri_b][c] for c in g.corners_b]
        scale = (pa[1] - pa[0]) / (pb[1] - pb[0])
        maps[gi] = (scale, pa[0] - scale * pb[0])

    dev = CuspDevelopment(graph, ang, pos, components, tree, maps, _vertex_residuals(graph, ang))
    _periods(dev, tri)
    return dev


def _vertex_residuals(graph: CuspGraph, ang: np.ndarray) -> list[tuple[str, float]]:
    """|psi - 1| for the loop around each cusp vertex.

    Going counterclockwise around corner P of triangle (P, Q, R), the side
    length ratio |PR| / |PQ| is sin Q / sin R.  The angles around a vertex
    always add up to 2 pi, so psi is this positive product.
    """
    out = []
    for k, cls in enumerate(graph.vertex_classes()):
        logpsi = 0.0
        total = 0.0
        for tid, c in cls:
            cs = graph.triangles[tid].corners
            i = cs.index(c)
            q, r = cs[(i + 1) % 3], cs[(i + 2) % 3]
            logpsi += np.log(np.sin(ang[tid, q])) - np.log(np.sin(ang[tid, r]))
            total += ang[tid, c]
        psi = np.exp(logpsi) * np.exp(1j * total)
        out.append((f"vertex:{k}", float(abs(psi - 1))))
    return out


def _reduced_basis(shifts: list[complex]) -> tuple[complex, complex] | None:
    """Gauss-reduced basis from the two shortest independent translations."""
    big = max((abs(t) for t in shifts), default=0.0)
    vs = sorted((t for t in shifts if abs(t) > 1e-9 * big), key=abs)
    if not vs:
        return None
    u = vs[0]
    v = next((t for t in vs[1:] if abs((u.conjugate() * t).imag) > 1e-9 * abs(u) * abs(t)), None)
    if v is None:
        return None
    while True:
        if abs(v) < abs(u):
            u, v = v, u
        k = round((u.conjugate() * v).real / abs(u) ** 2)
        if k == 0:
            break
        v = v - k * u
    if (u.conjugate() * v).imag < 0:
        v = -v
    return complex(u), complex(v)


def _periods(dev: CuspDevelopment, tri: LayeredTriangulation) -> None:
    g = dev.graph
    first = set(dev.components[0])
    off_tree = [i for i in dev.gluing_maps if i not in dev.tree and g.gluings[i].tri_a in first]
    basis = _reduced_basis([dev.gluing_maps[i][1] for i in off_tree])
    if basis is not None:
        h, v = basis
        dev.periods["horizontal"], dev.periods["vertical"] = h, v
        # a gluing map takes part in a generator when its shift has a nonzero coefficient on it
        M = np.array([[h.real, v.real], [h.imag, v.imag]])
        for i in off_tree:
            scale, shift = dev.gluing_maps[i]
            a, b = np.rint(np.linalg.solve(M, [shift.real, shift.imag]))
            for name, coef in (("horizontal", a), ("vertical", b)):
                if coef != 0:
                    prev = dev.period_residuals.get(name, 0.0)
                    dev.period_residuals[name] = max(prev, float(abs(scale - 1)))
    if tri.kind == "torus-bundle":
        # the elliptic involution swaps cusp triangles (k, v) and (k, 3 - v)
        T = g.triangles[0]
        a, b = T.corners[0], T.corners[1]
        src = [dev.positions[0][a], dev.positions[0][b]]
        dst = [dev.positions[3][3 - a], dev.positions[3][3 - b]]
        scale = (dst[1] - dst[0]) / (src[1] - src[0])
        dev.sigma = (scale, dst[0] - scale * src[0])
        dev.period_residuals["sigma"] = abs(scale - 1)


def holonomy_residuals(dev: CuspDevelopment) -> list[tuple[str, float]]:
    """Residuals |psi - 1| for vertex loops and for every gluing off the tree."""
    out = list(dev.vertex_residuals)
    for gi, (scale, _) in sorted(dev.gluing_maps.items()):
        if gi in dev.tree:
            continue
        out.append((f"{dev.graph.gluings[gi].kind}:{gi}", float(abs(scale - 1))))
    if dev.sigma is not None:
        out.append(("sigma", float(abs(dev.sigma[0] - 1))))
    return out


# ---------------------------------------------------------------- fans


@dataclass(frozen=True)
class FanDiagnostics:
    hinge: int
    side: str  # "before" or "after" the hinge
    letter: str
    terminal: bool  # a bridge fan ending at a clasp
    Q: float
    P: float
    T: float
    pt_sine: float | None = None  # P/T from the neighbouring layers, None for terminal fans

    @property
    def margin(self) -> float:
        return self.Q - (self.P + self.T)

    @property
    def scale(self) -> float:
        return self.P + self.T


def _swap(v, letter):
    x, y, z = v
    return (y, x, z) if letter == "L" else (x, y, z)


def fan_diagnostics(tri: LayeredTriangulation, s: AngleStructure) -> list[FanDiagnostics]:
    """Segments Q, P, T of the broken line on both sides of each hinge, with T = 1.

    P and T are the sides of the hinge triangle meeting at its z-corner, so
    P/T = sin x / sin y there (x and y trade places for L-runs).  Q is the
    next segment along the fan, Q/P = sin y / sin x in the neighbouring
    layer.  The same P/T also follows from the two layers next to the hinge,
    sin y' sin^2 x / (sin x' sin^2 z), once holonomy around the fan vertex is
    trivial; that value is kept as ``pt_sine``.

    A two-bridge fan running into a clasp is a single Euclidean triangle whose
    sides Q and P + T face the angles sum(x) and z_end + sum(x).
    """
    m = len(tri.layers)
    letters = tri.word.letters
    sines = np.sin(s.angles)
    if tri.periodic:
        row = lambda i: i % m  # noqa: E731
        letter_at = lambda i: letters[i % m]  # noqa: E731
    else:
        row = lambda i: i - 1  # noqa: E731
        letter_at = lambda i: letters[i - 1]  # noqa: E731
    hinges = tri.hinges
    out = []
    for j in hinges:
        for side, step in (("before", -1), ("after", 1)):
            letter = letter_at(j) if step < 0 else letter_at(j + 1)
            # layers of the run, walking away from the hinge
            run = []
            i = j + step
            while (tri.periodic or 1 <= i <= m) and not tri.layer(i).hinge:
                run.append(i)
                i += step
            terminal = not tri.periodic and not (1 <= i <= m)
            xh, yh, _ = _swap(sines[row(j)], letter)
            P = xh / yh
            if terminal:
                if not run:
                    continue
                col = 0 if letter == "R" else 1
                sig = float(sum(s.angles[row(k), col] for k in run))
                zt = float(s.angles[row(run[-1]), 2])
                Q = (P + 1) * np.sin(sig) / np.sin(zt + sig)
                out.append(FanDiagnostics(j, side, letter, True, float(Q), float(P), 1.0))
                continue
            xn, yn, zn = _swap(sines[row(j + step)], letter)
            Q = P * yn / xn
            pt = None
            if run:
                xf, yf, _ = _swap(sines[row(j + 2 * step)], letter)
                pt = float(yf * xn * xn / (xf * zn * zn))
            out.append(FanDiagnostics(j, side, letter, False, float(Q), float(P), 1.0, pt))
    return out


# ---------------------------------------------------------- geodesics


@dataclass(frozen=True)
class GeodesicLength:
    syllable: str
    pivot: tuple
    length: complex
    orbit_residual: float
    deck_residual: float


@dataclass(frozen=True)
class FanPatch:
    pivot: tuple
    node_plus: complex
    node_minus: complex
    vertices: tuple  # complex positions of the fan vertices, in order
    closure_residual: float


def _mobius_from_points(z, w) -> np.ndarray:
    """Matrix of the Moebius map sending z[i] -> w[i] for i = 0, 1, 2."""

    def to_standard(p):
        # sends p0 -> 0, p1 -> 1, p2 -> oo
        return np.array([[p[1] - p[2], -p[0] * (p[1] - p[2])], [p[1] - p[0], -p[2] * (p[1] - p[0])]])

    A, B = to_standard(z), to_standard(w)
    M = np.linalg.inv(B) @ A
    return M / np.sqrt(np.linalg.det(M))


def fan_patch(tri: LayeredTriangulation, s: AngleStructure, born: int, dies: int) -> FanPatch:
    """Develop the fan around the edge born in layer ``born`` and erased in ``dies``.

    Works in the plane cover of the fiber around one ideal vertex (the
    origin): cusp vertices there are the directions of the edges leaving it,
    so a fan's two nodes are u and -u, and its other vertices are the
    directions d with det(u, d) = 1.
    """
    letters = tri.word.letters
    if tri.periodic:
        B = _states(letters, dies + 2)
        cols = lambda j: B[j + 1].columns()  # noqa: E731
        row = lambda j: j % len(tri.layers)  # noqa: E731
    else:
        B = _states(letters, dies + 1)
        cols = lambda j: B[j].columns()  # noqa: E731
        row = lambda j: j - 1  # noqa: E731

    p, q = cols(born)
    u = (p[0] + q[0], p[1] + q[1])
    det = lambda a, b: a[0] * b[1] - a[1] * b[0]  # noqa: E731
    inside = lambda d: d in (u, (-u[0], -u[1])) or det(u, d) == 1  # noqa: E731

    tris = []
    for j in range(born, dies + 1):
        p, q = cols(j)
        offs = ((0, 0), p, q, (p[0] + q[0], p[1] + q[1]))
        for v in range(4):
            dirs = {a: (offs[a][0] - offs[v][0], offs[a][1] - offs[v][1]) for a in range(4) if a != v}
            if not all(inside(d) for d in dirs.values()):
                continue
            corners = [dirs[a] for a in CUSP_CORNERS[v]]
            angles = [s.angles[row(j), LABEL_COLUMN[EDGE_LABEL[frozenset({v, a})]]] for a in CUSP_CORNERS[v]]
            tris.append((corners, angles))

    pos: dict = {}
    c, a = tris[0]
    pos[c[0]], pos[c[1]] = 0j, 1 + 0j
    pos[c[2]] = triangle_shape(*a)
    placed = {0}
    closure = 0.0
    changed = True
    while changed:
        changed = False
        for k, (c, a) in enumerate(tris):
            known = [i for i in range(3) if c[i] in pos]
            if k in placed or len(known) < 2:
                continue
            if len(known) == 3:
                r = 2
            else:
                r = next(i for i in range(3) if i not in known)
            u0, v0 = (r + 1) % 3, (r + 2) % 3
            pw = _third(pos[c[u0]], pos[c[v0]], a[u0], a[v0], a[r])
            if c[r] in pos:
                closure = max(closure, abs(pw - pos[c[r]]))
            else:
                pos[c[r]] = pw
            placed.add(k)
            changed = True
    if len(placed) != len(tris):
        raise DegenerateError("fan patch is not connected")

    # fan vertices are d0 + s u, so the dot product with u orders them by s
    mid = sorted((d for d in pos if d not in (u, (-u[0], -u[1]))), key=lambda d: d[0] * u[0] + d[1] * u[1])
    verts = tuple(pos[d] for d in mid)
    return FanPatch(u, pos[u], pos[(-u[0], -u[1])], verts, float(closure))


def geodesic_complex_lengths(tri: LayeredTriangulation, s: AngleStructure) -> list[GeodesicLength]:
    """Complex length of the deck transformation advancing each fan by one step."""
    out = []
    seen = set()
    m = len(tri.layers)
    for e in tri.edge_classes:
        if e.is_clasp_core or e.born is None or e.dies is None or e.subword is None:
            continue
        sub = e.subword
        if len(sub) < 3 or sub[0] != sub[-1] or set(sub[1:-1]) != {_other(sub[0])}:
            continue
        key = (e.born % m if tri.periodic else e.born)
        if key in seen:
            continue
        seen.add(key)
        patch = fan_patch(tri, s, e.born, e.dies)
        z = patch.vertices
        i0 = max(0, len(z) // 2 - 2)
        M = _mobius_from_points(z[i0:i0 + 3], z[i0 + 1:i0 + 4])
        mu = np.linalg.eigvals(M)
        mu1 = mu[np.argmax(np.abs(mu))]
        ell = np.log(mu1 * mu1)
        if ell.real < 0:
            ell = -ell
        f = lambda t: (M[0, 0] * t + M[0, 1]) / (M[1, 0] * t + M[1, 1])  # noqa: E731
        scale = abs(patch.node_plus - patch.node_minus)
        orbit = max(abs(f(z[i]) - z[i + 1]) for i in range(len(z) - 1)) / scale
        at_inf = M[0, 0] / M[1, 0]
        deck = min(abs(at_inf - patch.node_plus), abs(at_inf - patch.node_minus)) / scale
        out.append(GeodesicLength(sub[1:-1], patch.pivot, complex(ell), float(orbit), float(deck)))
    return out


def _other(letter: str) -> str:
    return "L" if letter == "R" else "R"
