"""Explicit face gluings of a layered triangulation.

The fiber is modelled on the plane: ideal vertices are lattice points, a
layer with Farey edge (p, q) is the family of parallelograms
t + {0, p, q, p+q} and the surface group Gamma acts on everything.  For the
once-punctured torus Gamma is the translation lattice Z^2; for the
4-punctured sphere it is generated by translations in 2Z^2 and x -> -x.

Vertex numbering inside a tetrahedron: V0 = t, V1 = t+p, V2 = t+q,
V3 = t+p+q.  Faces opposite V0, V3 lie on the bottom surface (diagonal
V1V2 = q-p) and faces opposite V1, V2 on the top surface (diagonal V0V3).

This module is deliberately independent of the Farey-walk bookkeeping in
``triangulation``: it glues faces by matching vertex sets modulo Gamma, so the
union-find over its gluings is an oracle for the edge classes.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .triangulation import LayeredTriangulation, _UnionFind, slope

Vec = tuple[int, int]

EDGE_LABEL = {
    frozenset({0, 3}): "z",
    frozenset({1, 2}): "z",
    frozenset({0, 1}): "x",
    frozenset({2, 3}): "x",
    frozenset({0, 2}): "y",
    frozenset({1, 3}): "y",
}
BOTTOM = (0, 3)  # faces named by their opposite vertex
TOP = (1, 2)
# corners of the cusp triangle at vertex v, counterclockwise seen from the cusp
CUSP_CORNERS = {0: (1, 2, 3), 1: (0, 3, 2), 2: (0, 1, 3), 3: (0, 2, 1)}
APEX_UP = {0: True, 1: False, 2: False, 3: True}


@dataclass(frozen=True)
class Tet:
    id: int
    layer: int
    copy: int
    verts: tuple[Vec, Vec, Vec, Vec]


@dataclass(frozen=True)
class FaceGluing:
    tet_a: int
    face_a: int
    tet_b: int
    face_b: int
    perm: tuple[tuple[int, int], ...]  # vertex of a -> vertex of b, for the 3 face vertices
    kind: str  # "layer", "wrap" or "fold"


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


class _Group:
    """Canonical representatives of finite point sets modulo Gamma."""

    def __init__(self, sphere: bool):
        self.sphere = sphere

    def canon(self, pts):
        best = None
        for s in ((1, -1) if self.sphere else (1,)):
            q = [(s * x, s * y) for x, y in pts]
            mn = min(q)
            if self.sphere:
                v = (-2 * (mn[0] // 2), -2 * (mn[1] // 2))
            else:
                v = (-mn[0], -mn[1])
            key = tuple(sorted(_add(a, v) for a in q))
            if best is None or key < best[0]:
                best = (key, (s, v))
        return best

    @staticmethod
    def act(g, pt):
        s, v = g
        return (s * pt[0] + v[0], s * pt[1] + v[1])


def _apply(M, pt):
    return (M.a * pt[0] + M.b * pt[1], M.c * pt[0] + M.d * pt[1])


def lattice_tetrahedra(tri: LayeredTriangulation) -> list[Tet]:
    sphere = tri.kind != "torus-bundle"
    G = _Group(sphere)
    tets = []
    for L in tri.layers:
        seen = set()
        offsets = ((0, 0), (1, 0), (0, 1), (1, 1)) if sphere else ((0, 0),)
        copy = 0
        for t in offsets:
            vs = (t, _add(t, L.p), _add(t, L.q), _add(_add(t, L.p), L.q))
            key = G.canon(vs)[0]
            if key in seen:
                continue
            seen.add(key)
            tets.append(Tet(len(tets), L.index, copy, vs))
            copy += 1
        assert copy == L.tetrahedra
    return tets


def _faces(tet: Tet, opps, transform=None):
    for o in opps:
        idx = tuple(i for i in range(4) if i != o)
        pts = [tet.verts[i] for i in idx]
        if transform is not None:
            pts = [transform(p) for p in pts]
        yield o, idx, pts


def _match(G, side_a, side_b, kind):
    """Glue faces listed in side_a to faces in side_b with equal Gamma-orbits."""
    table = {}
    for tid, o, idx, pts in side_b:
        key, g = G.canon(pts)
        assert key not in table, "two faces in one orbit on the same surface"
        table[key] = (tid, o, {G.act(g, p): i for p, i in zip(pts, idx)})
    out = []
    for tid, o, idx, pts in side_a:
        key, g = G.canon(pts)
        tb, ob, where = table.pop(key)
        perm = tuple((i, where[G.act(g, p)]) for p, i in zip(pts, idx))
        out.append(FaceGluing(tid, o, tb, ob, perm, kind))
    assert not table, "unmatched faces"
    return out


def _fold(G, side, periph: Vec):
    """Clasp: each face is folded onto its neighbour across the peripheral edge."""
    table = {}
    for tid, o, idx, pts in side:
        key, g = G.canon(pts)
        table[key] = (tid, o, {G.act(g, p): i for p, i in zip(pts, idx)})
    out = []
    done = set()
    for tid, o, idx, pts in side:
        if (tid, o) in done:
            continue
        pairs = [(i, j) for i in range(3) for j in range(3)
                 if i < j and slope((pts[j][0] - pts[i][0], pts[j][1] - pts[i][1])) == periph]
        assert len(pairs) == 1
        i, j = pairs[0]
        k = 3 - i - j
        a, b, c = pts[i], pts[j], pts[k]
        image = {i: a, j: b, k: (a[0] + b[0] - c[0], a[1] + b[1] - c[1])}
        key, g = G.canon(list(image.values()))
        tb, ob, where = table[key]
        assert (tb, ob) != (tid, o), "face folded onto itself"
        perm = tuple((idx[r], where[G.act(g, image[r])]) for r in range(3))
        out.append(FaceGluing(tid, o, tb, ob, perm, "fold"))
        done.add((tid, o))
        done.add((tb, ob))
    return out


def face_gluings(tri: LayeredTriangulation, tets: list[Tet] | None = None) -> list[FaceGluing]:
    tets = tets if tets is not None else lattice_tetrahedra(tri)
    G = _Group(tri.kind != "torus-bundle")
    by_layer: dict[int, list[Tet]] = {}
    for t in tets:
        by_layer.setdefault(t.layer, []).append(t)
    order = [L.index for L in tri.layers]

    def side(layer, opps, transform=None):
        return [(t.id, o, idx, pts) for t in by_layer[layer] for o, idx, pts in _faces(t, opps, transform)]

    out = []
    for a, b in zip(order, order[1:]):
        out += _match(G, side(a, TOP), side(b, BOTTOM), "layer")
    if tri.periodic:
        W = tri.monodromy
        out += _match(G, side(order[-1], TOP), side(order[0], BOTTOM, lambda p: _apply(W, p)), "wrap")
    else:
        bottom, top = tri.meta["peripheral"]
        out += _fold(G, side(order[0], BOTTOM), bottom)
        out += _fold(G, side(order[-1], TOP), top)
    faces = Counter()
    for g in out:
        faces[(g.tet_a, g.face_a)] += 1
        faces[(g.tet_b, g.face_b)] += 1
    assert len(faces) == 4 * len(tets) and set(faces.values()) == {1}
    return out


def union_find_edge_classes(tri: LayeredTriangulation) -> list[Counter]:
    """Edge classes as multisets of (layer, label), from face gluings alone."""
    tets = lattice_tetrahedra(tri)
    uf = _UnionFind()
    for g in face_gluings(tri, tets):
        perm = dict(g.perm)
        verts = list(perm)
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = verts[i], verts[j]
                uf.union((g.tet_a, *sorted((a, b))), (g.tet_b, *sorted((perm[a], perm[b]))))
    classes: dict = {}
    for t in tets:
        for e, lab in EDGE_LABEL.items():
            classes.setdefault(uf.find((t.id, *sorted(e))), Counter())[(t.layer, lab)] += 1
    return list(classes.values())


@dataclass(frozen=True)
class CuspTriangle:
    id: int
    tet: int
    vertex: int
    layer: int
    corners: tuple[int, int, int]  # tetrahedron vertices, counterclockwise
    labels: tuple[str, str, str]
    apex_up: bool
    hinge: bool


@dataclass(frozen=True)
class CuspGluing:
    tri_a: int
    tri_b: int
    corners_a: tuple[int, int]
    corners_b: tuple[int, int]
    kind: str


@dataclass(frozen=True)
class CuspGraph:
    triangles: tuple[CuspTriangle, ...]
    gluings: tuple[CuspGluing, ...]
    periodic: bool
    layers: int
    tets: tuple[Tet, ...]

    def index(self, tet: int, vertex: int) -> int:
        return 4 * tet + vertex

    @property
    def hairpins(self) -> list[CuspGluing]:
        return [g for g in self.gluings if g.kind == "fold"]

    def vertex_classes(self) -> list[list[tuple[int, int]]]:
        """Cusp vertices as lists of (triangle id, corner vertex)."""
        uf = _UnionFind()
        for g in self.gluings:
            for a, b in zip(g.corners_a, g.corners_b):
                uf.union((g.tri_a, a), (g.tri_b, b))
        out: dict = {}
        for T in self.triangles:
            for c in T.corners:
                out.setdefault(uf.find((T.id, c)), []).append((T.id, c))
        return list(out.values())


def cusp_graph(tri: LayeredTriangulation) -> CuspGraph:
    tets = lattice_tetrahedra(tri)
    hinge = {L.index: L.hinge for L in tri.layers}
    triangles = []
    for t in tets:
        for v in range(4):
            cs = CUSP_CORNERS[v]
            labs = tuple(EDGE_LABEL[frozenset({v, c})] for c in cs)
            triangles.append(CuspTriangle(4 * t.id + v, t.id, v, t.layer, cs, labs, APEX_UP[v], hinge[t.layer]))
    gluings = []
    for g in face_gluings(tri, tets):
        perm = dict(g.perm)
        for v in perm:
            side = tuple(sorted(u for u in perm if u != v))
            gluings.append(CuspGluing(
                4 * g.tet_a + v, 4 * g.tet_b + perm[v],
                side, (perm[side[0]], perm[side[1]]), g.kind,
            ))
    return CuspGraph(tuple(triangles), tuple(gluings), tri.periodic, len(tri.layers), tuple(tets))
