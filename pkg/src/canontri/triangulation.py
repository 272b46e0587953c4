"""Layered ideal triangulations built from RL-words.

Each layer is one tetrahedron (or two, for the 4-punctured sphere and for
two-bridge links) sitting over a Farey edge (p, q): the tetrahedron replaces
the diagonal q - p of the parallelogram spanned by p and q with p + q.  The
six edges of that tetrahedron carry the dihedral angles

    x on the two edges of slope p,
    y on the two edges of slope q,
    z on the two diagonals q - p and p + q.

Edge classes are read off the Farey walk: an edge is born as the added
diagonal of one layer, survives as a side of the following layers, and dies
as the erased diagonal of a later layer.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .farey import IDENTITY, LETTER_MATRIX, BridgeWord, IntMatrix2, MonodromyWord

__all__ = [
    "Layer",
    "EdgeClass",
    "LayeredTriangulation",
    "build_bundle_triangulation",
    "build_bridge_triangulation",
    "slope",
]

Vec = tuple[int, int]


def slope(v: Vec) -> Vec:
    """Primitive vector up to sign, normalized so the first nonzero entry is positive."""
    a, b = v
    if a < 0 or (a == 0 and b < 0):
        return (-a, -b)
    return (a, b)


@dataclass(frozen=True)
class Layer:
    index: int
    hinge: bool
    context: str  # letter before + letter after, e.g. "RL"
    tetrahedra: int
    p: Vec
    q: Vec

    @property
    def added(self) -> Vec:
        return (self.p[0] + self.q[0], self.p[1] + self.q[1])

    @property
    def erased(self) -> Vec:
        return (self.q[0] - self.p[0], self.q[1] - self.p[1])


@dataclass(frozen=True)
class EdgeClass:
    id: int
    slots: tuple[tuple[int, str], ...]  # (layer index, angle label), with repetition
    farey_vertex: Vec
    copy: int = 0
    is_clasp_core: bool = False
    subword: Optional[str] = None
    born: Optional[int] = None  # layer adding the edge (unrolled index for bundles)
    dies: Optional[int] = None  # layer erasing it

    @property
    def valence(self) -> int:
        return len(self.slots)

    def slot_counts(self) -> Counter:
        return Counter(self.slots)


@dataclass(frozen=True)
class LayeredTriangulation:
    kind: str  # "torus-bundle", "sphere-bundle" or "two-bridge"
    word: object
    layers: tuple[Layer, ...]
    edge_classes: tuple[EdgeClass, ...]
    monodromy: Optional[IntMatrix2] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def periodic(self) -> bool:
        return self.kind != "two-bridge"

    @property
    def multiplicity(self) -> int:
        return self.layers[0].tetrahedra

    @property
    def n_tetrahedra(self) -> int:
        return sum(L.tetrahedra for L in self.layers)

    @property
    def hinges(self) -> list[int]:
        return [L.index for L in self.layers if L.hinge]

    @property
    def w_length(self) -> int:
        """Length of the pleating vector (bridges carry the two pinned ends)."""
        return len(self.layers) if self.periodic else len(self.layers) + 2

    def layer(self, index: int) -> Layer:
        if self.periodic:
            return self.layers[index % len(self.layers)]
        return self.layers[index - 1]

    def layer_position(self, index: int) -> int:
        """Row of layer ``index`` in per-layer arrays."""
        return index % len(self.layers) if self.periodic else index - 1


def _states(letters: str, count: int) -> list[IntMatrix2]:
    """B_0 = I, B_{k+1} = B_k X_k with letters read cyclically."""
    B = [IDENTITY]
    for k in range(count):
        B.append(B[-1] @ LETTER_MATRIX[letters[k % len(letters)]])
    return B


def _label(v: Vec, p: Vec, q: Vec) -> Optional[str]:
    s = slope(v)
    if s == slope(p):
        return "x"
    if s == slope(q):
        return "y"
    return None


def build_bundle_triangulation(w: MonodromyWord, kind: str = "torus") -> LayeredTriangulation:
    if kind not in ("torus", "sphere"):
        raise ValueError(f"unknown bundle kind {kind!r}")
    letters = w.letters
    m = len(letters)
    tets = 1 if kind == "torus" else 2
    # an edge lives for at most one syllable plus two letters, so 3m states suffice
    B = _states(letters, 3 * m + 2)
    cols = [Bk.columns() for Bk in B]

    layers = []
    for k in range(m):
        p, q = cols[k + 1]
        ctx = letters[k] + letters[(k + 1) % m]
        layers.append(Layer(k, ctx[0] != ctx[1], ctx, tets, p, q))

    classes = []
    for k in range(m):
        p, q = cols[k + 1]
        s = slope((p[0] + q[0], p[1] + q[1]))
        slots = [(k, "z")]
        j = k + 1
        while True:
            pj, qj = cols[j + 1]
            if slope((qj[0] - pj[0], qj[1] - pj[1])) == s:
                slots.append((j % m, "z"))
                break
            lab = _label(s, pj, qj)
            assert lab is not None, "edge vanished without being erased"
            slots += [(j % m, lab)] * 2
            j += 1
        sub = "".join(letters[i % m] for i in range(k + 1, j + 1))
        for c in range(tets):
            classes.append(
                EdgeClass(len(classes), tuple(sorted(slots)), s, copy=c, subword=sub, born=k, dies=j)
            )

    return LayeredTriangulation(
        kind=f"{kind}-bundle",
        word=w,
        layers=tuple(layers),
        edge_classes=tuple(classes),
        monodromy=B[m],
    )


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def peripheral_slopes(w: BridgeWord) -> tuple[Vec, Vec]:
    """Slopes pinched by the bottom and top clasps."""
    c = w.c
    B = _states(w.letters, c)
    p, q = B[c - 1].columns()  # Farey edge of the last layer
    top = q if w.letter(c) == "R" else p
    return (1, 1), slope(top)


def build_bridge_triangulation(w: BridgeWord) -> LayeredTriangulation:
    c = w.c
    B = _states(w.letters, c)
    layers = []
    per_slope: dict[Vec, list] = {}
    born: dict[Vec, int] = {}
    dies: dict[Vec, int] = {}
    for k in range(1, c):
        p, q = B[k].columns()
        ctx = w.letter(k) + w.letter(k + 1)
        L = Layer(k, ctx[0] != ctx[1], ctx, 2, p, q)
        layers.append(L)
        per_slope.setdefault(slope(L.erased), []).append((k, "z"))
        per_slope.setdefault(slope(L.added), []).append((k, "z"))
        per_slope.setdefault(slope(p), []).extend([(k, "x")] * 2)
        per_slope.setdefault(slope(q), []).extend([(k, "y")] * 2)
        born[slope(L.added)] = k
        dies[slope(L.erased)] = k

    bottom_periph, top_periph = peripheral_slopes(w)
    first, last = layers[0], layers[-1]
    bottom = {slope(first.p), slope(first.q), slope(first.erased)} - {bottom_periph}
    top = {slope(last.p), slope(last.q), slope(last.added)} - {top_periph}
    assert len(bottom) == 2 and len(top) == 2

    uf = _UnionFind()
    for s in per_slope:
        uf.find(s)
    for group in (bottom, top):
        a, b = sorted(group)
        uf.union(a, b)
    core_roots = {uf.find(s) for s in bottom | top}

    comps: dict[Vec, list[Vec]] = {}
    for s in sorted(per_slope):
        comps.setdefault(uf.find(s), []).append(s)

    classes = []
    for root in sorted(comps):
        members = comps[root]
        slots = [sl for s in members for sl in per_slope[s]]
        if root in core_roots:
            classes.append(
                EdgeClass(len(classes), tuple(sorted(slots * 2)), root, is_clasp_core=True)
            )
        else:
            b, d = born.get(root), dies.get(root)
            sub = w.letters[b:d] if b is not None and d is not None else None
            for cp in range(2):
                classes.append(EdgeClass(
                    len(classes), tuple(sorted(slots)), root, copy=cp, subword=sub, born=b, dies=d,
                ))

    return LayeredTriangulation(
        kind="two-bridge",
        word=w,
        layers=tuple(layers),
        edge_classes=tuple(classes),
        meta={"peripheral": (bottom_periph, top_periph)},
    )
