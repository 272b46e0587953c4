"""RL-words and SL(2,Z) monodromies.

A cyclic word over {R, L} names the product of the transvections
R = [[1,1],[0,1]] and L = [[1,0],[1,1]].  ``matrix_to_word`` goes the other
way: it conjugates a hyperbolic matrix until the axis of its Moebius action
crosses the Farey edge (0, oo) in the positive direction, at which point all
entries are nonnegative and the matrix factors uniquely into R's and L's.
Everything here is exact integer arithmetic.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    NotAnosovError,
    ParseError,
    TooFewSyllablesError,
    WordEmptyError,
    WordNotMixedError,
)

__all__ = [
    "IntMatrix2",
    "MonodromyWord",
    "BridgeWord",
    "R",
    "L",
    "parse_bundle_word",
    "parse_bridge_word",
    "parse_matrix",
    "matrix_to_word",
    "word_to_matrix",
    "canonical_rotation",
]


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntMatrix2":
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def apply(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def columns(self):
        return (self.a, self.c), (self.b, self.d)

    def tolist(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self):
        return f"{self.a},{self.b},{self.c},{self.d}"


IDENTITY = IntMatrix2(1, 0, 0, 1)
R = IntMatrix2(1, 1, 0, 1)
L = IntMatrix2(1, 0, 1, 1)
_S = IntMatrix2(0, 1, -1, 0)
_ZSHIFT = L  # conjugating by L**k moves fixed points z -> z - k
_USHIFT = R  # conjugating by R**k moves u = 1/z -> u - k
LETTER_MATRIX = {"R": R, "L": L}


def _syllables(letters: str) -> tuple[tuple[str, int], ...]:
    out: list[list] = []
    for ch in letters:
        if out and out[-1][0] == ch:
            out[-1][1] += 1
        else:
            out.append([ch, 1])
    return tuple((ch, n) for ch, n in out)


@dataclass(frozen=True)
class MonodromyWord:
    """Cyclic word; ``letters`` is one rotation, read left to right."""

    letters: str

    @property
    def m(self) -> int:
        return len(self.letters)

    @property
    def syllables(self) -> tuple[tuple[str, int], ...]:
        # merge across the cyclic seam so that syllables alternate cyclically
        s = self.letters
        if s[0] == s[-1]:
            k = len(s) - len(s.rstrip(s[0]))
            s = s[-k:] + s[:-k]
        return _syllables(s)

    @property
    def n(self) -> int:
        """Number of R-syllables (equal to the number of L-syllables)."""
        return sum(1 for ch, _ in self.syllables if ch == "R")

    def letter(self, i: int) -> str:
        return self.letters[i % self.m]

    def __str__(self):
        return self.letters


@dataclass(frozen=True)
class BridgeWord:
    letters: str

    @property
    def syllables(self) -> tuple[tuple[str, int], ...]:
        return _syllables(self.letters)

    @property
    def c(self) -> int:
        return len(self.letters)

    @property
    def tw(self) -> int:
        return len(self.syllables)

    @property
    def first_letter(self) -> str:
        return self.letters[0]

    def letter(self, i: int) -> str:
        """Letter ``i`` in the 1-based convention Omega_1 ... Omega_c."""
        return self.letters[i - 1]

    def __str__(self):
        return self.letters


_TOKEN = re.compile(r"([RL])(\d*)")


def _expand(text: str) -> str:
    s = "".join(text.split()).upper()
    if not s:
        raise WordEmptyError("empty word")
    pos = 0
    parts = []
    for mt in _TOKEN.finditer(s):
        if mt.start() != pos:
            break
        count = int(mt.group(2)) if mt.group(2) else 1
        if count <= 0:
            raise ParseError(f"nonpositive run length in {text!r}")
        parts.append(mt.group(1) * count)
        pos = mt.end()
    if pos != len(s):
        raise ParseError(f"cannot parse word {text!r} at position {pos}")
    return "".join(parts)


def parse_bundle_word(text: str) -> MonodromyWord:
    letters = _expand(text)
    if "R" not in letters or "L" not in letters:
        raise WordNotMixedError(f"word {text!r} does not contain both R and L")
    return MonodromyWord(letters)


def parse_bridge_word(text: str) -> BridgeWord:
    letters = _expand(text)
    w = BridgeWord(letters)
    if w.tw < 2:
        raise TooFewSyllablesError(f"bridge word {text!r} has fewer than two syllables")
    return w


def parse_matrix(text: str) -> IntMatrix2:
    try:
        a, b, c, d = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise ParseError(f"matrix must be 'a,b,c,d', got {text!r}") from exc
    try:
        return IntMatrix2(a, b, c, d)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def product(letters: Iterable[str]) -> IntMatrix2:
    M = IDENTITY
    for ch in letters:
        M = M @ LETTER_MATRIX[ch]
    return M


def word_to_matrix(w: MonodromyWord) -> IntMatrix2:
    return product(w.letters)


def canonical_rotation(letters: str) -> str:
    """Least rotation with R < L; it starts with the longest R-run."""
    key = letters.translate(str.maketrans("RL", "01"))
    best = min(range(len(key)), key=lambda i: key[i:] + key[:i])
    return letters[best:] + letters[:best]


# --- exact arithmetic on x = (P + t*sqrt(D)) / Q, D a nonsquare, t != 0 ---

def _floor_qi(P: int, t: int, Q: int, D: int) -> int:
    r = math.isqrt(t * t * D)
    y = P + r if t > 0 else P - r - 1  # floor of the numerator
    if Q > 0:
        return y // Q
    return (-y - 1) // (-Q)


def _sign_qi(P: int, t: int, Q: int, D: int) -> int:
    # sign of (P + t*sqrt(D))/Q; never zero since D is not a square
    if (P >= 0 and t > 0) or (P <= 0 and t < 0):
        num = 1 if t > 0 else -1
    else:
        num = 1 if P * P > t * t * D else -1
        if P < 0:
            num = -num
    return num if Q > 0 else -num


def _reciprocal(x, D):
    P, t, Q = x
    return (Q * P, -t * Q, P * P - t * t * D)


def _fixed_points(M: IntMatrix2):
    """Repelling and attracting fixed points of z -> (dz+c)/(bz+a)."""
    D = M.trace**2 - 4
    return (M.d - M.a, -1, 2 * M.b), (M.d - M.a, 1, 2 * M.b), D


def _conj(M: IntMatrix2, X: IntMatrix2) -> IntMatrix2:
    return X.inverse() @ M @ X


def _shift(M: IntMatrix2, gen: IntMatrix2, k: int) -> IntMatrix2:
    """Conjugate so that the fixed points move by -k under gen's action."""
    X = _power(gen, k) if k >= 0 else _power(gen.inverse(), -k)
    return _conj(M, X)


def _nonnegative_conjugate(M: IntMatrix2) -> IntMatrix2:
    """Conjugate M (trace > 2) to a matrix with nonnegative entries."""
    for _ in range(100_000):
        rep, att, D = _fixed_points(M)
        s_att, s_rep = _sign_qi(*att, D), _sign_qi(*rep, D)
        if s_att > 0 > s_rep:
            return M
        if s_att < 0 < s_rep:
            M = _conj(M, _S)  # swaps 0 and oo, reversing the crossing
            continue
        fa, fr = _floor_qi(*att, D), _floor_qi(*rep, D)
        if fa != fr:
            M = _shift(M, _ZSHIFT, max(fa, fr))
            continue
        if fa != 0:
            M = _shift(M, _ZSHIFT, fa)
            continue
        # both endpoints in (0, 1): in u = 1/z the maps fixing 0 are shifts
        ua = _floor_qi(*_reciprocal(att, D), D)
        ur = _floor_qi(*_reciprocal(rep, D), D)
        M = _shift(M, _USHIFT, max(ua, ur))
    raise RuntimeError("conjugacy reduction did not terminate")


def _power(X: IntMatrix2, k: int) -> IntMatrix2:
    out = IDENTITY
    for _ in range(k):
        out = out @ X
    return out


def _factor_nonnegative(M: IntMatrix2) -> str:
    letters = []
    while M != IDENTITY:
        if M.a >= M.c and M.b >= M.d:
            letters.append("R")
            M = R.inverse() @ M
        elif M.c >= M.a and M.d >= M.b:
            letters.append("L")
            M = L.inverse() @ M
        else:  # pragma: no cover - impossible for nonnegative SL2(Z)
            raise RuntimeError(f"cannot factor {M}")
        if min(M.a, M.b, M.c, M.d) < 0:  # pragma: no cover
            raise RuntimeError("factorization left the nonnegative cone")
    return "".join(letters)


def matrix_to_word(M: IntMatrix2) -> MonodromyWord:
    """Cyclic RL-word of a positive-trace Anosov matrix, canonical rotation.

    Raises NotAnosovError when |trace| <= 2 or trace < -2 (negate first).
    """
    if abs(M.trace) <= 2:
        raise NotAnosovError(f"|trace| = {abs(M.trace)} <= 2 for {M}")
    if M.trace < 0:
        raise NotAnosovError("negative trace; negate the matrix first")
    letters = _factor_nonnegative(_nonnegative_conjugate(M))
    return MonodromyWord(canonical_rotation(letters))


def normalize_sign(M: IntMatrix2) -> tuple[IntMatrix2, int]:
    """Return (+-M with positive trace, sign used)."""
    if M.trace < -2:
        return -M, -1
    return M, 1
