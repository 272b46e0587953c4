import functools
import random

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from canontri.farey import parse_bridge_word, parse_bundle_word
from canontri.triangulation import build_bridge_triangulation, build_bundle_triangulation
from canontri.volume import maximize_volume

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def bundle_word(rng: random.Random, max_pairs: int = 6, max_exp: int = 10) -> str:
    n = rng.randint(1, max_pairs)
    return "".join(
        letter * rng.randint(1, max_exp) for _ in range(n) for letter in "RL"
    )


def bridge_word(rng: random.Random, max_tw: int = 6, max_exp: int = 10) -> str:
    tw = rng.randint(2, max_tw)
    first = rng.choice("RL")
    other = "L" if first == "R" else "R"
    return "".join((first if i % 2 == 0 else other) * rng.randint(1, max_exp) for i in range(tw))


@st.composite
def bundle_words(draw, max_pairs=4, max_exp=6):
    n = draw(st.integers(1, max_pairs))
    exps = draw(st.lists(st.integers(1, max_exp), min_size=2 * n, max_size=2 * n))
    return "".join(("R" if i % 2 == 0 else "L") * e for i, e in enumerate(exps))


@st.composite
def bridge_words(draw, max_tw=5, max_exp=5):
    tw = draw(st.integers(2, max_tw))
    first = draw(st.sampled_from("RL"))
    other = "L" if first == "R" else "R"
    exps = draw(st.lists(st.integers(1, max_exp), min_size=tw, max_size=tw))
    return "".join((first if i % 2 == 0 else other) * e for i, e in enumerate(exps))


def triangulate(kind: str, word: str):
    if kind == "bridge":
        return build_bridge_triangulation(parse_bridge_word(word))
    return build_bundle_triangulation(parse_bundle_word(word), kind)


@functools.lru_cache(maxsize=None)
def solved(kind: str, word: str):
    tri = triangulate(kind, word)
    s, rep = maximize_volume(tri)
    return tri, s, rep


@pytest.fixture
def rng():
    return random.Random(12345)


def random_interior_point(tri, rng: np.random.Generator):
    """A random interior point between the initial structure and a random nearby point."""
    from canontri.angles import angle_map, angles_from_w, initial_structure

    w0 = initial_structure(tri).w
    amap = angle_map(tri)
    free = w0[amap.free]
    d = rng.normal(size=free.shape)
    t = 0.3
    while True:
        cand = amap.full_w(free + t * d)
        s = angles_from_w(tri, cand)
        if s.interior and np.all(s.angles > 1e-3):
            return cand
        t /= 2


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
