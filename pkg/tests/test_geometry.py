import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from canontri.angles import angles_from_w, initial_structure
from canontri.errors import DegenerateError
from canontri.geometry import (
    develop_cusp,
    fan_diagnostics,
    geodesic_complex_lengths,
    holonomy_residuals,
    triangle_shape,
)

from conftest import bridge_word, bundle_word, random_interior_point, solved, triangulate

PI = np.pi


def _max_residual(tri, s):
    dev = develop_cusp(tri, s)
    return max(r for _, r in holonomy_residuals(dev)), dev


# -- triangle shapes ----------------------------------------------------------

def test_equilateral_shape():
    assert triangle_shape(PI / 3, PI / 3, PI / 3) == pytest.approx(np.exp(1j * PI / 3))


def test_right_isoceles_shape():
    assert triangle_shape(PI / 2, PI / 4, PI / 4) == pytest.approx(1j)


@given(st.floats(0.05, 3.0), st.floats(0.05, 0.95))
def test_law_of_sines(x, frac):
    y = (PI - x) * frac
    z = PI - x - y
    if z <= 1e-3:
        return
    s = triangle_shape(x, y, z)
    assert abs(s) == pytest.approx(np.sin(y) / np.sin(z), rel=1e-12)
    assert np.angle(s) == pytest.approx(x, abs=1e-12)
    # angle at 1 is y
    assert np.angle((0 - 1) / (s - 1)) == pytest.approx(y, abs=1e-12)


def test_degenerate_shape():
    with pytest.raises(DegenerateError):
        triangle_shape(0.0, 1.0, PI - 1.0)


# -- development -----------------------------------------------------------------

def test_rl_development_is_equilateral():
    tri, s, _ = solved("torus", "RL")
    res, dev = _max_residual(tri, s)
    assert res < 1e-12
    for T in dev.graph.triangles:
        a, b, c = dev.triangle(T.id)
        sides = [abs(b - a), abs(c - b), abs(a - c)]
        assert max(sides) - min(sides) < 1e-12 * max(sides)


@pytest.mark.parametrize(
    "kind,word",
    [("torus", "RRLL"), ("torus", "R3L2RL4"), ("sphere", "RRLL"), ("bridge", "RL"), ("bridge", "R3L2R"), ("bridge", "RRRLLRRL")],
)
def test_complete_at_maximizer(kind, word):
    tri, s, _ = solved(kind, word)
    res, dev = _max_residual(tri, s)
    assert res < 1e-8
    assert all(v < 1e-8 for v in dev.period_residuals.values())
    assert {"horizontal", "vertical"} <= set(dev.periods)
    assert np.all(dev.signed_areas() > 0)


def test_random_maximizers_complete():
    rng = random.Random(21)
    for _ in range(20):
        kind = rng.choice(["torus", "sphere", "bridge"])
        word = bridge_word(rng) if kind == "bridge" else bundle_word(rng)
        tri, s, _ = solved(kind, word)
        res, _ = _max_residual(tri, s)
        assert res < 1e-8, (kind, word, res)


def test_initial_structure_incomplete():
    tri = triangulate("torus", "RRLL")
    res, _ = _max_residual(tri, initial_structure(tri))
    assert res > 1e-3


def test_interior_points_positive_and_incomplete():
    np_rng = np.random.default_rng(22)
    rng = random.Random(22)
    for _ in range(20):
        kind = rng.choice(["torus", "sphere", "bridge"])
        word = bridge_word(rng, 4, 4) if kind == "bridge" else bundle_word(rng, 3, 4)
        tri = triangulate(kind, word)
        s = angles_from_w(tri, random_interior_point(tri, np_rng))
        res, dev = _max_residual(tri, s)
        assert np.all(dev.signed_areas() > 0)
        assert res > 1e-4


def test_rl_periods_cover_four_rows():
    # the lattice is spanned by a unit edge and a vector four triangle rows high
    tri, s, _ = solved("torus", "RL")
    dev = develop_cusp(tri, s)
    h, v = dev.periods["horizontal"], dev.periods["vertical"]
    edge = abs(dev.triangle(0)[1] - dev.triangle(0)[0])
    assert abs(h) == pytest.approx(edge, rel=1e-12)
    assert abs((v / h).imag) == pytest.approx(4 * np.sqrt(3) / 2, rel=1e-12)
    covolume = abs((h.conjugate() * v).imag)
    assert covolume == pytest.approx(len(dev.components[0]) * np.sqrt(3) / 4 * edge**2, rel=1e-12)


# -- fans ----------------------------------------------------------------------

def test_rl_fans_symmetric():
    tri, s, _ = solved("torus", "RL")
    fans = fan_diagnostics(tri, s)
    assert len(fans) == 4
    for f in fans:
        assert f.Q == pytest.approx(f.P) and f.P == pytest.approx(f.T)
        assert f.margin == pytest.approx(-f.Q)


@pytest.mark.parametrize("kind,word", [("torus", "R4L4"), ("torus", "RRLL"), ("bridge", "R3L2R")])
def test_fan_margins_negative_examples(kind, word):
    tri, s, _ = solved(kind, word)
    fans = fan_diagnostics(tri, s)
    assert fans
    assert all(f.margin < -1e-10 * f.scale for f in fans)


def test_terminal_fan_present_for_bridges():
    tri, s, _ = solved("bridge", "R3L2R")
    fans = fan_diagnostics(tri, s)
    assert any(f.terminal for f in fans)


def test_pt_sine_dual_route():
    # P/T from the hinge triangle vs the sine product from the neighbouring layers
    rng = random.Random(23)
    checked = 0
    for _ in range(25):
        kind = rng.choice(["torus", "bridge"])
        word = bridge_word(rng) if kind == "bridge" else bundle_word(rng)
        tri, s, _ = solved(kind, word)
        for f in fan_diagnostics(tri, s):
            if f.pt_sine is not None:
                assert f.pt_sine == pytest.approx(f.P / f.T, rel=1e-9)
                checked += 1
    assert checked > 20


def test_pt_sine_differs_off_maximizer():
    tri = triangulate("torus", "R3L3")
    s = initial_structure(tri)
    fans = [f for f in fan_diagnostics(tri, s) if f.pt_sine is not None]
    assert max(abs(f.pt_sine - f.P / f.T) for f in fans) > 1e-4


# -- geodesics -------------------------------------------------------------------

def test_geodesic_lengths_loxodromic():
    rng = random.Random(24)
    for _ in range(15):
        kind = rng.choice(["torus", "bridge"])
        word = bridge_word(rng) if kind == "bridge" else bundle_word(rng)
        tri, s, _ = solved(kind, word)
        for g in geodesic_complex_lengths(tri, s):
            assert g.length.real > 0
            assert g.orbit_residual < 1e-8


def test_sphere_lengths_match_torus():
    for word in ["RRLL", "R3L2RL"]:
        t = sorted((g.syllable, g.length.real, abs(g.length.imag)) for g in geodesic_complex_lengths(*solved("torus", word)[:2]))
        s = sorted((g.syllable, g.length.real, abs(g.length.imag)) for g in geodesic_complex_lengths(*solved("sphere", word)[:2]))
        assert [a[0] for a in t] == [a[0] for a in s]
        assert np.allclose([a[1:] for a in t], [a[1:] for a in s], atol=1e-9)


def test_symmetric_word_has_matching_lengths():
    tri, s, _ = solved("torus", "R6L6")
    lengths = {g.syllable[0]: g.length for g in geodesic_complex_lengths(tri, s)}
    assert lengths["R"].real == pytest.approx(lengths["L"].real, rel=1e-9)
    assert abs(lengths["R"].imag) == pytest.approx(abs(lengths["L"].imag), rel=1e-9)


def test_short_geodesics_shrink_like_two_pi_over_n():
    errs = []
    for N in (10, 20, 40):
        tri, s, _ = solved("torus", f"R{N}L{N}")
        g = next(g for g in geodesic_complex_lengths(tri, s) if g.syllable[0] == "R")
        errs.append(abs(abs(g.length) * N / (2 * PI) - 1))
    assert errs[0] < 0.05
    assert errs[1] < errs[0] / 3 and errs[2] < errs[1] / 3
