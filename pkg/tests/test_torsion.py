import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionlab.geometry import area, chapman_pair, rectangle, scale, square, triangle
from torsionlab.oracle import torsion_oracle
from torsionlab.spectrum import first_eigenvalue
from torsionlab.torsion import (
    rayleigh_lower_bound,
    torsion_rect_closed,
    torsion_region_closed,
    torsion_spectral,
    torsion_tri_closed_paper,
)

PI = math.pi

# frozen from oracles.rect_torsion_double_series (odd j, k <= 4001) with its tail bound
RECT_11 = (0.035144253738361386, 4.2742860900555044e-13)
RECT_21 = (0.11434083855765033, 2.1371430450277522e-12)
# frozen from the multigrid finite-difference oracle at tol 1e-5
TRI_1_ORACLE = 0.006522391355821073


@pytest.mark.parametrize("L, H, ref", [(1, 1, RECT_11), (2, 1, RECT_21), (1, 2, RECT_21)])
def test_rect_closed_against_double_series(L, H, ref):
    value, tail = ref
    got = torsion_rect_closed(L, H)
    # the truncated double series has positive terms, so it is a lower bound
    assert 0 <= got.value - value <= tail + 1e-15
    assert got.tail_bound < 1e-15


def test_rect_closed_examples():
    assert torsion_rect_closed(1, 1).value == pytest.approx(0.0351443, abs=1e-7)
    assert torsion_rect_closed(2, 1).value == pytest.approx(0.1143408, abs=1e-7)
    assert torsion_rect_closed(2, 2).value == pytest.approx(16 * torsion_rect_closed(1, 1).value, rel=1e-12)
    assert torsion_rect_closed(1, 1).method == "rect_closed"


@pytest.mark.parametrize("dims", [(0, 1), (1, -2), (math.nan, 1)])
def test_rect_closed_rejects(dims):
    with pytest.raises(ValueError):
        torsion_rect_closed(*dims)


def test_rect_symmetry_random_aspect():
    rng = np.random.default_rng(11)
    for r in np.exp(rng.uniform(math.log(1 / 20), math.log(20), 100)):
        a, b = torsion_rect_closed(r, 1.0).value, torsion_rect_closed(1.0, r).value
        assert abs(a - b) <= 1e-12 * a


def test_tri_closed_paper_examples():
    t1 = torsion_tri_closed_paper(1).value
    assert t1 == pytest.approx(0.000967, abs=5e-7)
    assert torsion_tri_closed_paper(2).value == pytest.approx(16 * t1, rel=1e-12)
    assert torsion_tri_closed_paper(math.sqrt(2)).value == pytest.approx(4 * t1, rel=1e-12)
    with pytest.raises(ValueError):
        torsion_tri_closed_paper(0)


def test_tri_closed_paper_is_printed_formula():
    # the printed expression rebuilt from its constants
    from oracles import hyper_mp

    Z_t = PI**6 / 960
    tau = Z_t - (PI / 2) / 64 * hyper_mp("tanh", "all", PI) - (PI / 4) * hyper_mp("coth", "odd", PI / 2)
    assert torsion_tri_closed_paper(1).value == pytest.approx(0.5 * 16 / PI**6 * tau, rel=1e-12)


def test_tri_closed_paper_matches_printed_coefficient_sum():
    # the printed closed form is the limit of the spectral sum with printed coefficients
    printed = torsion_tri_closed_paper(1).value
    partial = torsion_spectral("tri:1", 2000, "paper").value
    assert partial < printed
    assert abs(printed - partial) < 1e-4 * printed


def test_spectral_examples():
    for src in ("paper", "exact"):
        assert torsion_spectral(square(1), 2, src).value == pytest.approx(32 / PI**6, rel=1e-15)
        big = torsion_spectral(square(1), 10**4, src).value
        closed = torsion_rect_closed(1, 1).value
        assert big < closed and closed - big < 1e-5
    tri = torsion_spectral(triangle(1), 200, "exact").value
    assert tri == pytest.approx(0.0065149, abs=1e-7)
    assert tri < TRI_1_ORACLE


def test_spectral_json():
    r = torsion_spectral("square:1", Fraction(7, 2))
    data = json.loads(json.dumps(r.to_json()))
    assert data["method"] == "spectral"
    assert data["cutoff"] == "7/2"
    assert set(data) == {"value", "method", "tail", "cutoff"}
    assert not r.certified


def test_spectral_rejects():
    with pytest.raises(ValueError):
        torsion_spectral("square:1", 0)
    with pytest.raises(ValueError):
        torsion_spectral("square:1", 10, "printed")


@pytest.mark.parametrize("region", ["square:1", "rect:2x1", "tri:1", "square:1+tri:2", "rect:2x1+tri:sqrt2"])
@pytest.mark.parametrize("src", ["paper", "exact"])
def test_spectral_monotone_in_cutoff(region, src):
    vals = [torsion_spectral(region, c, src).value for c in (5, 20, 100, 400, 1500)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("L, H", [(1, 1), (2, 1), (3, "1/2")])
def test_spectral_below_rect_closed(L, H):
    closed = torsion_rect_closed(L, Fraction(H)).value
    for c in (10, 100, 1000):
        assert torsion_spectral(rectangle(L, H), c).value < closed


def test_region_closed_examples():
    c1, _ = chapman_pair()
    expected = torsion_rect_closed(1, 1).value + torsion_tri_closed_paper(2).value
    got = torsion_region_closed(c1)
    assert got.value == pytest.approx(expected, rel=1e-15)
    assert [p.method for p in got.parts] == ["rect_closed", "tri_closed_paper"]
    assert torsion_region_closed(square(1)).value == torsion_rect_closed(1, 1).value
    assert torsion_region_closed(scale(c1, 2)).value == pytest.approx(16 * got.value, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.1, 5), st.floats(0.1, 5))
def test_s4_scaling(s, L, H):
    for shape in (rectangle(L, H), triangle(L)):
        base = torsion_region_closed(shape).value
        assert torsion_region_closed(scale(shape, s)).value == pytest.approx(s**4 * base, rel=1e-12)


@pytest.mark.parametrize(
    "shape", [square(1), rectangle(2, 1), rectangle(5, "1/3"), triangle(1), triangle(2), triangle("sqrt2")], ids=str
)
def test_polya_szego(shape):
    lam1 = first_eigenvalue(shape)
    T = torsion_rect_closed(shape.length, shape.height).value if shape.is_rect else torsion_spectral(shape, 2000).value
    assert T * lam1 <= area(shape)
    if not shape.is_rect:
        assert torsion_tri_closed_paper(shape.length).value * lam1 <= area(shape)


def test_rayleigh_bound_exact():
    assert rayleigh_lower_bound() == Fraction(1, 160)
    # x y (1 - x - y): integral 1/120, Dirichlet energy 1/90
    assert Fraction(1, 120) ** 2 / Fraction(1, 90) == Fraction(1, 160)


def test_rayleigh_bound_other_trial_is_still_below():
    # x y (1 - x - y)(1 + x + y) is admissible too
    trial = {(1, 1): 1, (3, 1): -1, (1, 3): -1, (2, 2): -2}
    assert rayleigh_lower_bound(trial) < Fraction(TRI_1_ORACLE).limit_denominator(10**9)


def test_triangle_domain_monotonicity():
    sq = torsion_rect_closed(1, 1).value
    assert torsion_spectral("tri:1", 2000).value < sq
    assert TRI_1_ORACLE < sq


def test_triangle_oracle_and_exact_spectral_agree():
    o = torsion_oracle(triangle(1), 1e-5)
    assert o.value == pytest.approx(TRI_1_ORACLE, abs=1e-10)
    s = torsion_spectral("tri:1", 2000, "exact").value
    assert abs(o.value - s) < 1e-3 * o.value
    assert o.value > 1 / 160 and s > 1 / 160
