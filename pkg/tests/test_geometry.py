import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torsionlab.geometry import (
    Region,
    RegionSyntaxError,
    area,
    chapman_pair,
    parse_region,
    rectangle,
    scale,
    square,
    triangle,
    union,
)


def test_area_examples():
    assert area(square(1)) == 1
    assert area(triangle(2)) == 2
    c2 = union(rectangle(2, 1), triangle("sqrt2"))
    assert area(c2) == 3


def test_scale_examples():
    assert scale(square(1), 2)[0] == square(2)
    t = scale(triangle(1), "sqrt2")[0]
    assert t == triangle("sqrt2")
    c1, _ = chapman_pair()
    assert area(scale(c1, 3)) == 9 * area(c1)


def test_scale_by_float_sqrt_matches_dimensions():
    t = scale(triangle(1), math.sqrt(2))[0]
    assert t.length == pytest.approx(math.sqrt(2), rel=1e-15)
    # a non-integer float factor is not exact
    assert t.length_sq is None


@pytest.mark.parametrize("s", [0, -1.0, "-2"])
def test_scale_rejects_nonpositive(s):
    with pytest.raises(ValueError):
        scale(square(1), s)


def test_chapman_pair():
    c1, c2 = chapman_pair()
    assert area(c1) == 3
    assert area(c1) == area(c2)
    assert (len(c1), len(c2)) == (2, 2)
    assert c1.literal() == "square:1+tri:2"
    assert c2.literal() == "rect:2x1+tri:sqrt2"


shapes = st.one_of(
    st.builds(rectangle, st.integers(1, 9), st.integers(1, 9)),
    st.builds(triangle, st.integers(1, 9)),
    st.builds(lambda n: triangle(f"sqrt{n}"), st.integers(1, 50)),
)


@given(st.lists(shapes, min_size=1, max_size=4), st.floats(0.1, 10))
def test_area_scales_quadratically(comps, s):
    r = Region(tuple(comps))
    assert area(scale(r, s)) == pytest.approx(s * s * area(r), rel=1e-12)


@given(st.lists(shapes, min_size=1, max_size=4))
def test_area_additive(comps):
    r = Region(tuple(comps))
    assert area(r) == math.fsum(area(c) for c in comps)


@pytest.mark.parametrize(
    "text, literal",
    [
        ("square:1", "square:1"),
        ("rect:2x1", "rect:2x1"),
        ("tri:2", "tri:2"),
        ("tri:sqrt2", "tri:sqrt2"),
        ("rect:2x1+tri:sqrt2", "rect:2x1+tri:sqrt2"),
        ("rect:3/2x1", "rect:3/2x1"),
    ],
)
def test_literal_roundtrip(text, literal):
    r = parse_region(text)
    assert r.literal() == literal
    assert parse_region(r.literal()) == r


def test_exact_squares():
    t = parse_region("tri:sqrt2")[0]
    assert t.length_sq == 2
    assert t.length == math.sqrt(2)
    r = parse_region("rect:3/2x1")[0]
    assert r.length_sq == Fraction(9, 4)


@pytest.mark.parametrize("bad", ["circle:1", "rect:2", "tri:", "square:-1", "tri:abc", "rect:1x0", ""])
def test_malformed_literals(bad):
    with pytest.raises(RegionSyntaxError) as exc:
        parse_region(bad)
    if bad:
        assert bad.split("+")[0] in str(exc.value)


def test_malformed_token_named_in_union():
    with pytest.raises(RegionSyntaxError) as exc:
        parse_region("square:1+hex:2")
    assert exc.value.token == "hex:2"
