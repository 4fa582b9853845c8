from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dyadic_sobolev.dyadic import (
    DyadicInterval,
    DyadicPoint,
    ancestor,
    cell_at,
    classify,
    delta,
    dilate,
    min_common_interval,
)
from dyadic_sobolev.errors import EqualPoints

P = DyadicPoint.parse
I = DyadicInterval

points = st.builds(DyadicPoint.of, st.integers(0, 2**40), st.integers(0, 30))


def test_parse_and_canonical_form():
    assert P("3/2^3") == DyadicPoint(3, 3)
    assert P("6/2^4") == DyadicPoint(3, 3)
    assert P("3/8") == DyadicPoint(3, 3)
    assert P("4") == DyadicPoint(4, 0)
    assert str(P("12/16")) == "3/2^2"
    assert DyadicPoint.of(0, 7) == DyadicPoint(0, 0)
    with pytest.raises(ValueError):
        DyadicPoint(2, 1)
    with pytest.raises(ValueError):
        P("1/3")
    with pytest.raises(ValueError):
        P("-1/2")


@pytest.mark.parametrize("x, j, expected", [
    ("0", 3, I(3, 0)),
    ("3/8", 1, I(1, 0)),
    ("3/8", 3, I(3, 3)),
    ("7", -2, I(-2, 1)),
])
def test_cell_at(x, j, expected):
    assert cell_at(P(x), j) == expected
    assert expected.contains(P(x))


def test_ancestor_examples():
    assert ancestor(I(2, 3), 1) == I(1, 1)
    assert ancestor(I(2, 3), 2) == I(0, 0)
    assert ancestor(I(3, 5), 1) == I(2, 2)
    with pytest.raises(ValueError):
        ancestor(I(0, 0), 0)


def test_dilate_examples():
    assert dilate(I(2, 3), 1) == I(1, 3)
    assert dilate(I(2, 3), 1).left.value == Fraction(3, 2)
    assert dilate(I(5, 0), 1) == ancestor(I(5, 0), 1)
    assert dilate(I(1, 1), -1) == I(2, 1)


@pytest.mark.parametrize("x, y, expected", [
    ("1/8", "3/8", I(1, 0)),
    ("3/2", "3/4", I(-1, 0)),
    ("5/8", "7/8", I(1, 1)),
])
def test_min_common_interval(x, y, expected):
    assert min_common_interval(P(x), P(y)) == expected


def test_min_common_interval_equal_points():
    with pytest.raises(EqualPoints):
        min_common_interval(P("1/4"), P("2/8"))


def test_delta_examples():
    assert delta(P("1/8"), P("3/8")) == Fraction(1, 2)
    assert delta(P("3/2"), P("3/4")) == 2
    assert delta(P("5/16"), P("5/16")) == 0


def test_classify_examples():
    c = classify(P("5/8"), P("7/8"))
    assert (c.class_index, c.level_index) == (1, 1)
    c = classify(P("1/8"), P("3/8"))
    assert (c.class_index, c.level_index) == (0, 1)
    with pytest.raises(EqualPoints):
        classify(P("1"), P("1"))


@given(points, points)
def test_min_common_interval_is_minimal(x, y):
    if x == y:
        return
    top = min_common_interval(x, y)
    assert top.contains(x) and top.contains(y)
    lo, hi = top.children()
    assert lo.contains(x) != lo.contains(y)
    assert hi.contains(x) != hi.contains(y)


@given(points, points, points)
def test_ultrametric(x, y, z):
    assert delta(x, y) == delta(y, x)
    assert (delta(x, y) > 0) == (x != y)
    assert delta(x, z) <= max(delta(x, y), delta(y, z))


@given(points, points, st.integers(-5, 5))
def test_scale_equivariance(x, y, l):
    if x == y:
        return
    assert delta(x.scaled(l), y.scaled(l)) == Fraction(2) ** l * delta(x, y)
    a, b = classify(x, y), classify(x.scaled(l), y.scaled(l))
    assert b.class_index == a.class_index
    assert b.level_index == a.level_index - l


@given(st.integers(-20, 20), st.integers(0, 10**6))
def test_dilation_is_ancestry_only_at_origin(j, k):
    assert (dilate(I(j, k), 1) == ancestor(I(j, k), 1)) == (k == 0)
    assert dilate(dilate(I(j, k), 3), -3) == I(j, k)


@given(points, points)
def test_delta_matches_level_of_common_interval(x, y):
    if x == y:
        return
    c = classify(x, y)
    assert delta(x, y) == Fraction(2) ** (-c.level_index)


def test_interval_json_round_trip():
    iv = I(-3, 17)
    assert iv.to_json() == {"j": -3, "k": 17}
    assert I.from_json(iv.to_json()) == iv
    assert iv.measure == 8
