from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyadic_sobolev.dyadic import DyadicInterval, DyadicPoint, delta
from dyadic_sobolev.multipliers import (
    Multiplier,
    canonical_partial,
    check_cz_hypotheses,
    kernel_component,
    kernel_vector,
    omega_eval,
)
from dyadic_sobolev.oracles import homogeneous_value, series_omega

P = DyadicPoint.parse
I = DyadicInterval

points = st.builds(DyadicPoint.of, st.integers(0, 2**20), st.integers(0, 14))
multipliers = st.builds(
    Multiplier,
    st.dictionaries(st.integers(0, 40), st.fractions(max_denominator=64).filter(lambda v: abs(v) <= 8), max_size=8),
    st.fractions(max_denominator=8).filter(lambda v: abs(v) <= 4),
)


def test_multiplier_examples():
    m = Multiplier({1: 1, 3: 0.5})
    assert m(I(5, 1)) == 1
    assert m(I(-2, 3)) == Fraction(1, 2)
    assert m(I(0, 2)) == 0
    assert m.bound == 1
    assert canonical_partial(2)(I(7, 2)) == 1 and canonical_partial(2)(I(7, 3)) == 0
    with pytest.raises(ValueError):
        Multiplier({-1: 1})


def test_multiplier_json_round_trip():
    m = Multiplier({0: 0.25, 7: -3}, 0.5)
    assert Multiplier.from_json(m.to_json()) == m


@given(multipliers, st.integers(-30, 30), st.integers(0, 100))
def test_homogeneity(m, j, k):
    assert m(I(j, k)) == m(I(0, k)) == homogeneous_value(m, I(j, k))


@given(st.integers(-30, 30), st.integers(0, 200))
def test_canonical_partials_partition_unity(j, k):
    assert sum(canonical_partial(i)(I(j, k)) ** 2 for i in range(201)) == 1


def test_kernel_examples():
    K = kernel_vector(P("5/8"), P("7/8"))
    assert K.nonzero() == {0: 2, 1: -2}
    assert K.delta_xy == Fraction(1, 2)
    assert K.delta_xy ** 2 * K.sq_norm() == 2
    # common interval at position 0: the -m(0) term cancels the tail
    assert kernel_component(0, P("1/8"), P("3/8")) == 0
    assert kernel_component(3, P("5/8"), P("7/8")) == 0


def test_kernel_deeper_position():
    # I(x, y) = [2, 3): -1 at position 2, then 1/2 at 1 and the tail 1/2 at 0
    K = kernel_vector(P("9/4"), P("11/4"))
    assert K.nonzero() == {2: -1, 1: Fraction(1, 2), 0: Fraction(1, 2)}
    assert K.delta_xy ** 2 * K.sq_norm() == Fraction(3, 2)
    assert kernel_vector(P("1/2"), P("3/2")).nonzero() == {}


@settings(max_examples=300)
@given(multipliers, points, points)
def test_omega_matches_series_oracle(m, x, y):
    if x == y:
        return
    assert omega_eval(m, x, y) == series_omega(m, x, y)


@given(multipliers, points, points, st.integers(-6, 6))
def test_omega_is_dilation_invariant(m, x, y, l):
    if x == y:
        return
    assert omega_eval(m, x.scaled(l), y.scaled(l)) == omega_eval(m, x, y)


@given(points, points)
def test_kernel_size_bound(x, y):
    if x == y:
        return
    K = kernel_vector(x, y)
    assert K.delta_xy == delta(x, y)
    assert K.delta_xy ** 2 * K.sq_norm() <= 2


@given(points, points)
def test_kernel_components_agree_with_vector(x, y):
    if x == y:
        return
    K = kernel_vector(x, y)
    for i in range(K.entries and max(K.entries) + 2 or 2):
        assert kernel_component(i, x, y) == K[i]


def test_check_cz_hypotheses_report():
    rep = check_cz_hypotheses(500, seed=3)
    assert rep.passed
    assert rep.max_delta_knorm_sq <= 2
    assert rep.regularity_checks > 0
    js = rep.to_json()
    assert js["size_violations"] == 0 and js["trials"] == 500


def test_check_cz_hypotheses_is_thread_count_independent():
    a = check_cz_hypotheses(300, seed=11, workers=1).to_json()
    b = check_cz_hypotheses(300, seed=11, workers=4).to_json()
    assert a == b


def test_check_cz_hypotheses_rejects_zero_trials():
    with pytest.raises(ValueError):
        check_cz_hypotheses(0)


def test_check_cz_hypotheses_custom_sampler():
    # dilates of (5/8, 7/8): delta |K| is dilation invariant and equals sqrt(2)
    def sampler(rng):
        l = int(rng.integers(-6, 7))
        return P("5/8").scaled(l), P("7/8").scaled(l)

    rep = check_cz_hypotheses(50, seed=0, sampler=sampler)
    assert rep.passed
    assert rep.max_delta_knorm_sq == 2
    assert np.isclose(rep.max_delta_knorm, np.sqrt(2))
