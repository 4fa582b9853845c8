import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dyadic_sobolev.dyadic import DyadicPoint
from dyadic_sobolev.errors import GridTooCoarse, WindowTooSmall
from dyadic_sobolev.haar import (
    HaarExpansion,
    StepFunction,
    analyze,
    haar_eval,
    inner_product,
    synthesize,
)

P = DyadicPoint.parse
SQRT2 = math.sqrt(2)

expansions = st.dictionaries(
    st.tuples(st.integers(-3, 5), st.integers(0, 15)),
    st.floats(-1, 1, allow_nan=False).filter(lambda c: abs(c) > 1e-6),
    max_size=12,
).map(HaarExpansion)


def test_haar_eval_examples():
    assert haar_eval(0, 0, P("1/4")) == 1
    assert haar_eval(0, 0, P("3/4")) == -1
    assert haar_eval(1, 0, P("1/8")) == pytest.approx(SQRT2, rel=1e-15)
    assert haar_eval(2, 3, P("13/16")) == 2
    assert haar_eval(0, 0, P("1")) == 0
    # half-open: 1/2 belongs to the right half
    assert haar_eval(0, 0, P("1/2")) == -1


def test_synthesize_examples():
    np.testing.assert_array_equal(synthesize(HaarExpansion({(0, 0): 1}), 1, 0).values, [1, -1])
    got = synthesize(HaarExpansion({(0, 0): 1, (1, 1): 1}), 2, 0).values
    np.testing.assert_allclose(got, [1, 1, -1 + SQRT2, -1 - SQRT2], rtol=0, atol=1e-15)
    assert not synthesize(HaarExpansion(), 3, 2).values.any()


def test_synthesize_preconditions():
    f = HaarExpansion({(2, 3): 1.0})
    with pytest.raises(GridTooCoarse):
        synthesize(f, 2, 0)
    with pytest.raises(WindowTooSmall):
        synthesize(HaarExpansion({(-1, 1): 1.0}), 3, 1)


def test_analyze_examples():
    f, r = analyze(StepFunction(1, 0, [1.0, -1.0]))
    assert f == HaarExpansion({(0, 0): 1.0}) and r == 0
    f, r = analyze(StepFunction(2, 0, [1.0, -1.0, 0.0, 0.0]))
    assert f.keys() == {(1, 0)}
    assert f[(1, 0)] == pytest.approx(2 ** -0.5, rel=1e-15)
    assert r == 0


def test_analyze_indicator_tail():
    f, r = analyze(StepFunction(0, 0, [1.0]), -10)
    assert f.keys() == {(j, 0) for j in range(-10, 0)}
    for j in range(-10, 0):
        assert f[(j, 0)] == pytest.approx(2 ** (j / 2), rel=1e-15)
    # the omitted levels j <= -11 carry sum 2^j = 2^-10 of the squared norm
    assert r * r == pytest.approx(2.0 ** -10, rel=1e-15)
    assert f.sq_norm() + r * r == pytest.approx(1.0, rel=1e-15)


def test_inner_product_examples():
    h00 = synthesize(HaarExpansion.single(0, 0))
    h10 = synthesize(HaarExpansion.single(1, 0))
    hm1 = synthesize(HaarExpansion.single(-1, 0))
    one = StepFunction(0, 0, [1.0])
    assert inner_product(h00, h00) == 1
    assert inner_product(h00, h10) == 0
    assert inner_product(one, hm1) == pytest.approx(2 ** -0.5, rel=1e-15)


@settings(max_examples=60)
@given(expansions)
def test_parseval_and_round_trip(f):
    sf = synthesize(f)
    assert inner_product(sf, sf) == pytest.approx(f.sq_norm(), rel=1e-12, abs=1e-300)
    assert sf.integral() == pytest.approx(0, abs=1e-12)
    back, resid = analyze(sf, f.min_level if f else None)
    scale = max([abs(c) for c in f.values()], default=1.0)
    for key in set(f) | set(back):
        assert abs(f.get(key, 0.0) - back.get(key, 0.0)) <= 1e-12 * scale
    assert resid <= 1e-12 * scale


@given(st.tuples(st.integers(-3, 4), st.integers(0, 9)), st.tuples(st.integers(-3, 4), st.integers(0, 9)))
def test_orthonormality(a, b):
    ip = inner_product(synthesize(HaarExpansion({a: 1.0})), synthesize(HaarExpansion({b: 1.0})))
    assert ip == pytest.approx(1.0 if a == b else 0.0, abs=1e-12)


def test_expansion_algebra_and_canonical_zero():
    f = HaarExpansion({(0, 0): 1.0, (1, 1): 2.0})
    g = HaarExpansion({(0, 0): -1.0, (2, 0): 1e-301})
    assert (f + g) == HaarExpansion({(1, 1): 2.0})
    assert (f - f) == HaarExpansion()
    assert (2 * f)[(1, 1)] == 4.0
    assert HaarExpansion([((0, 0), 1.0), ((0, 0), 2.0)])[(0, 0)] == 3.0
    with pytest.raises(ValueError):
        HaarExpansion({(0, -1): 1.0})


def test_json_and_csv_round_trip():
    f = HaarExpansion({(-2, 1): 0.25, (3, 7): -1.5})
    assert HaarExpansion.from_json(f.to_json()) == f
    assert f.to_json()["coeffs"][0] == {"j": -2, "k": 1, "c": 0.25}
    sf = synthesize(f)
    text = sf.to_csv()
    assert text.splitlines()[0] == f"j={sf.grid_level},M={sf.window}"
    back = StepFunction.from_csv(text)
    np.testing.assert_array_equal(back.values, sf.values)


def test_step_function_refine_and_evaluate():
    g = StepFunction(1, 0, [3.0, -1.0])
    r = g.refine(3, 2)
    assert r.values.size == 32
    assert r(P("1/4")) == 3.0 and r(P("3/4")) == -1.0 and r(P("2")) == 0.0
    assert r.integral() == pytest.approx(g.integral())
