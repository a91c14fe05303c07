from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from convnormal.bounds import (BoundTable, cn1_lower_bound, cn_closed_bound,
                               cn_recursive_bound, height_gauge_exact,
                               height_gauge_falsify, ic_bound,
                               max_sq_vertex_distance, simplex_bound)
from convnormal.errors import BadParams


def test_closed_forms():
    assert cn_closed_bound(2, 4) == 24
    assert cn_closed_bound(3, 4) == 72
    assert cn_closed_bound(1, 2) == 2
    assert ic_bound(3) == 72
    assert simplex_bound(2) == 6 and simplex_bound(3) == 12
    with pytest.raises(BadParams):
        cn_closed_bound(0, 4)
    with pytest.raises(BadParams):
        cn_closed_bound(2, Fr(3, 2))


def test_recursion_examples():
    cn, bcn, trace = cn_recursive_bound(2, 4)
    assert cn == 24 and bcn == Fr(3, 2)
    cn, bcn, trace = cn_recursive_bound(3, 4)
    assert (cn, bcn) == (48, 40)
    assert trace[1] == (2, 5, 30, Fr(3, 2))
    assert cn_recursive_bound(1, 7)[0] == 1
    with pytest.raises(BadParams):
        cn_recursive_bound(2, 1)


@given(st.integers(1, 10), st.fractions(2, 10, max_denominator=6), st.fractions(0, 5, max_denominator=6))
def test_recursion_monotone_and_dominated(d, k, dk):
    a = cn_recursive_bound(d, k)[0]
    b = cn_recursive_bound(d, k + dk)[0]
    assert a <= b
    assert a <= cn_closed_bound(d, k)


def test_bound_table():
    t = BoundTable.build(range(1, 11), [2, Fr(5, 2), 3, 4])
    for e in t.entries.values():
        assert 0 < e.cn_upper <= e.closed_form
    assert cn1_lower_bound(3) == Fr(1, 4)
    assert all(v <= 1 for v in t.metadata.values())
    row = t.rows()[0]
    assert row["closed_form"] == "2" and row["closed_form_approx"] == "2.0000"


def test_height_gauge_examples():
    assert height_gauge_exact(1)[0] == 1
    assert height_gauge_exact(2) == (Fr(1, 2), (1, 1))
    assert height_gauge_exact(4)[0] == Fr(1, 4)
    for d in range(1, 9):
        assert height_gauge_exact(d)[0] * d == 1
    # the extremal hyperplane through the origin attains the bound exactly
    for d in (2, 3, 5):
        assert max_sq_vertex_distance((1,) * d, 0) == Fr(1, d)
    # any hyperplane through a facet containing 0
    assert max_sq_vertex_distance((1, 0, 0), 0) == 1


@given(st.integers(2, 5), st.lists(st.integers(-30, 30), min_size=5, max_size=5))
def test_supporting_hyperplanes_respect_gauge(d, normal):
    n = tuple(normal[:d])
    if not any(n):
        return
    offset = min([0] + list(n))
    assert max_sq_vertex_distance(n, offset) >= height_gauge_exact(d)[0]


def test_falsifier_report():
    rep = height_gauge_falsify(3, 2000, seed=1)
    assert rep.violations == 0 and rep.min_observed >= Fr(1, 3)
    assert rep.to_json()["bound"] == "1/3"
    assert height_gauge_falsify(3, 2000, seed=1).to_json() == rep.to_json()
    with pytest.raises(BadParams):
        height_gauge_falsify(3, 0)
