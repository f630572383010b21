from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from svcdisco.costmodel import (
    CostModelError,
    CostModelParams,
    coverage_curve,
    predict,
    time_filtered,
    time_saving,
    time_unfiltered,
    tsp,
    tsp_general,
    write_curve_csv,
)

UNIT = CostModelParams(1, 1)


def test_time_filtered_examples():
    assert time_filtered(2, 3, UNIT) == 7  # 2*2 + 3*1
    assert time_filtered(0, 0, UNIT) == 0
    assert time_filtered(5, 0, UNIT) == 10 == time_unfiltered(5, 0, UNIT)


def test_time_unfiltered_examples():
    assert time_unfiltered(2, 3, UNIT) == 10
    assert time_unfiltered(0, 0, UNIT) == 0


def test_time_saving_examples():
    assert time_saving(2, 3, UNIT) == 3
    assert time_saving(7, 0, UNIT) == 0
    assert time_saving(0, 10, UNIT) == 10


def test_negative_counts_rejected():
    for fn in (time_filtered, time_unfiltered, time_saving):
        with pytest.raises(CostModelError):
            fn(-1, 2, UNIT)


def test_tsp_examples():
    assert tsp(0, 100) == 1
    assert tsp(33, 67) == Fraction(67, 133)
    assert round(float(tsp(33, 67)), 4) == 0.5038
    assert tsp(10, 0) == 0
    with pytest.raises(CostModelError):
        tsp(0, 0)


def test_tsp_general_examples():
    assert tsp_general(33, 67, CostModelParams(4, 4)) == tsp(33, 67)
    assert tsp_general(100, 0, CostModelParams(1, 9)) == 0
    # 92*9 / (8*10 + 92*9)
    assert tsp_general(8, 92, CostModelParams(1, 9)) == Fraction(828, 908)


def test_params_validation():
    with pytest.raises(CostModelError):
        CostModelParams(0, 1)
    with pytest.raises(CostModelError):
        CostModelParams(2, 1)
    with pytest.raises(CostModelError):
        CostModelParams(1.0, 2)


def test_predict_fields():
    p = predict(2, 3, UNIT)
    assert (p.time_filtered, p.time_unfiltered, p.saving) == (7, 10, 3)
    assert p.tsp == Fraction(3, 7)
    assert p.saving_fraction == Fraction(3, 10)


def test_coverage_curve(tmp_path):
    pts = coverage_curve(10)
    assert pts[-1] == (1, 0)
    assert dict(pts)[Fraction(1, 2)] == Fraction(1, 3)
    for c, t in pts:
        assert t == (1 - c) / (1 + c)
    assert all(a[1] > b[1] for a, b in zip(pts, pts[1:]))
    write_curve_csv(pts, tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "coverage,tsp" and len(lines) == 11
    with pytest.raises(CostModelError):
        coverage_curve(1)


counts = st.integers(min_value=0, max_value=10**6)
weights = st.tuples(st.integers(1, 1000), st.integers(0, 1000)).map(lambda t: CostModelParams(t[0], t[0] + t[1]))


@given(counts, counts, weights)
def test_saving_identity(x, y, p):
    assert time_unfiltered(x, y, p) - time_filtered(x, y, p) == y * p.t_disc


@given(st.integers(1, 10**6), counts)
def test_tsp_range(x, y):
    assert 0 <= tsp(x, y) < 1


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_tsp_monotone(x, y):
    assert tsp(x, y + 1) > tsp(x, y)
    assert tsp(x + 1, y) < tsp(x, y)
    assert tsp(x, 0) < tsp(x, 1)


@given(counts, counts, st.integers(1, 1000))
def test_general_reduces_to_equal_cost(x, y, t):
    if x + y:
        assert tsp_general(x, y, CostModelParams(t, t)) == tsp(x, y)
