import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skeincount.index import (
    FIXED_WEIGHTS,
    DimInput,
    InconclusiveError,
    WallError,
    WeightPair,
    dbar_index,
    dbar_index_numeric,
    formal_dim_closed,
    formal_dim_open,
    mode_contributions,
    random_weight_pairs,
)

TWO_PI = 2 * math.pi


def test_formal_dims():
    for chi in (-4, 0, 1, 2):
        assert formal_dim_closed(DimInput(3, chi, 0)) == 0
        assert formal_dim_open(DimInput(3, chi, mu=0)) == 0
    assert formal_dim_closed(DimInput(3, 2, 3)) == 6
    assert formal_dim_closed(DimInput(4, 2, 0)) == 2
    assert formal_dim_open(DimInput(3, 1, mu=2)) == 2
    assert formal_dim_open(DimInput(2, 1, mu=0)) == -1


def test_index_examples():
    assert dbar_index(WeightPair(-1, -1)) == 1
    assert dbar_index(WeightPair(1, 1)) == -1
    assert dbar_index(WeightPair(-7, -7)) == 3
    assert dbar_index(WeightPair(-1, -1, "strip")) == 1


def test_wall_rejected():
    with pytest.raises(WallError):
        WeightPair(0.0, 1.0)
    with pytest.raises(WallError):
        WeightPair(1.0, TWO_PI)
    with pytest.raises(ValueError):
        WeightPair(1.0, 1.0, "disk")


def test_numeric_examples():
    assert dbar_index_numeric(WeightPair(-1, -1)) == 1
    assert dbar_index_numeric(WeightPair(1, 1)) == -1


def test_numeric_fixed_and_random():
    for a, b in FIXED_WEIGHTS + random_weight_pairs():
        w = WeightPair(a, b)
        assert dbar_index_numeric(w) == dbar_index(w), (a, b)


def test_numeric_needs_modes():
    with pytest.raises(ValueError):
        dbar_index_numeric(WeightPair(-9.0, -9.0), modes=1)


def test_numeric_inconclusive_near_wall():
    # a weight 1e-3 from the wall decays too slowly to decide on [-10, 10]
    with pytest.raises(InconclusiveError):
        mode_contributions(WeightPair(-1e-3, -1e-3))


def test_mode_rows():
    rows = mode_contributions(WeightPair(-1, -1))
    kern = [m for m, k, _ in rows if k]
    assert kern == [0]
    assert not any(c for _, _, c in rows)


weights = st.floats(-20, 20).filter(lambda x: abs(x - TWO_PI * round(x / TWO_PI)) > 1e-6)


@given(weights)
def test_branches_agree_on_overlap(d):
    # d- = -d+ lies on both branches; both give zero
    assert dbar_index(WeightPair(d, -d)) == 0


@given(weights, weights)
def test_duality_swap(dm, dp):
    assert dbar_index(WeightPair(dm, dp)) == -dbar_index(WeightPair(-dp, -dm))


@given(weights, st.integers(-3, 3))
def test_jump_across_wall(dp, m):
    # moving d- across 2 pi m changes the index by exactly one unit
    lo, hi = TWO_PI * m - 0.3, TWO_PI * m + 0.3
    if abs(dp - TWO_PI * round(dp / TWO_PI)) < 1e-6:
        return
    jump = dbar_index(WeightPair(hi, dp)) - dbar_index(WeightPair(lo, dp))
    assert abs(jump) == 1


@given(weights, weights)
def test_locally_constant(dm, dp):
    eps = 1e-7
    assert dbar_index(WeightPair(dm, dp)) == dbar_index(WeightPair(dm + eps, dp + eps)) or \
        abs(dm + dp) < 1e-6
