import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import semshift as ss
from semshift.store import DataError


def test_free_diagonal():
    m = ss.solve([[0.0, 1.0], [1.0, 0.0]])
    assert m.perm == (0, 1)
    assert m.total_cost == 0.0


def test_single_cell():
    m = ss.solve([[7.0]])
    assert m.perm == (0,)
    assert m.total_cost == 7.0


def test_all_equal_entries_brute_force_tie_break():
    c = np.full((4, 4), 2.5)
    m = ss.brute_force(c)
    assert m.perm == (0, 1, 2, 3)
    assert m.total_cost == pytest.approx(10.0)
    assert ss.solve(c).total_cost == pytest.approx(10.0)


def test_hand_enumerated_3x3():
    c = [[1, 2, 3], [2, 4, 6], [3, 6, 9]]
    # six permutations cost 14, 13, 13, 11, 11, 10; the minimum is (2, 1, 0)
    m = ss.brute_force(c)
    assert m.total_cost == 10.0
    assert m.perm == (2, 1, 0)
    assert ss.solve(c).total_cost == 10.0


def test_random_matches_brute_force_exactly():
    rng = np.random.default_rng(0)
    for _ in range(200):
        c = rng.random((6, 6))
        assert ss.solve(c).total_cost == ss.brute_force(c).total_cost


@given(seed=st.integers(0, 100_000), k=st.integers(1, 7))
@settings(max_examples=80, deadline=None)
def test_solve_equals_brute_force(seed, k):
    c = np.random.default_rng(seed).random((k, k))
    assert ss.solve(c).total_cost == ss.brute_force(c).total_cost


@given(seed=st.integers(0, 100_000), k=st.integers(2, 6),
       shift=st.floats(min_value=0.0, max_value=5.0))
@settings(max_examples=50, deadline=None)
def test_constant_shift(seed, k, shift):
    c = np.random.default_rng(seed).random((k, k))
    base = ss.solve(c)
    shifted = ss.solve(c + shift)
    assert shifted.total_cost == pytest.approx(base.total_cost + k * shift, abs=1e-9)
    # the unshifted optimum stays optimal in the shifted matrix
    cost_of_base_perm = float((c + shift)[np.arange(k), list(base.perm)].sum())
    assert cost_of_base_perm == pytest.approx(shifted.total_cost, abs=1e-9)


@given(seed=st.integers(0, 100_000), k=st.integers(2, 6))
@settings(max_examples=50, deadline=None)
def test_row_permutation_invariance(seed, k):
    rng = np.random.default_rng(seed)
    c = rng.random((k, k))
    sigma = rng.permutation(k)
    assert ss.solve(c[sigma]).total_cost == pytest.approx(
        ss.solve(c).total_cost, abs=1e-9)


def test_input_validation():
    with pytest.raises(DataError, match="square"):
        ss.solve([[1.0, 2.0]])
    with pytest.raises(DataError, match="nonnegative"):
        ss.solve([[-1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(DataError, match="finite"):
        ss.solve([[np.inf, 0.0], [0.0, 1.0]])
    with pytest.raises(DataError, match="k <= 9"):
        ss.brute_force(np.ones((10, 10)))
