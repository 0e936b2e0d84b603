import numpy as np
import pytest

from gazesim.elastic import dtw, ground_distance, lockstep_euclidean, twed
from gazesim.errors import EmptySeries, LengthMismatch
from gazesim.models import TwedParams

from oracles import dtw_enumeration, twed_enumeration


def random_series(rng, max_len=6, lo=1):
    n = rng.integers(lo, max_len + 1)
    return rng.uniform(-50.0, 50.0, size=(n, 2))


def test_ground_distance_345():
    assert ground_distance((0, 0), (3, 4)) == 5.0


def test_ground_distance_identity():
    assert ground_distance((2.5, -1.0), (2.5, -1.0)) == 0.0


def test_ground_distance_unit_diagonal():
    assert ground_distance((1, 0), (0, 1)) == pytest.approx(np.sqrt(2.0), abs=0)


def test_twed_identity_is_zero():
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = random_series(rng, max_len=12)
        params = TwedParams(lam=rng.uniform(0, 10), gamma=rng.uniform(0, 10))
        assert twed(x, x, params) == 0.0


def test_twed_single_point_forced_match():
    # only the match step is reachable from the origin; virtual samples equal
    assert twed([(3.0, 0.0)], [(7.0, 0.0)], TwedParams(lam=0, gamma=0)) == 4.0


def test_twed_small_example_frozen():
    # enumeration oracle over the 2x3 grid gives 6.0 (diagonal matches then a
    # deleteB step of d(b2,b3)+gamma+lam = 0+1+5)
    a = [(0.0, 0.0), (10.0, 0.0)]
    b = [(0.0, 0.0), (10.0, 0.0), (10.0, 0.0)]
    assert twed_enumeration(a, b, lam=5.0, gamma=1.0) == 6.0
    assert twed(a, b, TwedParams(lam=5.0, gamma=1.0)) == 6.0


def test_twed_matches_enumeration_exactly():
    rng = np.random.default_rng(42)
    for _ in range(120):
        a = random_series(rng)
        b = random_series(rng)
        lam = float(rng.choice([0.0, 1.0, 5.0, 10.0]))
        gamma = float(rng.choice([0.0, 1.0, 5.0, 10.0]))
        expected = twed_enumeration(a, b, lam, gamma)
        assert twed(a, b, TwedParams(lam=lam, gamma=gamma)) == expected


def test_twed_symmetry_exact():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = random_series(rng, max_len=15)
        b = random_series(rng, max_len=15)
        params = TwedParams(lam=rng.uniform(0, 20), gamma=rng.uniform(0, 20))
        assert twed(a, b, params) == twed(b, a, params)


def test_twed_nonnegative():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = random_series(rng, max_len=10)
        b = random_series(rng, max_len=10)
        params = TwedParams(lam=rng.uniform(0, 10), gamma=rng.uniform(0, 10))
        assert twed(a, b, params) >= 0.0


def test_twed_monotone_in_lambda():
    rng = np.random.default_rng(19)
    for _ in range(25):
        a = random_series(rng, max_len=10)
        b = random_series(rng, max_len=10)
        gamma = rng.uniform(0, 10)
        lams = [0.0, 1.0, 5.0, 25.0, 125.0]
        values = [twed(a, b, TwedParams(lam=l, gamma=gamma)) for l in lams]
        assert all(v2 >= v1 for v1, v2 in zip(values, values[1:]))


def test_twed_triangle_inequality():
    rng = np.random.default_rng(23)
    for _ in range(60):
        a = random_series(rng, max_len=12)
        b = random_series(rng, max_len=12)
        c = random_series(rng, max_len=12)
        params = TwedParams(lam=rng.uniform(0, 10), gamma=rng.uniform(0.1, 10))
        ab = twed(a, b, params)
        bc = twed(b, c, params)
        ac = twed(a, c, params)
        assert ac <= ab + bc + 1e-9


def test_twed_empty_series_rejected():
    with pytest.raises(EmptySeries):
        twed(np.empty((0, 2)), [(1.0, 2.0)], TwedParams(lam=1, gamma=1))


def test_dtw_identity_is_zero():
    x = [(1.0, 2.0), (3.0, 4.0), (5.0, 6.0)]
    assert dtw(x, x) == 0.0


def test_dtw_absorbs_repeated_sample():
    a = [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]
    b = [(1.0, 0.0), (2.0, 0.0), (2.0, 0.0), (3.0, 0.0)]
    assert dtw(a, b) == 0.0


def test_dtw_matches_enumeration_exactly():
    rng = np.random.default_rng(77)
    for _ in range(120):
        a = random_series(rng)
        b = random_series(rng)
        assert dtw(a, b) == dtw_enumeration(a, b)


def test_dtw_symmetry_exact():
    rng = np.random.default_rng(5)
    for _ in range(40):
        a = random_series(rng, max_len=12)
        b = random_series(rng, max_len=12)
        assert dtw(a, b) == dtw(b, a)


def test_dtw_bounded_by_lockstep_cost_sum():
    # the lock-step path is one feasible warping path
    rng = np.random.default_rng(13)
    for _ in range(40):
        n = rng.integers(1, 12)
        a = rng.uniform(-50, 50, size=(n, 2))
        b = rng.uniform(-50, 50, size=(n, 2))
        pointwise = sum(ground_distance(p, q) for p, q in zip(a, b))
        assert dtw(a, b) <= pointwise + 1e-12


def test_lockstep_identical_series():
    x = [(1.0, 1.0), (2.0, 2.0)]
    assert lockstep_euclidean(x, x) == 0.0


def test_lockstep_single_pair():
    assert lockstep_euclidean([(0.0, 0.0)], [(3.0, 4.0)]) == 5.0


def test_lockstep_length_mismatch():
    with pytest.raises(LengthMismatch):
        lockstep_euclidean(np.zeros((3, 2)), np.zeros((4, 2)))
