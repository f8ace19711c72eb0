import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credible import kernels
from credible.kernels import _pure

needs_compiled = pytest.mark.skipif(kernels._fast is None, reason="compiled kernels not built")


def _rows(rng, n_profiles, n, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n_profiles)]


def _shape(rng):
    return tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))


def _size(shape):
    k = 1
    for s in shape:
        k *= s
    return k


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")


def test_integerize():
    from fractions import Fraction as F

    rows, scale = kernels.integerize([[F(1, 2), F(1, 3)], [2, F(-5, 6)]])
    assert scale == 6 and rows == [[3, 2], [12, -5]]


@needs_compiled
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_pure_nash_parity(seed):
    rng = random.Random(seed)
    shape = _shape(rng)
    rows = _rows(rng, _size(shape), len(shape))
    assert list(kernels.pure_nash(rows, shape, "compiled")) == _pure.pure_nash(rows, shape)


@needs_compiled
@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_deviation_counts_parity(seed):
    rng = random.Random(seed)
    shape = _shape(rng)
    n = len(shape)
    stage = _rows(rng, _size(shape), n)
    cont = _rows(rng, rng.randint(1, 6), n)
    dnum, dden = rng.choice([(1, 1), (1, 2), (9, 10), (2, 3)])
    o1, c1 = kernels.deviation_counts(stage, cont, dnum, dden, shape, "compiled")
    o2, c2 = kernels.deviation_counts(stage, cont, dnum, dden, shape, "python")
    assert o1 == o2
    assert [[list(x) for x in row] for row in c1] == [[list(x) for x in row] for row in c2]


def test_deviation_counts_by_hand():
    # 2x1 game, player 0 deviates from action 0 (payoff 0) to action 1 (payoff 2)
    stage = [[0, 0], [2, 0]]
    cont = [[0, 0], [1, 0], [5, 0]]
    orders, counts = kernels.deviation_counts(stage, cont, 1, 1, (2, 1), "python")
    assert orders[0] == [0, 1, 2]
    # from a=0 continuing with o: deterred when 0 + W(o) >= 2 + W(o'), i.e. W(o') <= W(o) - 2
    assert [counts[0][o][0] for o in range(3)] == [0, 0, 2]


def test_big_ints_fall_back():
    big = 2**70
    rows = [[big, 0], [0, big]]
    assert kernels.pure_nash(rows, (2, 1), "compiled") == _pure.pure_nash(rows, (2, 1))
