import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credible import MixedProfile, StageGame, enumerate_mixed_nash_2p, enumerate_pure_nash, has_unique_nash, is_nash
from credible.nash import dominance_solution, first_equilibrium
from credible.random_games import random_dominant_stage, random_stage

MIX = MixedProfile.from_weights([{"D": F(3, 4), "E": F(1, 4)}] * 2)


def brute_pure_nash(g):
    out = []
    for p in g.profiles():
        ok = True
        for i in range(g.n_players):
            for b in g.actions[i]:
                q = p[:i] + (b,) + p[i + 1:]
                if g.payoff(q)[i] > g.payoff(p)[i]:
                    ok = False
        if ok:
            out.append(p)
    return out


def test_cc_not_nash(cde):
    v = is_nash(cde, MixedProfile.pure(("C", "C")))
    assert not v.passed
    row = [w for w in v.witnesses if w.player == 0][0]
    assert row.action == "E" and row.payoffs == (4, 5) and row.gap == 1


def test_dd_nash(cde):
    assert is_nash(cde, MixedProfile.pure(("D", "D"))).passed


def test_mixed_nash(cde):
    assert is_nash(cde, MIX).passed


def test_pure_census(cde, pd, non_nash):
    assert enumerate_pure_nash(cde) == [("D", "D"), ("E", "E")]
    assert enumerate_pure_nash(pd) == [("D", "D")]
    assert enumerate_pure_nash(non_nash.stage(2)) == list(non_nash.stage(2).profiles())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_pure_census_matches_brute_force(seed):
    rng = random.Random(seed)
    g = random_stage(rng, [rng.randint(1, 3) for _ in range(rng.randint(2, 3))])
    assert enumerate_pure_nash(g) == brute_pure_nash(g)


def test_mixed_census(cde):
    ns = enumerate_mixed_nash_2p(cde)
    assert ns.pure == [("D", "D"), ("E", "E")]
    assert ns.mixed == [MIX]
    assert not ns.degenerate


def test_pd_census(pd):
    ns = enumerate_mixed_nash_2p(pd)
    assert ns.all() == [MixedProfile.pure(("D", "D"))] and not ns.degenerate


def test_matching_pennies(mp):
    ns = enumerate_mixed_nash_2p(mp)
    half = {"H": F(1, 2), "T": F(1, 2)}
    assert ns.all() == [MixedProfile.from_weights([half, half])]
    assert has_unique_nash(mp).status == "unique"


def test_uniqueness(pd, cde):
    assert has_unique_nash(pd).status == "unique"
    assert has_unique_nash(pd).profile == MixedProfile.pure(("D", "D"))
    r = has_unique_nash(cde)
    assert r.status == "multiple"
    assert r.equilibria[:2] == [MixedProfile.pure(("D", "D")), MixedProfile.pure(("E", "E"))]


def test_duplicate_column_unknown():
    g = StageGame.bimatrix("UD", ["L", "R1", "R2"], [[(1, -1), (-1, 1), (-1, 1)], [(-1, 1), (1, -1), (1, -1)]])
    assert enumerate_mixed_nash_2p(g).degenerate
    assert has_unique_nash(g).status == "unknown"


def test_dominance():
    rng = random.Random(3)
    for _ in range(30):
        g = random_dominant_stage(rng, [rng.randint(2, 3) for _ in range(rng.randint(2, 3))])
        d = dominance_solution(g)
        assert d is not None and enumerate_pure_nash(g) == [d]
        assert has_unique_nash(g).status == "unique"


def test_first_equilibrium(cde, mp):
    assert first_equilibrium(cde) == MixedProfile.pure(("D", "D"))
    assert not first_equilibrium(mp).is_pure


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_census_matches_nashpy(seed):
    nashpy = pytest.importorskip("nashpy")
    import numpy as np

    rng = random.Random(seed)
    g = random_stage(rng, [rng.randint(2, 3), rng.randint(2, 3)], -20, 20)
    ns = enumerate_mixed_nash_2p(g)
    for m in ns.all():
        assert is_nash(g, m).passed
    if ns.degenerate:
        return
    rows, cols = g.actions
    A = np.array([[float(g.payoff((r, c))[0]) for c in cols] for r in rows])
    B = np.array([[float(g.payoff((r, c))[1]) for c in cols] for r in rows])
    ref = list(nashpy.Game(A, B).vertex_enumeration())
    ours = [(tuple(float(m.prob(0, r)) for r in rows), tuple(float(m.prob(1, c)) for c in cols)) for m in ns.all()]
    assert len(ref) == len(ours)
    for x, y in ref:
        assert any(np.allclose(x, a, atol=1e-9) and np.allclose(y, b, atol=1e-9) for a, b in ours)
