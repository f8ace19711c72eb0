import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from credible import (
    BehaviorProfile,
    CapExceeded,
    MixedProfile,
    MultiStageGame,
    analyze_uniqueness,
    construct_credible,
    enumerate_pure_credible,
    enumerate_pure_nash,
    enumerate_pure_spne,
    formats,
    verify_credible,
    verify_spne,
)
from credible.finite import count_pure_spne
from credible.model import CyclicProfile, history_tree, subgame_values
from credible.oracles import all_pure_spne_bruteforce, credible_pairs_naive, is_pure_spne_bruteforce
from credible.random_games import random_finite_game, random_stage


def _pure_table(p):
    return {h: m.pure_profile() for h, m in p.table.items()}


def test_pstar_is_spne(twice_cde, pstar):
    assert verify_spne(twice_cde, pstar).passed
    assert is_pure_spne_bruteforce(twice_cde, _pure_table(pstar))


def test_cc_twice_fails_at_time_two(twice_cde, fx):
    p = formats.load_profile(fx("cc_twice.profile"))
    v = verify_spne(twice_cde, p)
    assert not v.passed
    assert any(w.time == 2 for w in v.witnesses)
    assert {w.gap for w in v.witnesses} == {1}


def test_pstar_not_credible(twice_cde, pstar):
    v = verify_credible(twice_cde, pstar)
    assert not v.passed
    row = [w for w in v.witnesses if w.player == 0][0]
    assert {row.history, row.other} == {(("C", "C"),), (("C", "D"),)}
    assert sorted(row.payoffs) == [1, 3]


def test_non_nash_credible(non_nash, fx):
    p = formats.load_profile(fx("non_nash.profile"))
    assert verify_credible(non_nash, p).passed
    assert p in enumerate_pure_credible(non_nash)


def test_constant_stage_nash_is_credible(twice_cde):
    for a in (("D", "D"), ("E", "E")):
        p = BehaviorProfile.constant(twice_cde, [a, a])
        assert verify_credible(twice_cde, p).passed


def test_twice_pd_single_spne(pd):
    game = MultiStageGame.repeated(pd, 2, 1)
    eqs = enumerate_pure_spne(game)
    assert list(eqs) == [BehaviorProfile.constant(game, [("D", "D")] * 2)]
    assert eqs.profiles == all_pure_spne_bruteforce(game)
    assert list(enumerate_pure_credible(game)) == list(eqs)


def test_twice_cde_sets(twice_cde, pstar):
    spne = enumerate_pure_spne(twice_cde)
    assert pstar in spne
    for a in (("D", "D"), ("E", "E")):
        assert BehaviorProfile.constant(twice_cde, [a, a]) in spne
    cred = enumerate_pure_credible(twice_cde)
    assert pstar not in cred
    assert BehaviorProfile.constant(twice_cde, [("E", "E")] * 2) in cred
    for p in list(spne)[::200]:
        assert is_pure_spne_bruteforce(twice_cde, _pure_table(p))


def test_one_stage_lifts_nash(cde):
    game = MultiStageGame.finite([cde])
    assert [p[()].pure_profile() for p in enumerate_pure_spne(game)] == enumerate_pure_nash(cde)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_spne_matches_brute_force(seed):
    rng = random.Random(seed)
    game = random_finite_game(rng, players=(2, 2), actions=(1, 2), horizon=(1, 2), stage_maker=random_stage)
    got = enumerate_pure_spne(game)
    assert set(got) == set(all_pure_spne_bruteforce(game))
    cred = set(enumerate_pure_credible(game))
    assert cred <= set(got)
    for p in got:
        assert (p in cred) == credible_pairs_naive(game, p, subgame_values(game, p))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_backends_agree_on_spne(seed):
    rng = random.Random(seed)
    game = random_finite_game(rng, horizon=(2, 2), actions=(2, 3))
    a = enumerate_pure_spne(game, cap=500, backend="python")
    b = enumerate_pure_spne(game, cap=500, backend="compiled")
    assert a.profiles == b.profiles


def test_cap_truncates(twice_cde):
    eqs = enumerate_pure_spne(twice_cde, cap=10)
    assert eqs.truncated and len(eqs) <= 10
    n, truncated = count_pure_spne(twice_cde)
    assert not truncated and n == len(enumerate_pure_spne(twice_cde))


def test_node_cap(cde):
    with pytest.raises(CapExceeded):
        enumerate_pure_spne(MultiStageGame.repeated(cde, 6, 1), node_cap=1000)


def test_construct(twice_cde, pd, fx):
    p = construct_credible(twice_cde)
    assert p == BehaviorProfile.constant(twice_cde, [("D", "D")] * 2)
    c = construct_credible(MultiStageGame.repeated(pd, None, F(9, 10)))
    assert isinstance(c, CyclicProfile) and c.at(5) == MixedProfile.pure(("D", "D"))


def test_construct_mixed(mp):
    game = MultiStageGame.repeated(mp, 2, 1)
    p = construct_credible(game)
    half = MixedProfile.from_weights([{"H": F(1, 2), "T": F(1, 2)}] * 2)
    assert all(m == half for m in p.table.values())
    assert verify_credible(game, p).passed


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_construct_always_credible(seed):
    game = random_finite_game(random.Random(seed))
    assert verify_credible(game, construct_credible(game)).passed


def test_uniqueness_reports(pd, twice_cde, mp):
    rep = analyze_uniqueness(MultiStageGame.repeated(pd, None, F(9, 10)))
    assert rep.status == "unique" and rep.profile.at(1) == MixedProfile.pure(("D", "D"))
    rep = analyze_uniqueness(twice_cde)
    assert rep.status == "not_applicable" and rep.stage == 1
    assert rep.equilibria == [MixedProfile.pure(("D", "D")), MixedProfile.pure(("E", "E"))]
    rep = analyze_uniqueness(MultiStageGame.repeated(mp, None, F(1, 2)))
    assert rep.status == "unique"
    assert rep.profile.at(3) == MixedProfile.from_weights([{"H": F(1, 2), "T": F(1, 2)}] * 2)


def test_mixed_profile_verification(mp):
    game = MultiStageGame.repeated(mp, 2, 1)
    bad = BehaviorProfile.constant(game, [("H", "H")] * 2)
    assert not verify_spne(game, bad).passed
