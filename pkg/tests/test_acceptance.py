"""End-to-end acceptance criteria, each at its stated tolerance and time budget."""

import io
import json
import random
import time
from fractions import Fraction as F

import pytest

from credible import analyze_uniqueness, enumerate_pure_credible, enumerate_pure_spne, formats
from credible.automaton import automaton_values, bellman_residual, preset_profile
from credible.cli import run
from credible.oracles import all_pure_spne_bruteforce, is_tree_spne_bruteforce
from credible.random_games import random_dominant_stage, random_finite_game, random_stage, random_tie_free_tree
from credible.tree import check_prop3

from conftest import fixture_path as fx


def cli(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv] + ["--format", "structured"], out, io.StringIO())
    return code, json.loads(out.getvalue()) if out.getvalue() else None


@pytest.mark.acceptance(1)
def test_twice_repeated_pstar(record):
    t0 = time.perf_counter()
    code_s, _ = cli("spne", "verify", fx("twice_cde.game"), fx("pstar.profile"))
    code_c, rep = cli("credible", "verify", fx("twice_cde.game"), fx("pstar.profile"))
    elapsed = time.perf_counter() - t0
    assert code_s == 0
    assert code_c == 1
    ws = [w for w in rep["verdict"]["witnesses"] if w["kind"] == "CredibilityFailure"]
    assert ws
    assert all(sorted(F(x) for x in w["payoffs"]) == [1, 3] for w in ws)
    assert elapsed < 1
    record(f"SPNE pass, credible fail, witness payoffs 3 vs 1 ({elapsed:.3f}s)")


@pytest.mark.acceptance(2)
def test_non_nash(record):
    t0 = time.perf_counter()
    code_c, _ = cli("credible", "verify", fx("non_nash.game"), fx("non_nash.profile"))
    code_n, rep = cli("nash", fx("non_nash.game"), "--stage", "1", "--check", "B,B")
    elapsed = time.perf_counter() - t0
    assert code_c == 0
    assert code_n == 1
    check = rep["stages"][0]["check"]
    assert check["pass"] is False
    col = [w for w in check["witnesses"] if w["player"] == 1]
    assert len(col) == 1 and [F(x) for x in col[0]["payoffs"]] == [2, 3]
    assert elapsed < 1
    record(f"credible pass, (B,B) not stage Nash, column gains 3-2=1 ({elapsed:.3f}s)")


@pytest.mark.acceptance(3)
def test_repeated_pd_grim(record):
    t0 = time.perf_counter()
    for d in ("1/4", "1/2", "3/5", "9/10"):
        if F(d) >= F(1, 2):
            assert cli("auto", "spne", fx("pd.game"), fx("grim.auto"), "--delta", d)[0] == 0
        assert cli("auto", "credible", fx("pd.game"), fx("grim.auto"), "--delta", d)[0] == 1
        assert cli("auto", "credible", fx("pd.game"), fx("alld.auto"), "--delta", d)[0] == 0
    elapsed = time.perf_counter() - t0
    assert elapsed < 1
    record(f"grim rejected and always-defect accepted at all 4 discount factors ({elapsed:.3f}s)")


@pytest.mark.acceptance(4)
def test_existence(record, tmp_path):
    rng = random.Random(20240401)
    t0 = time.perf_counter()
    ok = 0
    for k in range(200):
        game = random_finite_game(rng)
        gpath = tmp_path / f"g{k}.game"
        formats.save_game(game, gpath)
        code, rep = cli("credible", "construct", gpath)
        assert code == 0
        ppath = tmp_path / f"p{k}.profile"
        ppath.write_text(json.dumps(rep["profile"]))
        code, _ = cli("credible", "verify", gpath, ppath)
        ok += code == 0
    elapsed = time.perf_counter() - t0
    assert ok == 200
    assert elapsed < 60
    record(f"{ok}/200 constructed profiles verified credible ({elapsed:.1f}s)")


@pytest.mark.acceptance(5)
def test_uniqueness(record):
    rng = random.Random(5)
    t0 = time.perf_counter()
    ok = 0
    for _ in range(100):
        game = random_finite_game(rng, stage_maker=random_dominant_stage)
        eqs = enumerate_pure_credible(game)
        rep = analyze_uniqueness(game)
        ok += len(eqs) == 1 and not eqs.truncated and rep.status == "unique" and eqs[0] == rep.profile
    elapsed = time.perf_counter() - t0
    assert ok == 100
    assert elapsed < 60
    record(f"{ok}/100 games: one credible profile, equal to the uniqueness output ({elapsed:.1f}s)")


@pytest.mark.acceptance(6)
def test_refinement_and_oracle(record):
    rng = random.Random(6)
    t0 = time.perf_counter()
    ok = 0
    for _ in range(100):
        game = random_finite_game(rng, players=(2, 2), actions=(1, 2), horizon=(1, 2), stage_maker=random_stage)
        spne = enumerate_pure_spne(game)
        cred = enumerate_pure_credible(game)
        assert not spne.truncated
        ok += set(cred) <= set(spne) and set(spne) == set(all_pure_spne_bruteforce(game))
    elapsed = time.perf_counter() - t0
    assert ok == 100
    assert elapsed < 120
    record(f"{ok}/100 games: credible within SPNE, SPNE equal to brute force ({elapsed:.1f}s)")


@pytest.mark.acceptance(7)
def test_prop3(record):
    rng = random.Random(7)
    t0 = time.perf_counter()
    holds = 0
    for _ in range(200):
        rep = check_prop3(random_tie_free_tree(rng, max_internal=10))
        holds += rep.status == "holds" and rep.tie_free
    assert holds == 200
    code, rep = cli("tree", "prop3", fx("tie_copies.tree"))
    assert code == 1 and rep["status"] == "counterexample" and rep["tie_free"] is False
    tree = formats.load_tree(fx("tie_copies.tree"))
    assert is_tree_spne_bruteforce(tree, formats.strategy_from_dict(rep["counterexample"]))
    elapsed = time.perf_counter() - t0
    record(f"200/200 tie-free trees hold; tie tree gives an oracle-confirmed counterexample ({elapsed:.1f}s)")


@pytest.mark.acceptance(8)
def test_grim_values(record):
    g = formats.load_game(fx("pd.game")).cycle[0]
    grim = preset_profile(g, "grim-trigger")
    v = automaton_values(g, F(3, 5), grim)
    assert v[("coop", "coop")] == (F(15, 2), F(15, 2))
    assert v[("punish", "punish")] == (F(5, 2), F(5, 2))
    res = bellman_residual(g, F(3, 5), grim, v)
    assert all(x == 0 for r in res.values() for x in r)
    code, rep = cli("auto", "values", fx("pd.game"), fx("grim.auto"), "--delta", "3/5")
    assert code == 0 and rep["values"]["coop,coop"] == ["15/2", "15/2"] and rep["bellman_residual_zero"]
    record("V(coop,coop)=(15/2,15/2), V(punish,punish)=(5/2,5/2), residual exactly 0")
