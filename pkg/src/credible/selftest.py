"""Fixture checks plus small randomized property suites, run by ``credible selftest``."""

from __future__ import annotations

import random
from fractions import Fraction
from importlib import resources

from . import formats
from .automaton import automaton_values, bellman_residual, preset_profile, verify_credible_automaton, verify_spne_automaton
from .finite import (
    analyze_uniqueness,
    construct_credible,
    enumerate_pure_credible,
    enumerate_pure_spne,
    verify_credible,
    verify_spne,
)
from .model import MixedProfile
from .nash import is_nash
from .oracles import all_pure_spne_bruteforce, is_tree_spne_bruteforce
from .random_games import random_dominant_stage, random_finite_game, random_stage, random_tie_free_tree
from .tree import check_prop3


def fixture(name: str):
    return resources.files("credible") / "fixtures" / name


def _pstar():
    game = formats.load_game(fixture("twice_cde.game"))
    p = formats.load_profile(fixture("pstar.profile"))
    s, c = verify_spne(game, p), verify_credible(game, p)
    ok = s.passed and not c.passed and any(w.payoffs == (3, 1) for w in c.witnesses)
    return ok, f"spne={s.passed} credible={c.passed}"


def _non_nash():
    game = formats.load_game(fixture("non_nash.game"))
    p = formats.load_profile(fixture("non_nash.profile"))
    g1 = game.stage(1)
    v = is_nash(g1, MixedProfile.pure(("B", "B")))
    gain = [w.gap for w in v.witnesses if w.player == 1]
    return verify_credible(game, p).passed and gain == [1], "credible, (B,B) not stage Nash"


def _grim():
    g = formats.load_game(fixture("pd_repeated.game")).cycle[0]
    grim, alld = preset_profile(g, "grim-trigger"), preset_profile(g, "always-defect")
    for d in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 5), Fraction(9, 10)):
        if d >= Fraction(1, 2) and not verify_spne_automaton(g, d, grim).passed:
            return False, f"grim not SPNE at {d}"
        if verify_credible_automaton(g, d, grim).passed:
            return False, f"grim credible at {d}"
        if not verify_credible_automaton(g, d, alld).passed:
            return False, f"always-defect rejected at {d}"
    vals = automaton_values(g, Fraction(3, 5), grim)
    res = bellman_residual(g, Fraction(3, 5), grim, vals)
    ok = (vals[("coop", "coop")] == (Fraction(15, 2),) * 2 and vals[("punish", "punish")] == (Fraction(5, 2),) * 2
          and all(x == 0 for r in res.values() for x in r))
    return ok, "grim rejected, always-defect accepted, values exact"


def _unique_pd():
    rep = analyze_uniqueness(formats.load_game(fixture("pd_repeated.game")))
    return rep.status == "unique", rep.reason


def _tie_tree():
    t = formats.load_tree(fixture("tie_copies.tree"))
    rep = check_prop3(t)
    ok = rep.status == "counterexample" and not rep.tie_free and is_tree_spne_bruteforce(t, rep.counterexample)
    return ok, rep.status


def _existence(rng, n):
    for _ in range(n):
        game = random_finite_game(rng)
        if not verify_credible(game, construct_credible(game)).passed:
            return False, "constructed profile failed verification"
    return True, f"{n} games"


def _uniqueness(rng, n):
    for _ in range(n):
        game = random_finite_game(rng, stage_maker=random_dominant_stage)
        eqs = enumerate_pure_credible(game)
        rep = analyze_uniqueness(game)
        if len(eqs) != 1 or rep.status != "unique" or eqs[0] != rep.profile:
            return False, "enumeration and uniqueness disagree"
    return True, f"{n} games"


def _oracle(rng, n):
    for _ in range(n):
        game = random_finite_game(rng, players=(2, 2), actions=(2, 2), horizon=(1, 2), stage_maker=random_stage)
        spne = set(enumerate_pure_spne(game))
        if set(enumerate_pure_credible(game)) - spne:
            return False, "credible profile outside SPNE set"
        if spne != set(all_pure_spne_bruteforce(game)):
            return False, "SPNE set differs from brute force"
    return True, f"{n} games"


def _prop3(rng, n):
    for _ in range(n):
        if check_prop3(random_tie_free_tree(rng)).status != "holds":
            return False, "tie-free tree without equivalence"
    return True, f"{n} trees"


def run_selftest(seed: int = 0, n: int = 20) -> list:
    """(name, passed, detail) per check."""
    rng = random.Random(seed)
    checks = [
        ("twice-repeated 3x3: P* is subgame perfect but not credible", _pstar),
        ("non-Nash outcome: credible profile supports a non-Nash outcome", _non_nash),
        ("repeated PD: grim trigger vs always defect", _grim),
        ("repeated PD: unique credible equilibrium", _unique_pd),
        ("tie tree: prop3 counterexample", _tie_tree),
        ("random: constructed profiles are credible", lambda: _existence(rng, n)),
        ("random: dominant stages give one credible profile", lambda: _uniqueness(rng, n)),
        ("random: SPNE enumeration matches brute force", lambda: _oracle(rng, n)),
        ("random: tie-free trees satisfy prop3", lambda: _prop3(rng, n)),
    ]
    out = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as e:  # report, keep going
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append((name, bool(ok), detail))
    return out
