"""Seeded random instances for property suites and the selftest command."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .model import MultiStageGame, StageGame
from .nash import enumerate_pure_nash
from .tree import GameTree, Node, backward_induction_all

ACTION_NAMES = "abcdefgh"
DELTAS = (Fraction(1), Fraction(1, 2), Fraction(9, 10), Fraction(2, 3))


def _actions(sizes):
    return [tuple(ACTION_NAMES[:k]) for k in sizes]


def random_stage(rng: random.Random, sizes, lo: int = -5, hi: int = 9) -> StageGame:
    acts = _actions(sizes)
    pay = {p: tuple(rng.randint(lo, hi) for _ in sizes) for p in itertools.product(*acts)}
    return StageGame(tuple(str(i + 1) for i in range(len(sizes))), acts, pay)


def random_stage_with_pure_nash(rng: random.Random, sizes, lo: int = -5, hi: int = 9) -> StageGame:
    while True:
        g = random_stage(rng, sizes, lo, hi)
        if enumerate_pure_nash(g):
            return g


def random_dominant_stage(rng: random.Random, sizes, lo: int = -9, hi: int = 9) -> StageGame:
    """Every player has a strictly dominant action (chosen at random)."""
    acts = _actions(sizes)
    n = len(sizes)
    dom = [rng.randrange(k) for k in sizes]
    pay = {p: [None] * n for p in itertools.product(*acts)}
    for i in range(n):
        others = [range(k) for j, k in enumerate(sizes) if j != i]
        for rest in itertools.product(*others):
            vals = rng.sample(range(lo, hi + 1), sizes[i])
            top = max(vals)
            vals.remove(top)
            own = {dom[i]: top}
            for k in range(sizes[i]):
                if k != dom[i]:
                    own[k] = vals.pop()
            for k, v in own.items():
                idx = list(rest[:i]) + [k] + list(rest[i:])
                pay[tuple(acts[j][x] for j, x in enumerate(idx))][i] = v
    return StageGame(tuple(str(i + 1) for i in range(n)), acts, {p: tuple(v) for p, v in pay.items()})


def random_finite_game(rng: random.Random, players=(2, 3), actions=(2, 3), horizon=(1, 3),
                       stage_maker=random_stage_with_pure_nash, max_profiles: int | None = None) -> MultiStageGame:
    n = rng.randint(*players)
    T = rng.randint(*horizon)
    stages = []
    for _ in range(T):
        sizes = [rng.randint(*actions) for _ in range(n)]
        stages.append(stage_maker(rng, sizes))
    return MultiStageGame.finite(stages, rng.choice(DELTAS))


def random_tree(rng: random.Random, max_internal: int = 10, n_players: int = 2,
                branching=(2, 3), lo: int = -50, hi: int = 50) -> GameTree:
    budget = [rng.randint(1, max_internal)]

    def build(depth: int) -> Node:
        if budget[0] <= 0 or (depth > 0 and rng.random() < 0.35):
            return Node.leaf(*(rng.randint(lo, hi) for _ in range(n_players)))
        budget[0] -= 1
        k = rng.randint(*branching)
        return Node.decision(rng.randrange(n_players), [(f"m{j}", build(depth + 1)) for j in range(k)])

    return GameTree(build(0), tuple(f"P{i + 1}" for i in range(n_players)))


def random_tie_free_tree(rng: random.Random, **kw) -> GameTree:
    while True:
        t = random_tree(rng, **kw)
        if backward_induction_all(t).tie_free:
            return t
