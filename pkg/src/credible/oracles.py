"""Brute-force reference checks, independent of the solvers they audit.

These enumerate whole contingent strategies instead of relying on
one-shot deviations or backward recursion, so they are exponential and
meant for small instances only.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .model import BehaviorProfile, MixedProfile, MultiStageGame, history_tree
from .tree import GameTree


def _path_payoff(game: MultiStageGame, table: dict, root, player: int, dev: dict | None) -> Fraction:
    """Player's discounted payoff from ``root`` when only ``player`` follows ``dev``."""
    total, disc, h = Fraction(0), Fraction(1), root
    while len(h) < game.horizon:
        a = table[h]
        if dev is not None:
            a = a[:player] + (dev[h],) + a[player + 1:]
        total += disc * game.stage(len(h) + 1).payoff(a)[player]
        disc *= game.delta
        h = h + (a,)
    return total


def is_pure_spne_bruteforce(game: MultiStageGame, table: dict) -> bool:
    """Every subgame, every player, every contingent pure deviation in that subgame."""
    hs = list(history_tree(game))
    for root in sorted(hs, key=len, reverse=True):
        sub = [h for h in hs if h[:len(root)] == root]
        for i in range(game.n_players):
            base = _path_payoff(game, table, root, i, None)
            choices = [game.stage(len(h) + 1).actions[i] for h in sub]
            for combo in itertools.product(*choices):
                if _path_payoff(game, table, root, i, dict(zip(sub, combo))) > base:
                    return False
    return True


def all_pure_spne_bruteforce(game: MultiStageGame) -> list:
    """Every pure behavior table that passes :func:`is_pure_spne_bruteforce`."""
    hs = list(history_tree(game))
    options = [list(game.stage(len(h) + 1).profiles()) for h in hs]
    out = []
    for combo in itertools.product(*options):
        table = dict(zip(hs, combo))
        if is_pure_spne_bruteforce(game, table):
            out.append(BehaviorProfile({h: MixedProfile.pure(a) for h, a in table.items()}))
    return out


def credible_pairs_naive(game: MultiStageGame, p: BehaviorProfile, values: dict) -> bool:
    """Condition (ii) by comparing every same-time pair of histories directly."""
    hs = list(history_tree(game))
    for h, h2 in itertools.combinations(hs, 2):
        if len(h) != len(h2):
            continue
        for i in range(game.n_players):
            if p.restrict_player(h, i) != p.restrict_player(h2, i) and values[h][i] != values[h2][i]:
                return False
    return True


# --- trees -----------------------------------------------------------------

def _play(tree: GameTree, s: dict, at) -> tuple:
    node, path = tree.nodes[at], at
    while not node.is_leaf:
        label = s[path]
        node = dict(node.moves)[label]
        path = path + (label,)
    return node.payoffs


def is_tree_spne_bruteforce(tree: GameTree, s: dict) -> bool:
    """All subgames, all players, all of the player's sub-strategies in the subgame."""
    for root in tree.internal():
        own = {}
        for p in tree.subtree_paths(root):
            nd = tree.nodes[p]
            if not nd.is_leaf:
                own.setdefault(nd.player, []).append(p)
        for i, nodes in own.items():
            base = _play(tree, s, root)[i]
            opts = [[lb for lb, _ in tree.nodes[p].moves] for p in nodes]
            for combo in itertools.product(*opts):
                alt = dict(s)
                alt.update(zip(nodes, combo))
                if _play(tree, alt, root)[i] > base:
                    return False
    return True


def all_tree_spne_bruteforce(tree: GameTree) -> list:
    nodes = tree.internal()
    opts = [[lb for lb, _ in tree.nodes[p].moves] for p in nodes]
    out = []
    for combo in itertools.product(*opts):
        s = dict(zip(nodes, combo))
        if is_tree_spne_bruteforce(tree, s):
            out.append(s)
    return out
