"""Perfect-information game trees: backward induction, subtree equivalence, credibility.

Nodes are addressed by the tuple of action labels on the path from the
root. A TreeStrategy maps every internal node's address to the label it
chooses.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .model import CapExceeded, GameError
from .rational import fmt_rat, fmt_vec
from .verdict import CREDIBILITY_FAILURE, NASH_FAILURE, Verdict, Witness

DEFAULT_PROFILE_CAP = 10**5

Path = tuple


class AmbiguousIsomorphism(GameError):
    """Two equivalent subtrees admit several matchings and the choice decides the verdict."""


@dataclass(frozen=True)
class Node:
    player: int | None = None
    moves: tuple = ()  # ((label, Node), ...)
    payoffs: tuple | None = None

    @property
    def is_leaf(self) -> bool:
        return self.payoffs is not None

    @classmethod
    def leaf(cls, *payoffs) -> "Node":
        return cls(payoffs=tuple(Fraction(x) for x in payoffs))

    @classmethod
    def decision(cls, player: int, moves) -> "Node":
        items = tuple(moves.items()) if isinstance(moves, dict) else tuple(moves)
        return cls(player=player, moves=items)


@dataclass
class GameTree:
    root: Node
    players: tuple = ()
    nodes: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.nodes = {}
        self._index(self.root, ())
        if not self.players:
            n = max(len(nd.payoffs) for nd in self.nodes.values() if nd.is_leaf)
            self.players = tuple(str(i + 1) for i in range(n))
        self.players = tuple(self.players)
        self._validate()

    def _index(self, node: Node, path: Path) -> None:
        self.nodes[path] = node
        for label, child in node.moves:
            self._index(child, path + (label,))

    def _validate(self) -> None:
        n = len(self.players)
        for path, node in self.nodes.items():
            where = "/".join(path) or "root"
            if node.is_leaf:
                if node.moves:
                    raise GameError(f"{where}: a node cannot have both payoffs and moves")
                if len(node.payoffs) != n:
                    raise GameError(f"{where}: payoff vector has {len(node.payoffs)} entries, expected {n}")
            else:
                if not node.moves:
                    raise GameError(f"{where}: decision node without moves")
                if node.player is None or not 0 <= node.player < n:
                    raise GameError(f"{where}: mover {node.player!r} is not a player")
                labels = [lb for lb, _ in node.moves]
                if len(set(labels)) != len(labels):
                    raise GameError(f"{where}: duplicate move labels")

    @property
    def n_players(self) -> int:
        return len(self.players)

    def internal(self) -> list:
        """Internal node addresses in preorder."""
        return [p for p, nd in self.nodes.items() if not nd.is_leaf]

    def subtree_paths(self, root: Path) -> list:
        k = len(root)
        return [p for p in self.nodes if p[:k] == root]

    def check_strategy(self, s: dict) -> dict:
        s = {tuple(k): v for k, v in s.items()}
        for p in self.internal():
            if p not in s:
                raise GameError(f"strategy has no choice at {'/'.join(p) or 'root'}")
            if s[p] not in dict(self.nodes[p].moves):
                raise GameError(f"{s[p]!r} is not a move at {'/'.join(p) or 'root'}")
        return s


def outcome(tree: GameTree, s: dict, at: Path = ()) -> tuple:
    """Payoff vector reached from node ``at`` when everyone follows ``s``."""
    node, path = tree.nodes[at], at
    while not node.is_leaf:
        label = s[path]
        node = dict(node.moves)[label]
        path = path + (label,)
    return node.payoffs


@dataclass
class TreeEquilibria:
    strategies: list
    truncated: bool = False
    tie_free: bool = True


def backward_induction_all(tree: GameTree, cap: int = DEFAULT_PROFILE_CAP) -> TreeEquilibria:
    """Every pure SPNE.

    Each node keeps a list of (sub-strategy, value) pairs: for every
    combination of its children's solutions, any child maximizing the
    mover's value may be chosen. Tie choices below a node can change the
    other players' values above it, which is why whole solutions are
    carried rather than one value per node.
    """
    state = {"truncated": False, "tie_free": True}

    def solve(node: Node, path: Path) -> list:
        if node.is_leaf:
            return [({}, node.payoffs)]
        kids = [(label, solve(child, path + (label,))) for label, child in node.moves]
        out = []
        for combo in itertools.product(*(sols for _, sols in kids)):
            vals = [v for _, v in combo]
            best = max(v[node.player] for v in vals)
            winners = [k for k, v in enumerate(vals) if v[node.player] == best]
            if len(winners) > 1:
                state["tie_free"] = False
            merged = {}
            for sub, _ in combo:
                merged.update(sub)
            for k in winners:
                if len(out) >= cap:
                    state["truncated"] = True
                    return out
                strat = dict(merged)
                strat[path] = kids[k][0]
                out.append((strat, vals[k]))
        return out

    sols = solve(tree.root, ())
    return TreeEquilibria([s for s, _ in sols], state["truncated"], state["tie_free"])


def canonical_forms(tree: GameTree) -> dict:
    """Label-free canonical form of every subtree: children sorted, action labels erased."""
    forms: dict = {}

    def walk(node: Node, path: Path):
        if node.is_leaf:
            f = ("leaf", node.payoffs)
        else:
            kids = tuple(sorted(walk(c, path + (lb,)) for lb, c in node.moves))
            f = ("node", node.player, kids)
        forms[path] = f
        return f

    walk(tree.root, ())
    return forms


@dataclass(frozen=True)
class EquivClass:
    digest: str
    roots: tuple


def _digest(form) -> str:
    return hashlib.sha256(repr(form).encode()).hexdigest()[:16]


def equivalent_subgame_classes(tree: GameTree) -> list:
    """Partition of all subtree roots (preorder) by canonical form."""
    forms = canonical_forms(tree)
    groups: dict = {}
    for path in tree.nodes:
        groups.setdefault(forms[path], []).append(path)
    return [EquivClass(_digest(f), tuple(roots)) for f, roots in groups.items()]


def _correspondence(tree: GameTree, forms: dict, r: Path, r2: Path) -> tuple[dict, bool]:
    """Node matching of two equivalent subtrees by sorted canonical child order.

    Returns (mapping, ambiguous) where ambiguous means some node had two
    children with identical forms, so other matchings exist too.
    """
    mapping, ambiguous = {}, False
    stack = [(r, r2)]
    while stack:
        a, b = stack.pop()
        mapping[a] = b
        na, nb = tree.nodes[a], tree.nodes[b]
        if na.is_leaf:
            continue
        ka = sorted((forms[a + (lb,)], k, lb) for k, (lb, _) in enumerate(na.moves))
        kb = sorted((forms[b + (lb,)], k, lb) for k, (lb, _) in enumerate(nb.moves))
        fa = [f for f, _, _ in ka]
        if len(set(fa)) != len(fa):
            ambiguous = True
        for (_, _, la), (_, _, lb) in zip(ka, kb):
            stack.append((a + (la,), b + (lb,)))
    return mapping, ambiguous


def _player_form(tree: GameTree, forms: dict, s: dict, root: Path, player: int):
    """Canonical form of the subtree annotated with ``player``'s choices only."""

    def walk(path: Path):
        node = tree.nodes[path]
        if node.is_leaf:
            return forms[path]
        kids = [(walk(path + (lb,)), lb) for lb, _ in node.moves]
        chosen = None
        if node.player == player:
            chosen = next(f for f, lb in kids if lb == s[path])
        return ("node", node.player, tuple(sorted(f for f, _ in kids)), chosen)

    return walk(root)


def spne_witnesses(tree: GameTree, s: dict) -> list:
    out = []
    for path in tree.internal():
        node = tree.nodes[path]
        i = node.player
        current = outcome(tree, s, path)[i]
        best_lb, best_v = None, current
        for lb, _ in node.moves:
            v = outcome(tree, s, path + (lb,))[i]
            if v > best_v:
                best_lb, best_v = lb, v
        if best_lb is not None:
            out.append(Witness(
                NASH_FAILURE, i, path, (current, best_v), action=best_lb,
                detail=f"at {'/'.join(path) or 'root'} player {tree.players[i]} gains "
                       f"{fmt_rat(best_v - current)} by choosing {best_lb}",
            ))
    return out


def verify_credible_tree(tree: GameTree, s: dict) -> Verdict:
    """SPNE check plus equal payoffs for players whose play differs across equivalent subtrees.

    Raises AmbiguousIsomorphism when a player's restrictions differ under
    the canonical matching but agree under another one.
    """
    s = tree.check_strategy(s)
    ws = spne_witnesses(tree, s)
    forms = canonical_forms(tree)
    for cls in equivalent_subgame_classes(tree):
        roots = [r for r in cls.roots if not tree.nodes[r].is_leaf]
        for r, r2 in itertools.combinations(roots, 2):
            mapping, ambiguous = _correspondence(tree, forms, r, r2)
            u, u2 = outcome(tree, s, r), outcome(tree, s, r2)
            for i in range(tree.n_players):
                differs = any(
                    mapping[a + (s[a],)] != b + (s[b],)
                    for a, b in mapping.items()
                    if not tree.nodes[a].is_leaf and tree.nodes[a].player == i
                )
                if not differs or u[i] == u2[i]:
                    continue
                # equal payoffs satisfy the condition under any matching
                if ambiguous and _player_form(tree, forms, s, r, i) == _player_form(tree, forms, s, r2, i):
                    raise AmbiguousIsomorphism(
                        f"subtrees {'/'.join(r) or 'root'} and {'/'.join(r2) or 'root'} match in several "
                        f"ways and player {tree.players[i]}'s play agrees under some but not the canonical one"
                    )
                ws.append(Witness(
                    CREDIBILITY_FAILURE, i, r, (u[i], u2[i]), other=r2,
                    detail=f"player {tree.players[i]} plays differently in equivalent subtrees "
                           f"{'/'.join(r) or 'root'} and {'/'.join(r2) or 'root'} but gets "
                           f"{fmt_rat(u[i])} vs {fmt_rat(u2[i])}",
                ))
    return Verdict(tuple(ws))


@dataclass
class Prop3Report:
    """``status``: "holds", "counterexample" or "unknown"."""

    status: str
    tie_free: bool
    n_spne: int
    counterexample: dict | None = None
    verdict: Verdict | None = None
    reason: str = ""


def check_prop3(tree: GameTree, cap: int = DEFAULT_PROFILE_CAP) -> Prop3Report:
    """Check that every SPNE of the tree is credible.

    Tie-free trees have a single SPNE whose choices are determined by the
    subtree alone, so equivalent subtrees get matching play and the check
    holds structurally; with ties, a counterexample may exist.
    """
    sols = backward_induction_all(tree, cap)
    ambiguous = 0
    for s in sols.strategies:
        try:
            v = verify_credible_tree(tree, s)
        except AmbiguousIsomorphism:
            ambiguous += 1
            continue
        if not v.passed:
            return Prop3Report("counterexample", sols.tie_free, len(sols.strategies), s, v,
                               "an SPNE violates the credibility condition (payoff ties present)")
    if sols.truncated:
        return Prop3Report("unknown", sols.tie_free, len(sols.strategies), reason="SPNE enumeration truncated")
    if ambiguous:
        return Prop3Report("unknown", sols.tie_free, len(sols.strategies),
                           reason=f"{ambiguous} SPNE with ambiguous subtree matching")
    reason = "tie-free: unique SPNE, certified structurally" if sols.tie_free else "all SPNE checked"
    return Prop3Report("holds", sols.tie_free, len(sols.strategies), reason=reason)


def fmt_strategy(tree: GameTree, s: dict) -> str:
    lines = []
    for path in tree.internal():
        who = tree.players[tree.nodes[path].player]
        lines.append(f"{'/'.join(path) or '<root>'} [{who}] -> {s[path]}")
    return "\n".join(lines)


def fmt_tree(tree: GameTree) -> str:
    """Deterministic indented rendering."""
    lines = []

    def walk(node: Node, label: str, depth: int):
        pad = "  " * depth
        if node.is_leaf:
            lines.append(f"{pad}{label} -> {fmt_vec(node.payoffs)}")
        else:
            lines.append(f"{pad}{label} [{tree.players[node.player]}]")
            for lb, child in node.moves:
                walk(child, lb, depth + 1)

    walk(tree.root, "<root>", 0)
    return "\n".join(lines)
