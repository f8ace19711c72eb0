"""Nash equilibria of single stage games.

Pure equilibria are enumerated for any number of players; mixed ones by
support enumeration for two players, with every linear solve exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .model import CapExceeded, GameError, MixedProfile, Profile, StageGame, check_mixed
from .rational import fmt_rat, rank_exact, solve_exact
from .verdict import NASH_FAILURE, Verdict, Witness

DEFAULT_PROFILE_CAP = 10**6


def deviation_value(g: StageGame, m: MixedProfile, player: int, action: str) -> Fraction:
    """Player's expected payoff from playing ``action`` against the others' part of ``m``."""
    total = Fraction(0)
    for others, p in m.others(player):
        profile = others[:player] + (action,) + others[player + 1:]
        total += p * g.payoff(profile)[player]
    return total


def is_nash(g: StageGame, m: MixedProfile) -> Verdict:
    """Exact Nash test; pure deviations suffice since payoffs are linear in own mixing."""
    check_mixed(g, m)
    witnesses = []
    for i in range(g.n_players):
        current = sum((w * deviation_value(g, m, i, a) for a, w in m.dist[i]), Fraction(0))
        best_a, best_v = None, current
        for a in g.actions[i]:
            v = deviation_value(g, m, i, a)
            if v > best_v:
                best_a, best_v = a, v
        if best_a is not None:
            witnesses.append(Witness(
                NASH_FAILURE, i, (), (current, best_v), action=best_a,
                detail=f"player {g.players[i]} gains {fmt_rat(best_v - current)} by playing {best_a}",
            ))
    return Verdict(tuple(witnesses))


def enumerate_pure_nash(g: StageGame, cap: int = DEFAULT_PROFILE_CAP, backend: str | None = None) -> list:
    """Pure profiles where every action is a best response, in canonical order."""
    if g.n_profiles() > cap:
        raise CapExceeded(f"stage game has {g.n_profiles()} profiles, cap is {cap}")
    profiles = list(g.profiles())
    rows, _ = kernels.integerize([g.payoff(p) for p in profiles])
    return [profiles[f] for f in kernels.pure_nash(rows, g.shape, backend)]


def dominance_solution(g: StageGame) -> Profile | None:
    """The profile left by iterated removal of strictly dominated actions, if it is unique.

    When this returns a profile it is the game's only Nash equilibrium,
    mixed ones included: a strictly dominated action is never played in
    any equilibrium.
    """
    alive = [list(a) for a in g.actions]
    changed = True
    while changed:
        changed = False
        for i in range(g.n_players):
            others = list(itertools.product(*(alive[j] for j in range(g.n_players) if j != i)))

            def u(a, rest, i=i):
                return g.payoff(rest[:i] + (a,) + rest[i:])[i]

            for a in list(alive[i]):
                if any(all(u(b, r) > u(a, r) for r in others) for b in alive[i] if b != a):
                    alive[i].remove(a)
                    changed = True
    if all(len(a) == 1 for a in alive):
        return tuple(a[0] for a in alive)
    return None


@dataclass
class NashSet:
    pure: list = field(default_factory=list)
    mixed: list = field(default_factory=list)
    degenerate: bool = False

    def all(self) -> list:
        """Every equilibrium as a MixedProfile, pure ones first."""
        return [MixedProfile.pure(p) for p in self.pure] + list(self.mixed)

    def __len__(self) -> int:
        return len(self.pure) + len(self.mixed)


_SINGULAR = "singular"


def _indifference(payoff, own_support, other_support):
    """Weights on ``other_support`` that make the owner indifferent over ``own_support``.

    ``payoff(r, c)`` is the owner's payoff. Unknowns are the k weights and
    the common value v. Returns (weights, v); None when the system has no
    solution; ``_SINGULAR`` when it has infinitely many.
    """
    k = len(own_support)
    a = [[Fraction(payoff(r, c)) for c in other_support] + [Fraction(-1)] for r in own_support]
    a.append([Fraction(1)] * k + [Fraction(0)])
    b = [[Fraction(0)] for _ in range(k)] + [[Fraction(1)]]
    sol = solve_exact(a, b)
    if sol is None:
        if rank_exact(a) == rank_exact([row + rhs for row, rhs in zip(a, b)]):
            return _SINGULAR
        return None
    return [row[0] for row in sol[:k]], sol[k][0]


def enumerate_mixed_nash_2p(g: StageGame) -> NashSet:
    """All equilibria of a nondegenerate bimatrix game by support enumeration.

    Pure equilibria come from :func:`enumerate_pure_nash`; mixed ones from
    equal-size supports of size two and up. ``degenerate`` is set when a
    support pair's system has a continuum of solutions, when a solution
    with zero weight inside its support is an equilibrium, or when an
    equilibrium has more best responses than its support size. The census
    may then be incomplete.
    """
    if g.n_players != 2:
        raise GameError("support enumeration needs exactly 2 players")
    rows, cols = g.actions
    A = [[g.payoff((r, c))[0] for c in cols] for r in rows]
    B = [[g.payoff((r, c))[1] for c in cols] for r in rows]
    out = NashSet(pure=enumerate_pure_nash(g))

    for r, c in out.pure:
        ri, ci = rows.index(r), cols.index(c)
        if sum(A[x][ci] == A[ri][ci] for x in range(len(rows))) > 1:
            out.degenerate = True
        if sum(B[ri][y] == B[ri][ci] for y in range(len(cols))) > 1:
            out.degenerate = True

    found = []
    for k in range(2, min(len(rows), len(cols)) + 1):
        for I in itertools.combinations(range(len(rows)), k):
            for J in itertools.combinations(range(len(cols)), k):
                ys = _indifference(lambda r, c: A[r][c], I, J)
                xs = _indifference(lambda c, r: B[r][c], J, I)
                if ys is None or xs is None:
                    continue
                if ys is _SINGULAR or xs is _SINGULAR:
                    out.degenerate = True
                    continue
                (y, u), (x, v) = ys, xs
                if any(w < 0 for w in x + y):
                    continue
                xfull = [Fraction(0)] * len(rows)
                yfull = [Fraction(0)] * len(cols)
                for idx, w in zip(I, x):
                    xfull[idx] = w
                for idx, w in zip(J, y):
                    yfull[idx] = w
                row_vals = [sum(A[r][c] * yfull[c] for c in range(len(cols))) for r in range(len(rows))]
                col_vals = [sum(B[r][c] * xfull[r] for r in range(len(rows))) for c in range(len(cols))]
                if max(row_vals) > u or max(col_vals) > v:
                    continue
                if any(w == 0 for w in x + y):
                    out.degenerate = True
                    continue
                if sum(val == u for val in row_vals) > k or sum(val == v for val in col_vals) > k:
                    out.degenerate = True
                found.append(((I, J), (tuple(xfull), tuple(yfull))))
    found.sort()
    out.mixed = [
        MixedProfile((
            {rows[r]: w for r, w in enumerate(x) if w},
            {cols[c]: w for c, w in enumerate(y) if w},
        ))
        for _, (x, y) in found
    ]
    return out


@dataclass
class UniqueNash:
    """Result of the uniqueness test: ``status`` is "unique", "multiple" or "unknown"."""

    status: str
    equilibria: list = field(default_factory=list)
    reason: str = ""

    @property
    def profile(self) -> MixedProfile | None:
        return self.equilibria[0] if self.status == "unique" else None


def nash_census(g: StageGame) -> NashSet:
    if g.n_players == 2:
        return enumerate_mixed_nash_2p(g)
    return NashSet(pure=enumerate_pure_nash(g))


def has_unique_nash(g: StageGame) -> UniqueNash:
    dom = dominance_solution(g)
    if dom is not None:
        return UniqueNash("unique", [MixedProfile.pure(dom)], "iterated strict dominance")
    census = nash_census(g)
    eqs = census.all()
    if census.degenerate:
        return UniqueNash("unknown", eqs, "degenerate game: support enumeration may be incomplete")
    if len(eqs) >= 2:
        return UniqueNash("multiple", eqs[:2], f"{len(eqs)} equilibria found")
    if g.n_players <= 2 and len(eqs) == 1:
        return UniqueNash("unique", eqs, "complete census")
    if g.n_players >= 3:
        return UniqueNash("unknown", eqs, "mixed equilibria of 3+ player games are not enumerated")
    return UniqueNash("unknown", eqs, "no equilibrium found")


def first_equilibrium(g: StageGame) -> MixedProfile | None:
    """Canonically first stage equilibrium: first pure one, else first mixed (2 players)."""
    pure = enumerate_pure_nash(g)
    if pure:
        return MixedProfile.pure(pure[0])
    if g.n_players == 2:
        mixed = enumerate_mixed_nash_2p(g).mixed
        if mixed:
            return mixed[0]
    return None
