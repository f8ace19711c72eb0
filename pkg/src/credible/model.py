"""Game representations, payoff evaluation and subgame vocabulary.

Pure action profiles are tuples of action labels, one per player. A history
is a tuple of the pure profiles realized so far, so the subgame it roots
starts at ``time = len(history) + 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence, Union

from .rational import fmt_rat, vadd, vscale

Profile = tuple  # tuple[str, ...]
History = tuple  # tuple[Profile, ...]

DEFAULT_NODE_CAP = 10**6


class GameError(ValueError):
    """A game, profile or history does not fit the game it is used with."""


class CapExceeded(RuntimeError):
    """A size limit was hit; the requested result would not be complete."""


class UnsupportedHorizon(GameError):
    pass


@dataclass(frozen=True, eq=True)
class StageGame:
    """Finite normal-form game with exact payoffs.

    ``payoffs`` maps each pure profile to one Fraction per player. Use
    :func:`validate_game` to check that the map is total; construction
    does not insist on it so that broken files can still be reported on.
    """

    players: tuple
    actions: tuple
    payoffs: Mapping = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "actions", tuple(tuple(a) for a in self.actions))
        object.__setattr__(
            self,
            "payoffs",
            {tuple(p): tuple(Fraction(x) for x in v) for p, v in self.payoffs.items()},
        )

    @classmethod
    def from_table(cls, actions, table, players=None) -> "StageGame":
        """Build from a nested list indexed player-major, leaves being payoff vectors."""
        actions = [tuple(a) for a in actions]
        if players is None:
            players = tuple(str(i + 1) for i in range(len(actions)))
        payoffs = {}
        for idx in itertools.product(*(range(len(a)) for a in actions)):
            node = table
            for j in idx:
                node = node[j]
            payoffs[tuple(actions[i][j] for i, j in enumerate(idx))] = tuple(node)
        return cls(players, actions, payoffs)

    @classmethod
    def bimatrix(cls, row_actions, col_actions, rows, players=("row", "col")) -> "StageGame":
        return cls.from_table([row_actions, col_actions], rows, players)

    @property
    def n_players(self) -> int:
        return len(self.players)

    @property
    def shape(self) -> tuple:
        return tuple(len(a) for a in self.actions)

    def n_profiles(self) -> int:
        n = 1
        for a in self.actions:
            n *= len(a)
        return n

    def profiles(self) -> Iterator[Profile]:
        """All pure profiles, player 0 most significant."""
        return itertools.product(*self.actions)

    def payoff(self, profile: Profile) -> tuple:
        try:
            return self.payoffs[profile]
        except KeyError:
            raise GameError(f"no payoff for profile {profile}") from None

    def action_index(self, player: int, action: str) -> int:
        try:
            return self.actions[player].index(action)
        except ValueError:
            raise GameError(f"{action!r} is not an action of player {self.players[player]}") from None

    def profile_key(self, profile: Profile) -> tuple:
        return tuple(self.action_index(i, a) for i, a in enumerate(profile))

    def check_profile(self, profile: Profile) -> Profile:
        profile = tuple(profile)
        if len(profile) != self.n_players:
            raise GameError(f"profile {profile} has {len(profile)} entries, expected {self.n_players}")
        self.profile_key(profile)
        return profile


@dataclass(frozen=True)
class MixedProfile:
    """One probability map per player, zero weights dropped, labels sorted."""

    dist: tuple

    def __post_init__(self):
        norm = []
        for i, weights in enumerate(self.dist):
            items = dict(weights).items() if not isinstance(weights, dict) else weights.items()
            clean = {}
            for a, w in items:
                w = Fraction(w)
                if w < 0:
                    raise GameError(f"negative weight {fmt_rat(w)} on {a!r} for player {i}")
                if w:
                    clean[a] = clean.get(a, Fraction(0)) + w
            if sum(clean.values(), Fraction(0)) != 1:
                raise GameError(f"weights of player {i} do not sum to 1")
            norm.append(tuple(sorted(clean.items())))
        object.__setattr__(self, "dist", tuple(norm))

    @classmethod
    def pure(cls, profile: Profile) -> "MixedProfile":
        return cls(tuple({a: 1} for a in profile))

    @classmethod
    def from_weights(cls, weights: Sequence[Mapping]) -> "MixedProfile":
        return cls(tuple(dict(w) for w in weights))

    @property
    def n_players(self) -> int:
        return len(self.dist)

    def weights(self, player: int) -> dict:
        return dict(self.dist[player])

    def prob(self, player: int, action: str) -> Fraction:
        for a, w in self.dist[player]:
            if a == action:
                return w
        return Fraction(0)

    def support(self, player: int) -> tuple:
        return tuple(a for a, _ in self.dist[player])

    @property
    def is_pure(self) -> bool:
        return all(len(d) == 1 for d in self.dist)

    def pure_profile(self) -> Profile | None:
        if not self.is_pure:
            return None
        return tuple(d[0][0] for d in self.dist)

    def outcomes(self) -> Iterator[tuple[Profile, Fraction]]:
        """Pure profiles in the support with their product probabilities."""
        for combo in itertools.product(*self.dist):
            p = Fraction(1)
            for _, w in combo:
                p *= w
            yield tuple(a for a, _ in combo), p

    def others(self, player: int) -> Iterator[tuple[Profile, Fraction]]:
        """Support of the opponents' joint play; ``profile[player]`` is a None placeholder."""
        parts = [d if i != player else ((None, Fraction(1)),) for i, d in enumerate(self.dist)]
        for combo in itertools.product(*parts):
            p = Fraction(1)
            for _, w in combo:
                p *= w
            yield tuple(a for a, _ in combo), p

    def __str__(self) -> str:
        if self.is_pure:
            return "(" + ",".join(self.pure_profile()) + ")"
        parts = []
        for d in self.dist:
            if len(d) == 1:
                parts.append(d[0][0])
            else:
                parts.append(" ".join(f"{a}:{fmt_rat(w)}" for a, w in d))
        return "(" + ", ".join(parts) + ")"


def check_mixed(g: StageGame, m: MixedProfile) -> None:
    if m.n_players != g.n_players:
        raise GameError(f"profile has {m.n_players} players, game has {g.n_players}")
    for i in range(g.n_players):
        for a in m.support(i):
            g.action_index(i, a)


def expected_stage_payoff(g: StageGame, m: MixedProfile) -> tuple:
    """Exact expected payoff vector under the product distribution ``m``."""
    check_mixed(g, m)
    total = (Fraction(0),) * g.n_players
    for profile, p in m.outcomes():
        total = vadd(total, vscale(p, g.payoff(profile)))
    return total


@dataclass(frozen=True)
class MultiStageGame:
    """Discount factor plus a stage schedule.

    A finite game has an empty ``cycle`` and plays ``prefix`` once. An
    infinite game plays ``prefix`` and then repeats ``cycle`` forever.
    """

    delta: Fraction
    prefix: tuple
    cycle: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))

    @classmethod
    def finite(cls, stages, delta=1) -> "MultiStageGame":
        return cls(Fraction(delta), tuple(stages))

    @classmethod
    def infinite(cls, prefix, cycle, delta) -> "MultiStageGame":
        return cls(Fraction(delta), tuple(prefix), tuple(cycle))

    @classmethod
    def repeated(cls, g: StageGame, times: int | None, delta) -> "MultiStageGame":
        """``times`` repetitions of ``g``; ``None`` repeats it forever."""
        if times is None:
            return cls.infinite((), (g,), delta)
        return cls.finite((g,) * times, delta)

    @property
    def is_finite(self) -> bool:
        return not self.cycle

    @property
    def horizon(self) -> int | None:
        return len(self.prefix) if self.is_finite else None

    @property
    def stages(self) -> tuple:
        if not self.is_finite:
            raise UnsupportedHorizon("infinite-horizon game has no finite stage list")
        return self.prefix

    @property
    def players(self) -> tuple:
        first = (self.prefix + self.cycle)[0]
        return first.players

    @property
    def n_players(self) -> int:
        return len(self.players)

    def stage(self, t: int) -> StageGame:
        """Stage game played at time ``t`` (1-based)."""
        if t < 1:
            raise GameError(f"time {t} < 1")
        if t <= len(self.prefix):
            return self.prefix[t - 1]
        if self.is_finite:
            raise GameError(f"time {t} is beyond the horizon {len(self.prefix)}")
        return self.cycle[(t - 1 - len(self.prefix)) % len(self.cycle)]

    def distinct_stages(self) -> list[tuple[int, StageGame]]:
        """(first time played, game) for each distinct stage game in the schedule."""
        seen: list[tuple[int, StageGame]] = []
        for t, g in enumerate(self.prefix + self.cycle, start=1):
            if not any(g == h for _, h in seen):
                seen.append((t, g))
        return seen


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


def validate_stage(g: StageGame, where: str = "stage") -> list[str]:
    out = []
    if g.n_players < 1:
        out.append(f"{where}: no players")
    if len(g.actions) != g.n_players:
        out.append(f"{where}: {len(g.actions)} action lists for {g.n_players} players")
        return out
    for i, acts in enumerate(g.actions):
        if not acts:
            out.append(f"{where}: player {g.players[i]} has no actions")
        if len(set(acts)) != len(acts):
            out.append(f"{where}: player {g.players[i]} has duplicate action labels")
    missing = [p for p in g.profiles() if p not in g.payoffs]
    if missing:
        shown = ", ".join("(" + ",".join(p) + ")" for p in missing[:5])
        more = "" if len(missing) <= 5 else f" and {len(missing) - 5} more"
        out.append(f"{where}: payoff map not total: missing {shown}{more}")
    for p, v in g.payoffs.items():
        if len(v) != g.n_players:
            out.append(f"{where}: payoff vector for {p} has {len(v)} entries, expected {g.n_players}")
            break
    return out


def validate_game(game: MultiStageGame) -> ValidationReport:
    rep = ValidationReport()
    d = game.delta
    if game.is_finite:
        if not game.prefix:
            rep.violations.append("finite horizon needs at least one stage")
        if not 0 <= d <= 1:
            rep.violations.append(f"delta {fmt_rat(d)} outside [0, 1]")
    elif not 0 <= d < 1:
        rep.violations.append("infinite horizon requires delta < 1" if d >= 1 else f"delta {fmt_rat(d)} < 0")
    schedule = [("prefix" if game.cycle else "stage", i, g) for i, g in enumerate(game.prefix, 1)]
    schedule += [("cycle", i, g) for i, g in enumerate(game.cycle, 1)]
    if schedule:
        players = schedule[0][2].players
        for kind, i, g in schedule:
            where = f"{kind} {i}"
            if g.players != players:
                rep.violations.append(f"{where}: player set {list(g.players)} differs from {list(players)}")
            rep.violations.extend(validate_stage(g, where))
    return rep


# --- histories -------------------------------------------------------------

def histories_at(game: MultiStageGame, t: int) -> Iterator[History]:
    """Every history of length t-1 in canonical (lexicographic) order."""
    return itertools.product(*(list(game.stage(s).profiles()) for s in range(1, t)))


def count_histories(game: MultiStageGame) -> int:
    total, level = 0, 1
    for g in game.stages:
        total += level
        level *= g.n_profiles()
    return total


def history_tree(game: MultiStageGame, cap: int = DEFAULT_NODE_CAP) -> Iterator[History]:
    """All histories of a finite game, time-major then lexicographic."""
    size = count_histories(game)
    if size > cap:
        raise CapExceeded(f"history tree has {size} nodes, cap is {cap}")
    for t in range(1, game.horizon + 1):
        yield from histories_at(game, t)


def check_history(game: MultiStageGame, h: History) -> History:
    h = tuple(tuple(p) for p in h)
    if game.is_finite and len(h) >= game.horizon + 1:
        raise GameError(f"history of length {len(h)} is beyond the horizon {game.horizon}")
    for s, p in enumerate(h, start=1):
        game.stage(s).check_profile(p)
    return h


def subgames_equivalent(game: MultiStageGame, h: History, h2: History) -> bool:
    """Subgames are equivalent exactly when they start at the same time."""
    return len(check_history(game, h)) == len(check_history(game, h2))


def fmt_history(h: History) -> str:
    if not h:
        return "()"
    return " ".join("(" + ",".join(p) + ")" for p in h)


# --- behavior profiles -----------------------------------------------------

@dataclass(frozen=True)
class BehaviorProfile:
    """Total table from histories to the mixed stage action played there."""

    table: Mapping = field(hash=False)

    def __post_init__(self):
        clean = {}
        for h, m in self.table.items():
            h = tuple(tuple(p) for p in h)
            clean[h] = m if isinstance(m, MixedProfile) else MixedProfile.pure(m)
        object.__setattr__(self, "table", dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @classmethod
    def from_function(cls, game: MultiStageGame, fn: Callable, cap: int = DEFAULT_NODE_CAP) -> "BehaviorProfile":
        """Tabulate ``fn(history)`` (a MixedProfile or a pure profile) over the tree."""
        return cls({h: fn(h) for h in history_tree(game, cap)})

    @classmethod
    def constant(cls, game: MultiStageGame, per_stage: Sequence, cap: int = DEFAULT_NODE_CAP) -> "BehaviorProfile":
        """History-independent profile playing ``per_stage[t-1]`` at time t."""
        return cls.from_function(game, lambda h: per_stage[len(h)], cap)

    def __getitem__(self, h: History) -> MixedProfile:
        return self.table[h]

    def __len__(self) -> int:
        return len(self.table)

    def __eq__(self, other) -> bool:
        return isinstance(other, BehaviorProfile) and self.table == other.table

    @property
    def is_pure(self) -> bool:
        return all(m.is_pure for m in self.table.values())

    def key(self) -> tuple:
        """Hashable canonical form (histories in canonical order)."""
        return tuple(self.table.items())

    def __hash__(self):
        return hash(self.key())

    def restrict(self, root: History) -> dict:
        """(s|g): the sub-table of the subgame rooted at ``root``, keyed by relative history."""
        k = len(root)
        return {h[k:]: m for h, m in self.table.items() if h[:k] == root}

    def restrict_player(self, root: History, player: int) -> tuple:
        """Player's part of (s|g) as a hashable tuple in canonical order."""
        k = len(root)
        return tuple((h[k:], m.dist[player]) for h, m in self.table.items() if h[:k] == root)


def check_total(game: MultiStageGame, p: BehaviorProfile, cap: int = DEFAULT_NODE_CAP) -> None:
    for h in history_tree(game, cap):
        m = p.table.get(h)
        if m is None:
            raise GameError(f"profile has no entry for history {fmt_history(h)}")
        check_mixed(game.stage(len(h) + 1), m)
    extra = len(p.table) - count_histories(game)
    if extra:
        raise GameError(f"profile has {extra} entries outside the history tree")


def subgame_values(game: MultiStageGame, p: BehaviorProfile, cap: int = DEFAULT_NODE_CAP) -> dict:
    """u(s|g) for every history of a finite game, exponent 0 at each subgame root."""
    T = game.horizon
    d = game.delta
    zero = (Fraction(0),) * game.n_players
    values: dict = {}
    for t in range(T, 0, -1):
        g = game.stage(t)
        for h in histories_at(game, t):
            v = zero
            for a, pr in p[h].outcomes():
                cont = values[h + (a,)] if t < T else zero
                v = vadd(v, vscale(pr, vadd(g.payoff(a), vscale(d, cont))))
            values[h] = v
    if len(values) > cap:
        raise CapExceeded(f"history tree has {len(values)} nodes, cap is {cap}")
    return values


def discounted_payoff(game: MultiStageGame, p: BehaviorProfile, root: History = ()) -> tuple:
    """Discounted expected payoff of the subgame rooted at ``root``."""
    if not game.is_finite:
        raise UnsupportedHorizon("discounted_payoff needs a finite horizon; use the automaton module")
    root = check_history(game, root)
    T, d = game.horizon, game.delta
    zero = (Fraction(0),) * game.n_players
    cache: dict = {}

    def value(h: History) -> tuple:
        if h in cache:
            return cache[h]
        t = len(h) + 1
        try:
            m = p[h]
        except KeyError:
            raise GameError(f"profile has no entry for history {fmt_history(h)}") from None
        g = game.stage(t)
        v = zero
        for a, pr in m.outcomes():
            cont = value(h + (a,)) if t < T else zero
            v = vadd(v, vscale(pr, vadd(g.payoff(a), vscale(d, cont))))
        cache[h] = v
        return v

    return value(root)


@dataclass(frozen=True)
class CyclicProfile:
    """History-independent profile for a prefix+cycle schedule."""

    prefix: tuple
    cycle: tuple = ()

    def at(self, t: int) -> MixedProfile:
        if t <= len(self.prefix):
            return self.prefix[t - 1]
        return self.cycle[(t - 1 - len(self.prefix)) % len(self.cycle)]


StrategyLike = Union[BehaviorProfile, CyclicProfile]
