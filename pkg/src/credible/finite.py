"""SPNE and credible-equilibrium verification, enumeration and construction."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .model import (
    DEFAULT_NODE_CAP,
    BehaviorProfile,
    CapExceeded,
    CyclicProfile,
    GameError,
    MixedProfile,
    MultiStageGame,
    UnsupportedHorizon,
    check_total,
    count_histories,
    fmt_history,
    histories_at,
    subgame_values,
)
from .nash import first_equilibrium, has_unique_nash
from .rational import fmt_rat, vadd, vscale
from .verdict import CREDIBILITY_FAILURE, NASH_FAILURE, Verdict, Witness

DEFAULT_OBJECT_CAP = 10**5


class NoStageNashFound(GameError):
    pass


def _require_finite(game: MultiStageGame, what: str) -> None:
    if not game.is_finite:
        raise UnsupportedHorizon(f"{what} needs a finite horizon")


@dataclass
class EquilibriumSet:
    profiles: list = field(default_factory=list)
    truncated: bool = False
    cap: int = DEFAULT_OBJECT_CAP
    note: str = ""

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def __getitem__(self, k):
        return self.profiles[k]

    def __contains__(self, p) -> bool:
        return p in self.profiles


def _continuation(game, values, h, a, t):
    if t == game.horizon:
        return (Fraction(0),) * game.n_players
    return values[h + (a,)]


def _one_shot_witnesses(game: MultiStageGame, p: BehaviorProfile, values: dict) -> list:
    d = game.delta
    out = []
    for h in p.table:
        t = len(h) + 1
        g = game.stage(t)
        m = p[h]
        for i in range(g.n_players):
            current = values[h][i]
            best_a, best_v = None, current
            for a_i in g.actions[i]:
                v = Fraction(0)
                for others, pr in m.others(i):
                    a = others[:i] + (a_i,) + others[i + 1:]
                    v += pr * (g.payoff(a)[i] + d * _continuation(game, values, h, a, t)[i])
                if v > best_v:
                    best_a, best_v = a_i, v
            if best_a is not None:
                out.append(Witness(
                    NASH_FAILURE, i, h, (current, best_v), action=best_a, time=t,
                    detail=f"at {fmt_history(h)} player {g.players[i]} gains "
                           f"{fmt_rat(best_v - current)} by playing {best_a}",
                ))
    return out


def verify_spne(game: MultiStageGame, p: BehaviorProfile, cap: int = DEFAULT_NODE_CAP) -> Verdict:
    """One-shot deviation check at every history (valid for finite additive payoffs)."""
    _require_finite(game, "verify_spne")
    check_total(game, p, cap)
    values = subgame_values(game, p, cap)
    return Verdict(tuple(_one_shot_witnesses(game, p, values)))


def subtable_classes(game: MultiStageGame, p: BehaviorProfile) -> list:
    """Per player, an integer id per history; equal ids mean equal (s_i|g) sub-tables.

    Ids are interned bottom-up from (own action at h, ids of the children),
    so the whole tree is labelled in one pass.
    """
    T = game.horizon
    out = []
    for i in range(game.n_players):
        intern: dict = {}
        ids: dict = {}
        for t in range(T, 0, -1):
            kids = list(game.stage(t).profiles()) if t < T else []
            for h in histories_at(game, t):
                key = (p[h].dist[i], tuple(ids[h + (a,)] for a in kids))
                ids[h] = intern.setdefault(key, len(intern))
        out.append(ids)
    return out


def credibility_witnesses(game: MultiStageGame, p: BehaviorProfile, values: dict) -> list:
    """Condition (ii) violations.

    Histories of one time whose player-i sub-tables coincide form a class.
    With two or more classes every pair across classes must give player i
    the same value, which forces one value on the whole time slice. One
    witness is reported per (time, player), preferring a pair that starts
    at the canonically first history.
    """
    classes = subtable_classes(game, p)
    out = []
    for t in range(2, game.horizon + 1):
        hs = list(histories_at(game, t))
        for i in range(game.n_players):
            label = [classes[i][h] for h in hs]
            if len(set(label)) < 2:
                continue
            val = [values[h][i] for h in hs]
            l0, v0 = label[0], val[0]
            pair = None
            y = next((y for y in range(1, len(hs)) if label[y] != l0 and val[y] != v0), None)
            if y is not None:
                pair = (0, y)
            else:
                x = next((x for x in range(1, len(hs)) if val[x] != v0), None)
                if x is not None:
                    y = next(y for y in range(1, len(hs)) if label[y] != l0)
                    pair = (min(x, y), max(x, y))
            if pair is None:
                continue
            h, h2 = hs[pair[0]], hs[pair[1]]
            out.append(Witness(
                CREDIBILITY_FAILURE, i, h, (values[h][i], values[h2][i]), other=h2, time=t,
                detail=f"player {game.players[i]} plays differently after {fmt_history(h)} "
                       f"and {fmt_history(h2)} but gets {fmt_rat(values[h][i])} vs {fmt_rat(values[h2][i])}",
            ))
    return out


def verify_credible(game: MultiStageGame, p: BehaviorProfile, cap: int = DEFAULT_NODE_CAP) -> Verdict:
    """Subgame perfection plus equal payoffs wherever a player's sub-tables differ."""
    _require_finite(game, "verify_credible")
    check_total(game, p, cap)
    values = subgame_values(game, p, cap)
    ws = _one_shot_witnesses(game, p, values) + credibility_witnesses(game, p, values)
    return Verdict(tuple(ws))


# --- enumeration -----------------------------------------------------------

@dataclass
class _Level:
    """Pure SPNE sub-tables of the subgames starting at one time."""

    profiles: list  # stage profiles, flat order
    objects: list  # (profile index, continuation object per profile or None)
    values: list  # root-normalized value vector per object


def _spne_levels(game: MultiStageGame, cap: int, backend: str | None = None):
    d = game.delta
    levels: list = [None] * (game.horizon + 2)
    truncated = False
    for t in range(game.horizon, 0, -1):
        g = game.stage(t)
        profiles = list(g.profiles())
        P = len(profiles)
        stage = [g.payoff(a) for a in profiles]
        nxt = levels[t + 1]
        if nxt is None:
            rows, _ = kernels.integerize(stage)
            idx = kernels.pure_nash(rows, g.shape, backend)
            if len(idx) > cap:
                idx, truncated = idx[:cap], True
            levels[t] = _Level(profiles, [(a, None) for a in idx], [stage[a] for a in idx])
            continue
        m = len(nxt.objects)
        scaled, _ = kernels.integerize(list(stage) + list(nxt.values))
        su, sw = scaled[:P], scaled[P:]
        orders, counts = kernels.deviation_counts(su, sw, d.numerator, d.denominator, g.shape, backend)
        strides = [1] * g.n_players
        for i in range(g.n_players - 2, -1, -1):
            strides[i] = strides[i + 1] * g.shape[i + 1]
        objects, values = [], []
        full = list(range(m))
        for a in range(P):
            devs = []
            for i in range(g.n_players):
                ai = (a // strides[i]) % g.shape[i]
                devs += [(i, a + (k - ai) * strides[i]) for k in range(g.shape[i]) if k != ai]
            for o in range(m):
                cnt = counts[a][o]
                if any(c == 0 for c in cnt):
                    continue
                choices = [full] * P
                choices[a] = [o]
                for j, (i, dv) in enumerate(devs):
                    choices[dv] = sorted(orders[i][: int(cnt[j])])
                for sigma in itertools.product(*choices):
                    if len(objects) >= cap:
                        truncated = True
                        break
                    objects.append((a, sigma))
                    values.append(vadd(stage[a], vscale(d, nxt.values[o])))
                if truncated:
                    break
            if truncated:
                break
        levels[t] = _Level(profiles, objects, values)
    return levels, truncated


def _materialize(levels, t: int, obj_index: int, root, table: dict) -> None:
    level = levels[t]
    a, sigma = level.objects[obj_index]
    table[root] = MixedProfile.pure(level.profiles[a])
    if sigma is None:
        return
    for b, o in enumerate(sigma):
        _materialize(levels, t + 1, o, root + (level.profiles[b],), table)


def _check_tree_cap(game: MultiStageGame, cap: int) -> None:
    size = count_histories(game)
    if size > cap:
        raise CapExceeded(f"history tree has {size} nodes, cap is {cap}")


def enumerate_pure_spne(game: MultiStageGame, cap: int = DEFAULT_OBJECT_CAP,
                        node_cap: int = DEFAULT_NODE_CAP, backend: str | None = None) -> EquilibriumSet:
    """Every pure-action SPNE table, by backward recursion over sub-table sets.

    A time-t object is a stage profile plus a choice of time-(t+1) object
    for every stage profile; it is kept when the profile is a Nash
    equilibrium of the stage game augmented by the discounted continuation
    values. Deterring continuations for each unilateral deviation form a
    prefix of the deviator's value order, so only consistent selectors are
    generated.
    """
    _require_finite(game, "enumerate_pure_spne")
    _check_tree_cap(game, node_cap)
    levels, truncated = _spne_levels(game, cap, backend)
    out = EquilibriumSet(cap=cap, truncated=truncated)
    for k in range(len(levels[1].objects)):
        table: dict = {}
        _materialize(levels, 1, k, (), table)
        out.profiles.append(BehaviorProfile(table))
    if truncated:
        out.note = f"object cap {cap} reached; the set is a sound but incomplete subset"
    return out


def count_pure_spne(game: MultiStageGame, cap: int = DEFAULT_OBJECT_CAP, backend: str | None = None) -> tuple[int, bool]:
    _require_finite(game, "count_pure_spne")
    levels, truncated = _spne_levels(game, cap, backend)
    return len(levels[1].objects), truncated


def enumerate_pure_credible(game: MultiStageGame, cap: int = DEFAULT_OBJECT_CAP,
                            node_cap: int = DEFAULT_NODE_CAP, backend: str | None = None) -> EquilibriumSet:
    spne = enumerate_pure_spne(game, cap, node_cap, backend)
    out = EquilibriumSet(cap=cap, truncated=spne.truncated, note=spne.note)
    for p in spne.profiles:
        values = subgame_values(game, p, node_cap)
        if not credibility_witnesses(game, p, values):
            out.profiles.append(p)
    return out


# --- construction and uniqueness ------------------------------------------

def _stage_choice(game: MultiStageGame):
    choice = []
    for t, g in game.distinct_stages():
        eq = first_equilibrium(g)
        if eq is None:
            raise NoStageNashFound(
                f"stage game first played at time {t} has no pure equilibrium and "
                f"mixed enumeration is unsupported for {g.n_players} players"
            )
        choice.append((g, eq))
    return choice


def _lookup(choice, g):
    return next(eq for h, eq in choice if h == g)


def construct_credible(game: MultiStageGame, cap: int = DEFAULT_NODE_CAP):
    """History-independent profile playing the canonically first equilibrium of each stage game.

    Equivalent subgames receive identical restrictions, so condition (ii)
    is vacuous. Returns a BehaviorProfile for finite games and a
    CyclicProfile for infinite ones.
    """
    choice = _stage_choice(game)
    if game.is_finite:
        per_stage = [_lookup(choice, g) for g in game.stages]
        return BehaviorProfile.constant(game, per_stage, cap)
    return CyclicProfile(
        tuple(_lookup(choice, g) for g in game.prefix),
        tuple(_lookup(choice, g) for g in game.cycle),
    )


@dataclass
class UniquenessReport:
    """``status``: "unique", "not_applicable" or "unknown"."""

    status: str
    profile: object = None
    stage: int | None = None
    equilibria: list = field(default_factory=list)
    reason: str = ""


def analyze_uniqueness(game: MultiStageGame, cap: int = DEFAULT_NODE_CAP) -> UniquenessReport:
    """Unique credible equilibrium when every stage game has a unique Nash equilibrium."""
    eqs = []
    unknown = None
    for t, g in game.distinct_stages():
        res = has_unique_nash(g)
        if res.status == "multiple":
            return UniquenessReport("not_applicable", stage=t, equilibria=res.equilibria[:2], reason=res.reason)
        if res.status == "unknown" and unknown is None:
            unknown = UniquenessReport("unknown", stage=t, equilibria=res.equilibria, reason=res.reason)
        eqs.append((g, res.profile))
    if unknown is not None:
        return unknown
    if game.is_finite:
        profile = BehaviorProfile.constant(game, [_lookup(eqs, g) for g in game.stages], cap)
    else:
        profile = CyclicProfile(
            tuple(_lookup(eqs, g) for g in game.prefix),
            tuple(_lookup(eqs, g) for g in game.cycle),
        )
    return UniquenessReport("unique", profile=profile, reason="every stage game has a unique equilibrium")
