"""Infinitely repeated games with finite-automaton (Moore machine) strategies.

Each player's machine emits a mixed stage action from its current state and
moves on the realized pure action profile. Subgames of the repeated game
correspond to the joint machine state a history leads to.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .model import CapExceeded, GameError, StageGame
from .rational import fmt_rat, solve_exact, vadd, vscale
from .verdict import CREDIBILITY_FAILURE, NASH_FAILURE, Verdict, Witness

DEFAULT_STATE_CAP = 10**4

JointState = tuple


@dataclass(frozen=True)
class PlayerAutomaton:
    states: tuple
    initial: str
    output: dict  # state -> {action: weight}
    transition: dict  # (state, pure profile) -> state

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "output",
            {s: {a: Fraction(w) for a, w in dist.items() if Fraction(w)} for s, dist in self.output.items()},
        )
        object.__setattr__(self, "transition", {(s, tuple(a)): n for (s, a), n in self.transition.items()})

    def check(self, g: StageGame, player: int) -> None:
        if self.initial not in self.states:
            raise GameError(f"initial state {self.initial!r} is not a state")
        for s in self.states:
            dist = self.output.get(s)
            if dist is None:
                raise GameError(f"state {s!r} has no output")
            if any(w < 0 for w in dist.values()) or sum(dist.values()) != 1:
                raise GameError(f"output of state {s!r} is not a probability distribution")
            for a in dist:
                g.action_index(player, a)
            for prof in g.profiles():
                nxt = self.transition.get((s, prof))
                if nxt is None:
                    raise GameError(f"state {s!r} has no transition on ({','.join(prof)})")
                if nxt not in self.states:
                    raise GameError(f"transition from {s!r} leads to unknown state {nxt!r}")


def _check_profile(g: StageGame, profile: Sequence[PlayerAutomaton], delta) -> Fraction:
    if len(profile) != g.n_players:
        raise GameError(f"{len(profile)} automata for {g.n_players} players")
    for i, m in enumerate(profile):
        m.check(g, i)
    delta = Fraction(delta)
    if not 0 <= delta < 1:
        raise GameError("infinite horizon requires 0 <= delta < 1")
    return delta


def joint_states(profile: Sequence[PlayerAutomaton], cap: int = DEFAULT_STATE_CAP) -> list:
    n = 1
    for m in profile:
        n *= len(m.states)
    if n > cap:
        raise CapExceeded(f"{n} joint states, cap is {cap}")
    return list(itertools.product(*(m.states for m in profile)))


def initial_state(profile) -> JointState:
    return tuple(m.initial for m in profile)


def step(profile, q: JointState, a) -> JointState:
    return tuple(m.transition[(s, a)] for m, s in zip(profile, q))


def play_distribution(profile, q: JointState):
    """(pure profile, probability) pairs for the mixed play at joint state ``q``."""
    dists = [sorted(m.output[s].items()) for m, s in zip(profile, q)]
    for combo in itertools.product(*dists):
        p = Fraction(1)
        for _, w in combo:
            p *= w
        yield tuple(a for a, _ in combo), p


def automaton_values(g: StageGame, delta, profile: Sequence[PlayerAutomaton],
                     cap: int = DEFAULT_STATE_CAP) -> dict:
    """Exact discounted values at every joint state (reachable or not).

    Solves ``V(q) - delta * E[V(next(q, a))] = E[u(a)]`` for all players at
    once; the system is nonsingular for delta < 1.
    """
    delta = _check_profile(g, profile, delta)
    qs = joint_states(profile, cap)
    index = {q: k for k, q in enumerate(qs)}
    N, n = len(qs), g.n_players
    A = [[Fraction(0)] * N for _ in range(N)]
    b = [[Fraction(0)] * n for _ in range(N)]
    for k, q in enumerate(qs):
        A[k][k] += 1
        for a, p in play_distribution(profile, q):
            A[k][index[step(profile, q, a)]] -= delta * p
            b[k] = list(vadd(b[k], vscale(p, g.payoff(a))))
    sol = solve_exact(A, b)
    if sol is None:
        raise ArithmeticError("value system is singular")
    return {q: tuple(sol[k]) for k, q in enumerate(qs)}


def bellman_residual(g: StageGame, delta, profile, values: dict) -> dict:
    """``V(q) - E[u(a) + delta V(next)]`` at each joint state; exactly zero for true values."""
    delta = Fraction(delta)
    out = {}
    for q, v in values.items():
        rhs = (Fraction(0),) * g.n_players
        for a, p in play_distribution(profile, q):
            rhs = vadd(rhs, vscale(p, vadd(g.payoff(a), vscale(delta, values[step(profile, q, a)]))))
        out[q] = tuple(x - y for x, y in zip(v, rhs))
    return out


def reachable_states(g: StageGame, profile) -> list:
    """Joint states some history (on- or off-path) leads to, in discovery order."""
    start = initial_state(profile)
    seen, frontier = {start: None}, [start]
    profiles = list(g.profiles())
    while frontier:
        nxt = []
        for q in frontier:
            for a in profiles:
                r = step(profile, q, a)
                if r not in seen:
                    seen[r] = None
                    nxt.append(r)
        frontier = nxt
    return list(seen)


@dataclass(frozen=True)
class ReachableSequence:
    """R_1, R_2, ... stored up to the first repeat: R_t = sets[t-1] for t <= len(sets),
    then periodic with ``period`` from index ``start``."""

    sets: tuple
    start: int
    period: int

    def at(self, t: int) -> frozenset:
        if t < 1:
            raise ValueError("t must be >= 1")
        k = t - 1
        if k < len(self.sets):
            return self.sets[k]
        return self.sets[self.start + (k - self.start) % self.period]


def reachable_sequence(g: StageGame, profile) -> ReachableSequence:
    profiles = list(g.profiles())
    cur = frozenset([initial_state(profile)])
    sets, seen = [], {}
    while cur not in seen:
        seen[cur] = len(sets)
        sets.append(cur)
        cur = frozenset(step(profile, q, a) for q in cur for a in profiles)
    start = seen[cur]
    return ReachableSequence(tuple(sets), start, len(sets) - start)


def reachable_states_at_time(g: StageGame, profile, t: int) -> frozenset:
    """Joint states reached by all length-(t-1) histories, off-path ones included."""
    return reachable_sequence(g, profile).at(t)


def behavior_classes(g: StageGame, machine: PlayerAutomaton) -> dict:
    """Moore-machine minimization: states with identical continuation strategies share a class."""
    profiles = list(g.profiles())
    block = {}
    cls = {s: block.setdefault(tuple(sorted(machine.output[s].items())), len(block)) for s in machine.states}
    while True:
        block = {}
        new = {
            s: block.setdefault((cls[s],) + tuple(cls[machine.transition[(s, a)]] for a in profiles), len(block))
            for s in machine.states
        }
        if len(set(new.values())) == len(set(cls.values())):
            return new
        cls = new


def _one_shot(g, delta, profile, values, states) -> list:
    out = []
    for q in states:
        for i in range(g.n_players):
            others = [
                sorted(m.output[s].items()) if j != i else [(None, Fraction(1))]
                for j, (m, s) in enumerate(zip(profile, q))
            ]
            best_a, best_v = None, values[q][i]
            for a_i in g.actions[i]:
                v = Fraction(0)
                for combo in itertools.product(*others):
                    p = Fraction(1)
                    for _, w in combo:
                        p *= w
                    a = tuple(x for x, _ in combo)
                    a = a[:i] + (a_i,) + a[i + 1:]
                    v += p * (g.payoff(a)[i] + delta * values[step(profile, q, a)][i])
                if v > best_v:
                    best_a, best_v = a_i, v
            if best_a is not None:
                out.append(Witness(
                    NASH_FAILURE, i, q, (values[q][i], best_v), action=best_a,
                    detail=f"at joint state ({','.join(map(str, q))}) player {g.players[i]} gains "
                           f"{fmt_rat(best_v - values[q][i])} by playing {best_a} once",
                ))
    return out


def verify_spne_automaton(g: StageGame, delta, profile, cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """One-shot deviations at every joint state some history reaches."""
    delta = _check_profile(g, profile, delta)
    values = automaton_values(g, delta, profile, cap)
    states = reachable_states(g, profile)
    ws = _one_shot(g, delta, profile, values, states)
    return Verdict(tuple(ws), {"checked_states": len(states)})


def _state_order(profile):
    pos = [{s: k for k, s in enumerate(m.states)} for m in profile]
    return lambda q: tuple(pos[i][s] for i, s in enumerate(q))


def _credibility(g, profile, values, classes, groups) -> list:
    """Witnesses over (time, states) groups; at most one per (group, player)."""
    out = []
    for t, states in groups:
        for i in range(g.n_players):
            label = [classes[i][q[i]] for q in states]
            if len(set(label)) < 2:
                continue
            val = [values[q][i] for q in states]
            pair = None
            for x in range(len(states)):
                y = next((y for y in range(x + 1, len(states)) if label[y] != label[x] and val[y] != val[x]), None)
                if y is not None:
                    pair = (x, y)
                    break
            if pair is None and len(set(val)) > 1:
                x = next(x for x in range(len(states)) if val[x] != val[0])
                y = next(y for y in range(len(states)) if label[y] != label[x])
                pair = (min(x, y), max(x, y))
            if pair is None:
                continue
            q, q2 = states[pair[0]], states[pair[1]]
            when = f"time {t}" if t is not None else "some times"
            out.append(Witness(
                CREDIBILITY_FAILURE, i, q, (values[q][i], values[q2][i]), other=q2, time=t,
                detail=f"at {when} player {g.players[i]} behaves differently in joint states "
                       f"({','.join(map(str, q))}) and ({','.join(map(str, q2))}) but gets "
                       f"{fmt_rat(values[q][i])} vs {fmt_rat(values[q2][i])}",
            ))
    return out


def verify_credible_automaton(g: StageGame, delta, profile, cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Subgame perfection plus equal values across same-time joint states with differing behavior.

    One preperiod plus one period of the reachable-set sequence covers every
    time. The diagnostics record the period certificate and whether pooling
    all times together would change the verdict.
    """
    delta = _check_profile(g, profile, delta)
    values = automaton_values(g, delta, profile, cap)
    reach = reachable_states(g, profile)
    spne = _one_shot(g, delta, profile, values, reach)
    classes = [behavior_classes(g, m) for m in profile]
    seq = reachable_sequence(g, profile)
    order = _state_order(profile)
    groups = [(t, sorted(seq.at(t), key=order)) for t in range(1, len(seq.sets) + 1)]
    cred = _credibility(g, profile, values, classes, groups)
    pooled = _credibility(g, profile, values, classes, [(None, sorted(reach, key=order))])
    passed = not spne and not cred
    diagnostics = {
        "preperiod": seq.start,
        "period": seq.period,
        "checked_states": len(reach),
        "cross_time_changes_verdict": passed != (not spne and not pooled),
    }
    return Verdict(tuple(spne + cred), diagnostics)


# --- presets ---------------------------------------------------------------

def _cooperate_defect(g: StageGame, player: int):
    acts = g.actions[player]
    if len(acts) != 2:
        raise GameError("presets need two actions per player (cooperate first, defect second)")
    return acts[0], acts[1]


def grim_trigger(g: StageGame, player: int) -> PlayerAutomaton:
    """Cooperate until anyone plays anything but all-cooperate, then defect forever."""
    c, d = _cooperate_defect(g, player)
    coop = tuple(_cooperate_defect(g, j)[0] for j in range(g.n_players))
    trans = {}
    for a in g.profiles():
        trans[("coop", a)] = "coop" if a == coop else "punish"
        trans[("punish", a)] = "punish"
    return PlayerAutomaton(("coop", "punish"), "coop", {"coop": {c: 1}, "punish": {d: 1}}, trans)


def always_defect(g: StageGame, player: int) -> PlayerAutomaton:
    _, d = _cooperate_defect(g, player)
    return PlayerAutomaton(("defect",), "defect", {"defect": {d: 1}}, {("defect", a): "defect" for a in g.profiles()})


def tit_for_tat(g: StageGame, player: int) -> PlayerAutomaton:
    if g.n_players != 2:
        raise GameError("tit-for-tat is defined for two players")
    c, d = _cooperate_defect(g, player)
    opp = 1 - player
    opp_c = _cooperate_defect(g, opp)[0]
    trans = {}
    for a in g.profiles():
        nxt = "coop" if a[opp] == opp_c else "defect"
        trans[("coop", a)] = nxt
        trans[("defect", a)] = nxt
    return PlayerAutomaton(("coop", "defect"), "coop", {"coop": {c: 1}, "defect": {d: 1}}, trans)


PRESETS = {
    "grim-trigger": grim_trigger,
    "always-defect": always_defect,
    "tit-for-tat": tit_for_tat,
}


def preset_profile(g: StageGame, name: str) -> list:
    try:
        make = PRESETS[name]
    except KeyError:
        raise GameError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    return [make(g, i) for i in range(g.n_players)]
