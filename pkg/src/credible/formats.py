"""JSON file formats for games, behavior profiles, automata and trees.

Every rational is written as a string ("3", "-1/2"); readers also accept
plain integers. Output is canonical: same object, same bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .automaton import PlayerAutomaton
from .model import BehaviorProfile, GameError, MixedProfile, MultiStageGame, StageGame
from .rational import fmt_rat, parse_rat
from .tree import GameTree, Node


class FormatError(GameError):
    pass


def _at(where: str, msg: str) -> FormatError:
    return FormatError(f"{where}: {msg}")


def _rat(x, where: str) -> Fraction:
    try:
        return parse_rat(x)
    except ValueError as e:
        raise _at(where, str(e)) from None


def _get(d, key, where):
    if not isinstance(d, dict):
        raise _at(where, f"expected an object, got {type(d).__name__}")
    if key not in d:
        raise _at(where, f"missing field {key!r}")
    return d[key]


def read_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def _flat(x) -> bool:
    if isinstance(x, list):
        return all(not isinstance(v, (list, dict)) or (_flat(v) and len(json.dumps(v)) < 30) for v in x)
    if isinstance(x, dict):
        return all(not isinstance(v, (list, dict)) for v in x.values())
    return True


def _render(x, depth: int) -> str:
    if not isinstance(x, (list, dict)) or not x or _flat(x):
        return json.dumps(x, separators=(", ", ": "))
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(x, list):
        body = ",\n".join(inner + _render(v, depth + 1) for v in x)
        return "[\n" + body + "\n" + pad + "]"
    body = ",\n".join(f"{inner}{json.dumps(k)}: {_render(v, depth + 1)}" for k, v in x.items())
    return "{\n" + body + "\n" + pad + "}"


def dumps(obj) -> str:
    """Deterministic JSON with short scalar lists and maps kept on one line."""
    return _render(obj, 0) + "\n"


# --- stage and multi-stage games -------------------------------------------

def stage_from_dict(d, players, where="stage") -> StageGame:
    actions = _get(d, "actions", where)
    if not isinstance(actions, list) or len(actions) != len(players):
        raise _at(f"{where}.actions", f"expected one action list per player ({len(players)})")
    actions = [[str(a) for a in acts] for acts in actions]
    table = _get(d, "payoffs", where)
    payoffs = {}

    def walk(node, depth, prefix, path):
        if depth == len(actions):
            if node is None:
                return
            if not isinstance(node, list):
                raise _at(path, "payoff entry must be a list with one rational per player")
            payoffs[tuple(prefix)] = tuple(_rat(x, f"{path}[{k}]") for k, x in enumerate(node))
            return
        if node is None:
            return
        if not isinstance(node, list):
            raise _at(path, "expected a nested list of payoffs")
        if len(node) > len(actions[depth]):
            raise _at(path, f"{len(node)} entries for {len(actions[depth])} actions of player {players[depth]}")
        for k, child in enumerate(node):
            walk(child, depth + 1, prefix + [actions[depth][k]], f"{path}[{k}]")

    walk(table, 0, [], f"{where}.payoffs")
    return StageGame(tuple(players), tuple(tuple(a) for a in actions), payoffs)


def stage_to_dict(g: StageGame) -> dict:
    def build(depth, prefix):
        if depth == g.n_players:
            v = g.payoffs.get(tuple(prefix))
            return None if v is None else [fmt_rat(x) for x in v]
        return [build(depth + 1, prefix + [a]) for a in g.actions[depth]]

    return {"actions": [list(a) for a in g.actions], "payoffs": build(0, [])}


def game_from_dict(d) -> MultiStageGame:
    players = [str(p) for p in _get(d, "players", "game")]
    delta = _rat(_get(d, "delta", "game"), "game.delta")
    hz = _get(d, "horizon", "game")
    kind = _get(hz, "kind", "game.horizon")
    if kind == "finite":
        stages = [stage_from_dict(s, players, f"horizon.stages[{k}]")
                  for k, s in enumerate(_get(hz, "stages", "game.horizon"))]
        return MultiStageGame.finite(stages, delta)
    if kind == "infinite":
        prefix = [stage_from_dict(s, players, f"horizon.prefix[{k}]") for k, s in enumerate(hz.get("prefix", []))]
        cycle = [stage_from_dict(s, players, f"horizon.cycle[{k}]")
                 for k, s in enumerate(_get(hz, "cycle", "game.horizon"))]
        if not cycle:
            raise _at("game.horizon.cycle", "must not be empty")
        return MultiStageGame.infinite(prefix, cycle, delta)
    raise _at("game.horizon.kind", f"expected 'finite' or 'infinite', got {kind!r}")


def game_to_dict(game: MultiStageGame) -> dict:
    if game.is_finite:
        hz = {"kind": "finite", "stages": [stage_to_dict(g) for g in game.prefix]}
    else:
        hz = {"kind": "infinite", "prefix": [stage_to_dict(g) for g in game.prefix],
              "cycle": [stage_to_dict(g) for g in game.cycle]}
    return {"players": list(game.players), "delta": fmt_rat(game.delta), "horizon": hz}


def load_game(path) -> MultiStageGame:
    return game_from_dict(read_json(path))


def save_game(game: MultiStageGame, path) -> None:
    Path(path).write_text(dumps(game_to_dict(game)))


# --- mixed and behavior profiles --------------------------------------------

def mixed_from_list(lst, where="play") -> MixedProfile:
    if not isinstance(lst, list):
        raise _at(where, "expected one weight map per player")
    maps = []
    for i, w in enumerate(lst):
        if isinstance(w, str):
            maps.append({w: Fraction(1)})
        elif isinstance(w, dict):
            maps.append({str(a): _rat(x, f"{where}[{i}].{a}") for a, x in w.items()})
        else:
            raise _at(f"{where}[{i}]", "expected an action label or a weight map")
    try:
        return MixedProfile.from_weights(maps)
    except GameError as e:
        raise _at(where, str(e)) from None


def mixed_to_list(m: MixedProfile) -> list:
    return [{a: fmt_rat(w) for a, w in d} for d in m.dist]


def profile_from_list(lst) -> BehaviorProfile:
    if not isinstance(lst, list):
        raise FormatError("profile: expected a list of entries")
    table = {}
    for k, e in enumerate(lst):
        where = f"profile[{k}]"
        hist = _get(e, "history", where)
        if not isinstance(hist, list):
            raise _at(f"{where}.history", "expected a list of action profiles")
        h = tuple(tuple(str(a) for a in prof) for prof in hist)
        t = e.get("time", len(h) + 1)
        if t != len(h) + 1:
            raise _at(f"{where}.time", f"time {t} does not match a history of length {len(h)}")
        if h in table:
            raise _at(where, "duplicate history")
        table[h] = mixed_from_list(_get(e, "play", where), f"{where}.play")
    return BehaviorProfile(table)


def profile_to_list(p: BehaviorProfile) -> list:
    return [
        {"time": len(h) + 1, "history": [list(a) for a in h], "play": mixed_to_list(m)}
        for h, m in p.table.items()
    ]


def load_profile(path) -> BehaviorProfile:
    return profile_from_list(read_json(path))


def save_profile(p: BehaviorProfile, path) -> None:
    Path(path).write_text(dumps(profile_to_list(p)))


# --- automata ---------------------------------------------------------------

def automata_from_dict(d, g: StageGame) -> list:
    """Per-player machines; transition keys are comma-joined labels or ``*`` for the default."""
    machines = _get(d, "players", "automata") if isinstance(d, dict) else d
    if not isinstance(machines, list):
        raise FormatError("automata: expected a list of per-player machines")
    out = []
    profiles = list(g.profiles())
    for i, m in enumerate(machines):
        where = f"automata[{i}]"
        states = [str(s) for s in _get(m, "states", where)]
        output = {}
        for s, w in _get(m, "output", where).items():
            if isinstance(w, str):
                output[s] = {w: Fraction(1)}
            else:
                output[s] = {str(a): _rat(x, f"{where}.output.{s}.{a}") for a, x in w.items()}
        trans = {}
        for s, tmap in _get(m, "transition", where).items():
            default = tmap.get("*")
            for prof in profiles:
                key = ",".join(prof)
                nxt = tmap.get(key, default)
                if nxt is not None:
                    trans[(s, prof)] = str(nxt)
            for key in tmap:
                if key != "*" and tuple(key.split(",")) not in profiles:
                    raise _at(f"{where}.transition.{s}", f"{key!r} is not a pure action profile")
        try:
            out.append(PlayerAutomaton(tuple(states), str(_get(m, "initial", where)), output, trans))
        except GameError as e:
            raise _at(where, str(e)) from None
    return out


def automata_to_dict(profile, g: StageGame) -> dict:
    return {
        "players": [
            {
                "states": list(m.states),
                "initial": m.initial,
                "output": {s: {a: fmt_rat(w) for a, w in sorted(m.output[s].items())} for s in m.states},
                "transition": {s: {",".join(a): m.transition[(s, a)] for a in g.profiles()} for s in m.states},
            }
            for m in profile
        ]
    }


def load_automata(path, g: StageGame) -> list:
    return automata_from_dict(read_json(path), g)


# --- trees -------------------------------------------------------------------

def node_from_dict(d, players, where="tree") -> Node:
    if not isinstance(d, dict):
        raise _at(where, "expected a node object")
    if "payoffs" in d:
        pay = d["payoffs"]
        if not isinstance(pay, list):
            raise _at(f"{where}.payoffs", "expected a list")
        return Node(payoffs=tuple(_rat(x, f"{where}.payoffs[{k}]") for k, x in enumerate(pay)))
    mover = _get(d, "player", where)
    if isinstance(mover, str):
        if mover not in players:
            raise _at(f"{where}.player", f"unknown player {mover!r}")
        mover = players.index(mover)
    moves = _get(d, "moves", where)
    if not isinstance(moves, dict) or not moves:
        raise _at(f"{where}.moves", "expected a nonempty map from labels to subtrees")
    for lb in moves:
        if "/" in lb:
            raise _at(f"{where}.moves", f"label {lb!r} may not contain '/'")
    return Node(player=mover, moves=tuple((str(lb), node_from_dict(c, players, f"{where}.{lb}"))
                                          for lb, c in moves.items()))


def tree_from_dict(d) -> GameTree:
    if isinstance(d, dict) and "root" in d:
        players = [str(p) for p in d.get("players", [])]
        root = node_from_dict(d["root"], players, "root")
        return GameTree(root, tuple(players))
    return GameTree(node_from_dict(d, [], "tree"))


def node_to_dict(node: Node, tree: GameTree) -> dict:
    if node.is_leaf:
        return {"payoffs": [fmt_rat(x) for x in node.payoffs]}
    return {"player": tree.players[node.player],
            "moves": {lb: node_to_dict(c, tree) for lb, c in node.moves}}


def tree_to_dict(tree: GameTree) -> dict:
    return {"players": list(tree.players), "root": node_to_dict(tree.root, tree)}


def load_tree(path) -> GameTree:
    try:
        return tree_from_dict(read_json(path))
    except FormatError:
        raise
    except GameError as e:
        raise FormatError(f"{path}: {e}") from None


def strategy_from_dict(d) -> dict:
    """Node addresses are '/'-joined move labels; the root is ''."""
    if not isinstance(d, dict):
        raise FormatError("strategy: expected a map from node address to move label")
    return {tuple(k.split("/")) if k else (): str(v) for k, v in d.items()}


def strategy_to_dict(s: dict) -> dict:
    return {"/".join(k): v for k, v in sorted(s.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def load_strategy(path) -> dict:
    return strategy_from_dict(read_json(path))
