"""Command-line entry point.

Exit codes: 0 success or pass, 1 verdict failure, 2 input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import formats
from .automaton import (
    PRESETS,
    automaton_values,
    bellman_residual,
    preset_profile,
    reachable_sequence,
    verify_credible_automaton,
    verify_spne_automaton,
)
from .finite import (
    DEFAULT_OBJECT_CAP,
    analyze_uniqueness,
    construct_credible,
    enumerate_pure_credible,
    enumerate_pure_spne,
    verify_credible,
    verify_spne,
)
from .model import (
    BehaviorProfile,
    CapExceeded,
    CyclicProfile,
    GameError,
    MixedProfile,
    MultiStageGame,
    fmt_history,
    validate_game,
)
from .nash import has_unique_nash, is_nash, nash_census
from .rational import fmt_rat, fmt_vec, parse_rat
from .tree import backward_induction_all, check_prop3, fmt_strategy, spne_witnesses, verify_credible_tree
from .verdict import Verdict

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    paths: list = field(default_factory=list)
    cap: int | None = None
    output: str = "human"
    seed: int = 0
    delta: object = None

    def __post_init__(self):
        if self.cap is not None and self.cap <= 0:
            raise InputError("--cap must be positive")
        for p in self.paths:
            if p is not None and not Path(p).exists() and p not in PRESETS:
                raise InputError(f"{p}: no such file")


# --- rendering ---------------------------------------------------------------

def _mixed(m: MixedProfile) -> str:
    return str(m)


def _mixed_json(m: MixedProfile) -> list:
    return formats.mixed_to_list(m)


def describe_schedule(per_time: list, cycle: list | None = None) -> str:
    """'always (D,D)' for a constant schedule, otherwise one entry per time."""
    everything = list(per_time) + list(cycle or [])
    if everything and all(m == everything[0] for m in everything):
        return f"always {_mixed(everything[0])}"
    parts = [f"t={t}: {_mixed(m)}" for t, m in enumerate(per_time, 1)]
    if cycle:
        parts.append("then repeat [" + ", ".join(_mixed(m) for m in cycle) + "]")
    return "; ".join(parts)


def _stationary_parts(game: MultiStageGame, p) -> tuple[list, list | None]:
    if isinstance(p, CyclicProfile):
        return list(p.prefix), list(p.cycle)
    per_time = [p[next(h for h in p.table if len(h) == t - 1)] for t in range(1, game.horizon + 1)]
    return per_time, None


def profile_lines(p: BehaviorProfile) -> list:
    return [f"  t={len(h) + 1} after {fmt_history(h)}: {_mixed(m)}" for h, m in p.table.items()]


def verdict_lines(v: Verdict) -> list:
    lines = ["PASS" if v.passed else "FAIL"]
    for w in v.witnesses:
        lines.append(f"  [{w.kind}] {w.detail}")
    for k, val in v.diagnostics.items():
        lines.append(f"  {k}: {val}")
    return lines


class Out:
    def __init__(self, mode: str, stream):
        self.mode, self.stream = mode, stream
        self.data: dict = {}
        self.lines: list = []

    def line(self, s: str = "") -> None:
        self.lines.append(s)

    def flush(self) -> None:
        if self.mode == "structured":
            self.stream.write(json.dumps(self.data, indent=2, sort_keys=True) + "\n")
        else:
            self.stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


# --- loading -------------------------------------------------------------------

def _load_game(path, delta=None) -> MultiStageGame:
    game = formats.load_game(path)
    if delta is not None:
        game = MultiStageGame(parse_rat(delta), game.prefix, game.cycle)
    rep = validate_game(game)
    if not rep.ok:
        raise InputError(f"{path}: invalid game\n" + "\n".join("  " + v for v in rep.violations))
    return game


def _need(path, what):
    if path is None:
        raise InputError(f"missing {what} argument")
    return path


# --- commands ------------------------------------------------------------------

def cmd_nash(args, out: Out) -> int:
    game = _load_game(args.game, args.delta)
    stages = game.distinct_stages()
    if args.stage is not None:
        stages = [(args.stage, game.stage(args.stage))]
    code = EXIT_OK
    out.data["stages"] = []
    for t, g in stages:
        census = nash_census(g)
        uniq = has_unique_nash(g)
        entry = {
            "time": t,
            "pure": [list(p) for p in census.pure],
            "mixed": [_mixed_json(m) for m in census.mixed],
            "degenerate": census.degenerate,
            "uniqueness": uniq.status,
        }
        out.line(f"stage game at t={t}:")
        out.line("  pure equilibria: " + (", ".join("(" + ",".join(p) + ")" for p in census.pure) or "none"))
        if g.n_players == 2:
            out.line("  mixed equilibria: " + (", ".join(_mixed(m) for m in census.mixed) or "none"))
        else:
            out.line("  mixed equilibria: not enumerated for 3+ players")
        out.line(f"  degenerate: {'yes' if census.degenerate else 'no'}")
        out.line(f"  uniqueness: {uniq.status} ({uniq.reason})")
        if args.check:
            prof = tuple(x.strip() for x in args.check.split(","))
            v = is_nash(g, MixedProfile.pure(g.check_profile(prof)))
            entry["check"] = {"profile": list(prof), **v.to_dict()}
            out.line(f"  is ({','.join(prof)}) a Nash equilibrium? {'yes' if v.passed else 'no'}")
            for w in v.witnesses:
                out.line(f"    {w.detail} ({fmt_rat(w.payoffs[1])} vs {fmt_rat(w.payoffs[0])})")
            if not v.passed:
                code = EXIT_FAIL
        out.data["stages"].append(entry)
    return code


def _verdict(out: Out, v: Verdict, title: str) -> int:
    out.data["verdict"] = v.to_dict()
    out.line(f"{title}: " + "\n".join(verdict_lines(v)))
    return EXIT_OK if v.passed else EXIT_FAIL


def _equilibria(out: Out, eqs, title: str) -> int:
    out.data["count"] = len(eqs)
    out.data["truncated"] = eqs.truncated
    out.data["profiles"] = [formats.profile_to_list(p) for p in eqs]
    out.line(f"{title}: {len(eqs)}" + (" (truncated: cap reached, set incomplete)" if eqs.truncated else ""))
    for k, p in enumerate(eqs, 1):
        out.line(f"profile {k}:")
        out.lines.extend(profile_lines(p))
    return EXIT_CAP if eqs.truncated else EXIT_OK


def cmd_spne(args, out: Out) -> int:
    game = _load_game(args.game, args.delta)
    if args.action == "verify":
        p = formats.load_profile(_need(args.profile, "profile"))
        return _verdict(out, verify_spne(game, p), "subgame perfect")
    cap = args.cap or DEFAULT_OBJECT_CAP
    return _equilibria(out, enumerate_pure_spne(game, cap), "pure SPNE")


def cmd_credible(args, out: Out) -> int:
    game = _load_game(args.game, args.delta)
    if args.action == "verify":
        p = formats.load_profile(_need(args.profile, "profile"))
        return _verdict(out, verify_credible(game, p), "credible equilibrium")
    if args.action == "enumerate":
        cap = args.cap or DEFAULT_OBJECT_CAP
        return _equilibria(out, enumerate_pure_credible(game, cap), "pure credible equilibria")
    p = construct_credible(game)
    if isinstance(p, BehaviorProfile):
        out.data["profile"] = formats.profile_to_list(p)
        v = verify_credible(game, p)
        out.data["verdict"] = v.to_dict()
    else:
        out.data["prefix"] = [_mixed_json(m) for m in p.prefix]
        out.data["cycle"] = [_mixed_json(m) for m in p.cycle]
    per_time, cycle = _stationary_parts(game, p)
    out.data["summary"] = describe_schedule(per_time, cycle)
    out.line(f"constructed credible equilibrium: {describe_schedule(per_time, cycle)}")
    return EXIT_OK


def cmd_unique(args, out: Out) -> int:
    game = _load_game(args.game, args.delta)
    rep = analyze_uniqueness(game)
    out.data["status"] = rep.status
    out.data["reason"] = rep.reason
    if rep.status == "unique":
        per_time, cycle = _stationary_parts(game, rep.profile)
        text = describe_schedule(per_time, cycle)
        out.data["summary"] = text
        out.line(f"unique credible equilibrium: {text}")
        return EXIT_OK
    out.data["stage"] = rep.stage
    out.data["equilibria"] = [_mixed_json(m) for m in rep.equilibria]
    if rep.status == "not_applicable":
        out.line(f"uniqueness condition fails at t={rep.stage}: stage game has several equilibria, e.g. "
                 + " and ".join(_mixed(m) for m in rep.equilibria))
    else:
        out.line(f"uniqueness unknown at t={rep.stage}: {rep.reason}")
    return EXIT_FAIL


def _repeated_stage(game: MultiStageGame):
    if not game.is_finite and not game.prefix and len(game.cycle) == 1:
        return game.cycle[0]
    if game.is_finite and len(game.prefix) == 1:
        return game.prefix[0]
    raise InputError("automaton analysis needs a repeated game: an infinite horizon with one cycle stage")


def cmd_auto(args, out: Out) -> int:
    game = formats.load_game(args.game)
    g = _repeated_stage(game)
    delta = parse_rat(args.delta) if args.delta is not None else game.delta
    if not 0 <= delta < 1:
        raise InputError("infinite horizon requires delta < 1")
    src = _need(args.automata, "automata")
    profile = preset_profile(g, src) if src in PRESETS and not Path(src).exists() else formats.load_automata(src, g)
    out.data["delta"] = fmt_rat(delta)
    if args.action == "values":
        vals = automaton_values(g, delta, profile)
        res = bellman_residual(g, delta, profile, vals)
        seq = reachable_sequence(g, profile)
        out.data["values"] = {",".join(q): [fmt_rat(x) for x in v] for q, v in vals.items()}
        out.data["bellman_residual_zero"] = all(x == 0 for r in res.values() for x in r)
        out.data["reachable"] = {"preperiod": seq.start, "period": seq.period}
        out.line(f"discounted values at delta={fmt_rat(delta)}:")
        for q, v in vals.items():
            out.line(f"  ({','.join(q)}): {fmt_vec(v)}")
        out.line(f"  Bellman residual exactly zero: {out.data['bellman_residual_zero']}")
        return EXIT_OK
    if args.action == "spne":
        return _verdict(out, verify_spne_automaton(g, delta, profile), "subgame perfect")
    return _verdict(out, verify_credible_automaton(g, delta, profile), "credible equilibrium")


def cmd_tree(args, out: Out) -> int:
    tree = formats.load_tree(args.tree)
    cap = args.cap or 10**5
    if args.action == "prop3":
        rep = check_prop3(tree, cap)
        out.data.update({"status": rep.status, "tie_free": rep.tie_free, "n_spne": rep.n_spne, "reason": rep.reason})
        out.line(f"perfect-information equivalence: {rep.status} ({rep.reason})")
        out.line(f"  tree is {'tie-free (generic)' if rep.tie_free else 'degenerate (payoff ties)'}; {rep.n_spne} SPNE")
        if rep.status == "counterexample":
            out.data["counterexample"] = formats.strategy_to_dict(rep.counterexample)
            out.data["verdict"] = rep.verdict.to_dict()
            out.line("  counterexample SPNE:")
            out.lines.extend("    " + ln for ln in fmt_strategy(tree, rep.counterexample).splitlines())
            out.lines.extend("  " + ln for ln in verdict_lines(rep.verdict)[1:])
            return EXIT_FAIL
        return EXIT_OK if rep.status == "holds" else EXIT_CAP
    if args.strategy is None:
        sols = backward_induction_all(tree, cap)
        strategies = sols.strategies
        if args.action == "credible":
            strategies = [s for s in strategies if verify_credible_tree(tree, s).passed]
        out.data.update({"count": len(strategies), "truncated": sols.truncated, "tie_free": sols.tie_free,
                         "strategies": [formats.strategy_to_dict(s) for s in strategies]})
        out.line(f"{'SPNE' if args.action == 'spne' else 'credible SPNE'}: {len(strategies)}"
                 + (" (truncated)" if sols.truncated else ""))
        for k, s in enumerate(strategies, 1):
            out.line(f"strategy {k}:")
            out.lines.extend("  " + ln for ln in fmt_strategy(tree, s).splitlines())
        return EXIT_CAP if sols.truncated else EXIT_OK
    s = tree.check_strategy(formats.load_strategy(args.strategy))
    if args.action == "spne":
        return _verdict(out, Verdict(tuple(spne_witnesses(tree, s))), "subgame perfect")
    return _verdict(out, verify_credible_tree(tree, s), "credible equilibrium")


def cmd_selftest(args, out: Out) -> int:
    from .selftest import run_selftest

    results = run_selftest(seed=args.seed)
    out.data["results"] = [{"name": n, "pass": ok, "detail": d} for n, ok, d in results]
    for name, ok, detail in results:
        out.line(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


# --- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", help="override the discount factor (a/b)")
    common.add_argument("--cap", type=int, help="enumeration cap")
    common.add_argument("--format", choices=("human", "structured"), default="human")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="credible", description="Credible-equilibrium solver and verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nash", parents=[common], help="stage-game Nash census")
    p.add_argument("game")
    p.add_argument("--stage", type=int, help="only the stage game at this time")
    p.add_argument("--check", help="test a pure profile, e.g. B,B")
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("spne", parents=[common], help="verify or enumerate pure SPNE")
    p.add_argument("action", choices=("verify", "enumerate"))
    p.add_argument("game")
    p.add_argument("profile", nargs="?")
    p.set_defaults(func=cmd_spne)

    p = sub.add_parser("credible", parents=[common], help="verify, enumerate or construct credible equilibria")
    p.add_argument("action", choices=("verify", "enumerate", "construct"))
    p.add_argument("game")
    p.add_argument("profile", nargs="?")
    p.set_defaults(func=cmd_credible)

    p = sub.add_parser("unique", parents=[common], help="uniqueness analysis from stage-game uniqueness")
    p.add_argument("game")
    p.set_defaults(func=cmd_unique)

    p = sub.add_parser("auto", parents=[common], help="repeated game with automaton strategies")
    p.add_argument("action", choices=("values", "spne", "credible"))
    p.add_argument("game")
    p.add_argument("automata", help="automata file or preset: " + ", ".join(PRESETS))
    p.set_defaults(func=cmd_auto)

    p = sub.add_parser("tree", parents=[common], help="perfect-information game trees")
    p.add_argument("action", choices=("spne", "credible", "prop3"))
    p.add_argument("tree")
    p.add_argument("strategy", nargs="?")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("selftest", parents=[common], help="worked-example fixtures and randomized property suites")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    out = Out(args.format, stdout)
    try:
        paths = [getattr(args, k, None) for k in ("game", "profile", "automata", "tree", "strategy")]
        RunConfig(args.command, [p for p in paths if p is not None], args.cap, args.format, args.seed, args.delta)
        code = args.func(args, out)
    except CapExceeded as e:
        stderr.write(f"cap exceeded: {e}\n")
        return EXIT_CAP
    except (InputError, GameError, ValueError, OSError) as e:
        stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    out.flush()
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
