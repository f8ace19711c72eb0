"""Pass/fail results carrying concrete, hand-checkable witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rational import fmt_rat

NASH_FAILURE = "NashFailure"
CREDIBILITY_FAILURE = "CredibilityFailure"


def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_rat(x)
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


@dataclass(frozen=True)
class Witness:
    """One violation.

    For a Nash failure ``payoffs`` is (value as prescribed, value after the
    deviation to ``action``). For a credibility failure it is the player's
    value at ``history`` and at ``other``.
    """

    kind: str
    player: int
    history: object
    payoffs: tuple
    other: object = None
    action: object = None
    detail: str = ""
    time: int | None = None

    @property
    def gap(self) -> Fraction:
        return self.payoffs[1] - self.payoffs[0]

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "player": self.player,
            "history": _jsonable(self.history),
            "payoffs": _jsonable(self.payoffs),
            "detail": self.detail,
        }
        if self.other is not None:
            d["other_history"] = _jsonable(self.other)
        if self.action is not None:
            d["action"] = _jsonable(self.action)
        if self.time is not None:
            d["time"] = self.time
        return d


@dataclass(frozen=True)
class Verdict:
    witnesses: tuple = ()
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.passed

    def of_kind(self, kind: str) -> list:
        return [w for w in self.witnesses if w.kind == kind]

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "diagnostics": _jsonable(self.diagnostics),
        }
