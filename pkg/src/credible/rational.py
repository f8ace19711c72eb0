"""Exact rational helpers: parsing, formatting and fraction-free linear solves."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Rat = Fraction
Vector = tuple  # tuple[Fraction, ...], one entry per player


def parse_rat(value) -> Fraction:
    """Parse ``"a/b"``, ``"7"``, ``"-0.25"`` or an int into an exact Fraction.

    Floats are rejected: a binary float is never what a hand-written game
    file means.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational: {value!r}") from None
    raise ValueError(f"not a rational: {value!r}")


def fmt_rat(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(fmt_rat(x) for x in v) + ")"


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vscale(c: Fraction, a: Sequence[Fraction]) -> tuple:
    return tuple(c * x for x in a)


def common_denominator(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        d = common_denominator(row)
        out.append([int(Fraction(x) * d) for x in row])
    return out


def solve_exact(
    a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]
) -> list[list[Fraction]] | None:
    """Solve ``a @ x = b`` exactly for square ``a`` and a block of right-hand sides.

    Rows are scaled to integers, then reduced with Bareiss fraction-free
    elimination, so every intermediate stays an integer. Returns the
    solution as a list of rows (one row per unknown, one column per
    right-hand side), or None when ``a`` is singular.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_exact needs a square system")
    k = len(b[0]) if n else 0
    m = _integer_rows([list(a[i]) + list(b[i]) for i in range(n)])
    prev = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return None
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        for r in range(col + 1, n):
            f = m[r][col]
            row_r, row_c = m[r], m[col]
            for c in range(col + 1, n + k):
                row_r[c] = (p * row_r[c] - f * row_c[c]) // prev
            row_r[col] = 0
        prev = p
    x = [[Fraction(0)] * k for _ in range(n)]
    for r in range(n - 1, -1, -1):
        for j in range(k):
            acc = Fraction(m[r][n + j])
            for c in range(r + 1, n):
                acc -= m[r][c] * x[c][j]
            x[r][j] = acc / m[r][r]
    return x


def rank_exact(a: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a rational matrix (Bareiss elimination, any shape)."""
    if not a:
        return 0
    m = _integer_rows(a)
    rows, cols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, rows):
            f = m[r][col]
            for c in range(col + 1, cols):
                m[r][c] = (p * m[r][c] - f * m[rank][c]) // prev
            m[r][col] = 0
        prev = p
        rank += 1
        if rank == rows:
            break
    return rank
