"""Hot combinatorial kernels with a compiled core and a pure-Python fallback.

The compiled module is used when it was built and the integer-scaled
inputs fit comfortably in int64; otherwise the pure-Python twin runs on
arbitrary-size ints. Set ``CREDIBLE_KERNELS=python`` to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from ..rational import common_denominator
from . import _pure

try:
    from . import _fast
except ImportError:  # extension not built
    _fast = None

BACKEND = "compiled" if _fast is not None and os.environ.get("CREDIBLE_KERNELS") != "python" else "python"

# Headroom for dden*u + dnum*W without wrapping.
_INT64_SAFE = 2**61


def integerize(rows) -> tuple[list[list[int]], int]:
    """Scale rational rows by their common denominator; returns (int rows, scale)."""
    scale = common_denominator(x for row in rows for x in row)
    return [[int(Fraction(x) * scale) for x in row] for row in rows], scale


def _fits(*arrays, mult: int = 1) -> bool:
    for rows in arrays:
        for row in rows:
            for x in row:
                if abs(x) * mult >= _INT64_SAFE:
                    return False
    return True


def pure_nash(rows: list[list[int]], shape, backend: str | None = None) -> list[int]:
    backend = backend or BACKEND
    if backend == "compiled" and _fast is not None and _fits(rows):
        return _fast.pure_nash(np.asarray(rows, dtype=np.int64).reshape(len(rows), len(shape)), shape)
    return _pure.pure_nash(rows, shape)


def deviation_counts(stage: list[list[int]], cont: list[list[int]], dnum: int, dden: int, shape,
                     backend: str | None = None):
    """Per-player ascending continuation orders plus the deterrence counts.

    Returns ``(orders, counts)``: ``orders[i]`` lists continuation object
    indices sorted by player i's value (ties by index) and
    ``counts[a][o][j]`` is how many leading entries of the deviator's order
    deter deviation ``j`` from profile ``a`` when ``a`` continues with ``o``.
    """
    backend = backend or BACKEND
    n = len(shape)
    orders = [sorted(range(len(cont)), key=lambda o, i=i: (cont[o][i], o)) for i in range(n)]
    scaled = [[dnum * cont[o][i] for o in orders[i]] for i in range(n)]
    mult = max(dnum, dden, 1) * 2
    if backend == "compiled" and _fast is not None and mult < _INT64_SAFE and _fits(stage, cont, mult=mult):
        counts = _fast.deviation_counts(
            np.asarray(stage, dtype=np.int64).reshape(len(stage), n),
            np.asarray(cont, dtype=np.int64).reshape(len(cont), n),
            dnum, dden, shape,
            np.asarray(scaled, dtype=np.int64).reshape(n, len(cont)),
        )
        return orders, counts
    return orders, _pure.deviation_counts(stage, cont, dnum, dden, shape, scaled)
