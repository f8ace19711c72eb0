"""Pure-Python kernels; the reference path and the fallback for huge integers.

Inputs are integer-scaled payoffs, so every comparison is exact. Arrays may
be numpy int64 or object dtype (arbitrary-size Python ints).
"""

from bisect import bisect_right


def _strides(shape):
    strides = [1] * len(shape)
    for i in range(len(shape) - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]
    return strides


def pure_nash(payoffs, shape):
    """Flat indices (ascending) of the pure profiles where nobody gains by deviating."""
    rows = payoffs.tolist() if hasattr(payoffs, "tolist") else payoffs
    shape = [int(s) for s in shape]
    n = len(shape)
    strides = _strides(shape)
    total = len(rows)
    ok = [True] * total
    for i in range(n):
        st, k = strides[i], shape[i]
        block = st * k
        for hi in range(0, total, block):
            for lo in range(st):
                base = hi + lo
                best = max(rows[base + j * st][i] for j in range(k))
                for j in range(k):
                    f = base + j * st
                    if rows[f][i] < best:
                        ok[f] = False
    return [f for f in range(total) if ok[f]]


def deviation_counts(stage, cont, dnum, dden, shape, sorted_scaled):
    """Number of continuation objects each unilateral deviation may be sent to.

    For a profile ``a`` whose own continuation is object ``o``, a deviation
    ``d`` by player ``i`` is deterred by continuation ``o2`` iff
    ``dden*u_i(d) + dnum*W_i(o2) <= dden*u_i(a) + dnum*W_i(o)``. The deterring
    objects form a prefix of player i's ascending order, so its length is
    all the caller needs. Returns ``counts[a][o][j]`` where ``j`` runs over
    players, then over that player's alternative actions in order.
    """
    stage = stage.tolist() if hasattr(stage, "tolist") else stage
    cont = cont.tolist() if hasattr(cont, "tolist") else cont
    sorted_scaled = sorted_scaled.tolist() if hasattr(sorted_scaled, "tolist") else sorted_scaled
    shape = [int(s) for s in shape]
    n = len(shape)
    strides = _strides(shape)
    out = []
    for a in range(len(stage)):
        devs = []
        for i in range(n):
            ai = (a // strides[i]) % shape[i]
            for k in range(shape[i]):
                if k != ai:
                    devs.append((i, a + (k - ai) * strides[i]))
        per_o = []
        for o in range(len(cont)):
            row = []
            for i, d in devs:
                thr = dden * (stage[a][i] - stage[d][i]) + dnum * cont[o][i]
                row.append(bisect_right(sorted_scaled[i], thr))
            per_o.append(row)
        out.append(per_o)
    return out
