"""Compiled vs pure-Python kernels on the workloads the solvers generate.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from credible import MultiStageGame, enumerate_pure_spne, kernels
from credible.random_games import random_stage


def _stage(rng, shape):
    return [[rng.randint(-50, 50) for _ in shape] for _ in range(_size(shape))]


def _size(shape):
    n = 1
    for k in shape:
        n *= k
    return n


def cases(rng):
    for shape in [(8, 8), (20, 20), (6, 6, 6), (4, 4, 4, 4)]:
        rows = _stage(rng, shape)
        yield f"pure_nash {'x'.join(map(str, shape))}", lambda b, r=rows, s=shape: kernels.pure_nash(r, s, b)
    for shape, n_cont in [((3, 3), 200), ((4, 4), 500), ((3, 3, 3), 300)]:
        stage = _stage(rng, shape)
        cont = [[rng.randint(-200, 200) for _ in shape] for _ in range(n_cont)]
        yield (f"deviation_counts {'x'.join(map(str, shape))}, {n_cont} continuations",
               lambda b, st=stage, c=cont, s=shape: kernels.deviation_counts(st, c, 9, 10, s, b))
    g = MultiStageGame.repeated(random_stage(rng, [3, 3]), 2, 1)
    yield "enumerate_pure_spne twice-repeated 3x3", lambda b, g=g: enumerate_pure_spne(g, cap=2000, backend=b)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels._fast is None:
        print("compiled kernels not built; only the pure-Python backend is available")
        return
    rng = random.Random(args.seed)
    print(f"{'workload':48} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for name, fn in cases(rng):
        py = min(timeit.repeat(lambda: fn("python"), number=1, repeat=args.repeat)) * 1e3
        cc = min(timeit.repeat(lambda: fn("compiled"), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:48} {py:10.2f} {cc:12.2f} {py / cc:7.1f}x")


if __name__ == "__main__":
    main()
