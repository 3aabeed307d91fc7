"""Time the pure-Python kernels against the compiled ones.

    python3 benchmarks/bench_backends.py [--repeat 5]

Each row is the best of ``--repeat`` runs on identical inputs.  Agreement of
the outputs is covered by tests/test_backends.py.
"""
import argparse
import math
import timeit

import numpy as np

from dubins_tsp import _backend
from dubins_tsp.etsp import distance_matrix
from dubins_tsp.instances import GenSpec, generate


def _cases(rng):
    inst = generate(GenSpec(n=9, seed=1, burn_in=200))
    P = inst.array[rng.permutation(9)]
    xs, ys = P[:, 0].copy(), P[:, 1].copy()
    th = rng.uniform(-math.pi, math.pi, 9)
    D = distance_matrix(rng.uniform(0, 10, (9, 2)))
    start = np.ascontiguousarray(generate(GenSpec(seed=2, burn_in=0)).array)
    u = rng.random((100, 9, 2))

    return {
        "best_csc (x1000)": lambda k: [k.best_csc(7.0, 3.0, 0.3, -1.2) for _ in range(1000)],
        "tour_eval n=9 (x100)": lambda k: [k.tour_eval(xs, ys, th, 1.0) for _ in range(100)],
        "descend n=9, 500 iters": lambda k: k.descend(xs, ys, th, 1.0, 0.1, 0.0, 0.0, 500, False),
        "etsp_search n=9": lambda k: k.etsp_search(D, 0.0, math.inf, math.inf, None),
        "hardcore_sweeps n=9, 100": lambda k: k.hardcore_sweeps(start.copy(), 12.0, 4.0, u),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    names = sorted(_backend.BACKENDS)
    if "compiled" not in names:
        print("compiled extension not built; timing the python kernels only")
    cases = _cases(np.random.default_rng(0))

    header = f"{'kernel':<28}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, fn in cases.items():
        times = []
        for name in names:
            k = _backend.BACKENDS[name]
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{label:<28}" + "".join(f"{t * 1e3:>12.3f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[names.index('python')] / times[names.index('compiled')]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
