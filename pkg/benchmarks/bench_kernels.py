"""Compiled vs pure-numpy grid kernels on the multigrid Poisson solve.

    python benchmarks/bench_kernels.py [--sizes 64,128,256,512] [--repeat 3]

Prints one row per (shape, N): best wall time per backend, the speedup,
and the largest pointwise difference between the two solutions.
"""

import argparse
import time

import numpy as np

from torsionlab import _backend
from torsionlab.geometry import rectangle, triangle
from torsionlab.oracle import poisson_solve


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="64,128,256,512")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    backends = _backend.available()
    if "compiled" not in backends:
        print("compiled extension not built; timing the numpy fallback only")

    shapes = [rectangle(1, 1), rectangle(2, 1), triangle(1), triangle(2)]
    head = f"{'shape':<10}{'N':>6}" + "".join(f"{b + ' [s]':>16}" for b in backends)
    if len(backends) > 1:
        head += f"{'speedup':>10}{'max |diff|':>13}"
    print(head)
    for shape in shapes:
        for N in sizes:
            times, fields = {}, {}
            for name in backends:
                times[name], fields[name] = best_time(
                    lambda name=name: poisson_solve(shape, N, backend=name), args.repeat
                )
            row = f"{shape.literal():<10}{N:>6}" + "".join(f"{times[b]:>16.4f}" for b in backends)
            if len(backends) > 1:
                diff = np.max(np.abs(fields["compiled"].values - fields["python"].values))
                row += f"{times['python'] / times['compiled']:>10.1f}{diff:>13.1e}"
            print(row)


if __name__ == "__main__":
    main()
