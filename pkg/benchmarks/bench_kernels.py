"""Time the numba and numpy backends on the three hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles (or loads from cache) and is timed separately.
"""

import argparse
import time

import numpy as np

from thermal_decoherence._backend import HAVE_NUMBA
from thermal_decoherence.greens import radial_rule
from thermal_decoherence.kernels import contracted_sum, planck_pair, transverse_weights_array


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        func()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    u = rng.uniform(0, 100, 1_000_000)
    k, w = radial_rule(60.0)
    n = 20_000
    tau, r = rng.uniform(0, 30, n), rng.uniform(0, 30, n)
    wd, wr = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    a, b = rng.uniform(0, 50, 1_000_000), rng.uniform(0, 50, 1_000_000)
    return {
        "transverse_weights (1e6)": lambda be: transverse_weights_array(u, backend=be),
        f"contracted_sum ({n} x {k.size})": lambda be: contracted_sum(tau, r, wd, wr, k, w, backend=be),
        "planck_pair (1e6)": lambda be: planck_pair(a, b, backend=be),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    print(f"{'kernel':<34}{'backend':<8}{'first (s)':>11}{'best (s)':>11}")
    for name, run in cases(np.random.default_rng(0)).items():
        best = {}
        for be in backends:
            t0 = time.perf_counter()
            run(be)
            first = time.perf_counter() - t0
            best[be] = best_of(lambda: run(be), args.repeat)
            print(f"{name:<34}{be:<8}{first:>11.4f}{best[be]:>11.4f}")
        if len(best) == 2:
            print(f"{'':<34}speedup {best['numpy'] / best['numba']:.1f}x")


if __name__ == "__main__":
    main()
