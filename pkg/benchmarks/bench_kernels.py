"""
Compare the compiled and pure-Python kernels on the three hot paths:
the N^4 quadrature grid, Monte Carlo point evaluation, and the scalar
S~ calls made by the violation search.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from tempobell import kernels
from tempobell.chsh import maximize_violation_detailed
from tempobell.functionals import family_scenario


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    scenarios = {
        "evolved-initial": family_scenario("evolved-initial", 0.4, 1.1),
        "product-history": family_scenario("product-history", 0.4, 1.1, 0.9, 0.2),
        "entangled-zz": family_scenario("entangled-zz"),
    }
    rng = np.random.default_rng(0)
    points = rng.uniform(0, 2 * np.pi, size=(1_000_000, 4))
    quads = rng.uniform(0, 2 * np.pi, size=(20_000, 8))
    backends = kernels.available_backends()
    if len(backends) == 1:
        print("compiled extension not built; only the python backend is available")

    print(f"{'case':<34}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, s in scenarios.items():
        cases = {
            f"grid N=24 {name}": lambda k: k.grid_probs(24),
            f"1e6 points {name}": lambda k: k.point_probs(points),
            f"2e4 s_tilde {name}": lambda k: [k.s_tilde(q) for q in quads],
        }
        for label, fn in cases.items():
            row = [best_of(lambda: fn(kernels.kernel_for(s, b)), args.repeat) for b in backends]
            line = f"{label:<34}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
            if len(row) > 1:
                line += f"{row[0] / row[1]:>11.1f}x"
            print(line)

    s = scenarios["entangled-zz"]
    row = [best_of(lambda: maximize_violation_detailed(s, restarts=4, backend=b), 1) for b in backends]
    line = f"{'optimizer 4 restarts':<34}" + "".join(f"{t * 1e3:>10.2f}ms" for t in row)
    if len(row) > 1:
        line += f"{row[0] / row[1]:>11.1f}x"
    print(line)


if __name__ == "__main__":
    main()
