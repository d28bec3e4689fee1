"""Timing comparison of the walker-simulation backends.

Runs the identical workload (same geometry, detunings, walker count,
step, and seed) through the compiled kernel and the vectorized ndarray
fallback, checks that they produced the same trajectories, and reports
walkers per second plus the speedup.

Usage: python3 benchmarks/bench_walkers.py [--walkers N] [--repeat K]
"""

import argparse
import math
import time

import numpy as np

from polariton_sim import mc
from polariton_sim.ramsey import RamseyGeometry, simulate_repeated_interaction


def run_once(geom, Delta, walkers, dt, seed, backend):
    t0 = time.perf_counter()
    result = simulate_repeated_interaction(
        geom, Delta, walkers=walkers, dt=dt, seed=seed, backend=backend
    )
    return time.perf_counter() - t0, result


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--walkers", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--dt", type=float, default=4e-9)
    ap.add_argument("--seed", type=int, default=90210)
    args = ap.parse_args()

    geom = RamseyGeometry(
        dimensionality=1, a=2e-5, b=math.inf, D=1e-3, gamma0=2000.0, gammaP=2000.0
    )
    Delta = np.linspace(0.0, 5.0, 11) * geom.gamma0

    backends = ["numpy"] + (["cython"] if mc.compiled_available() else [])
    if len(backends) == 1:
        print("compiled kernel not built; timing the fallback only")

    best = {}
    results = {}
    for backend in backends:
        times = []
        for _ in range(args.repeat):
            elapsed, result = run_once(
                geom, Delta, args.walkers, args.dt, args.seed, backend
            )
            times.append(elapsed)
            results[backend] = result
        best[backend] = min(times)
        rate = args.walkers / best[backend]
        print(f"{backend:>6}: best of {args.repeat}  {best[backend]:8.3f} s"
              f"  ({rate:10.0f} walkers/s)")

    if len(backends) == 2:
        # libm and ndarray transcendentals round differently in the last
        # ulp, so durations match to ~1e-14 s rather than bit for bit
        cy, np_ = results["cython"].stats, results["numpy"].stats
        same = (
            cy.t_in.size == np_.t_in.size
            and cy.t_out.size == np_.t_out.size
            and np.allclose(cy.t_in, np_.t_in, rtol=0.0, atol=1e-14)
            and np.allclose(cy.t_out, np_.t_out, rtol=0.0, atol=1e-14)
        )
        print(f"trajectories equivalent (to 1e-14 s): {same}")
        print(f"speedup: {best['numpy'] / best['cython']:.1f}x")
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
