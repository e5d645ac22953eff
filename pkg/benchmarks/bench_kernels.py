"""Compare the numba kernels with their pure-numpy twins.

Usage::

    python3 benchmarks/bench_kernels.py [--states 2000] [--theta-steps 72] [--repeat 3]

Each backend is warmed up once (this triggers numba compilation) and then
timed on the same seeds. Results are checked for agreement before timing is
reported.
"""

import argparse
import time

import numpy as np

from dissension._kernels import get_backend
from dissension.sweep import theta_grid


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench(states, theta_steps, repeat):
    thetas = theta_grid(theta_steps)
    seeds = np.arange(states, dtype=np.uint64)
    rng = np.random.default_rng(0)
    herm = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    herm = herm + herm.conj().T
    rows = []
    results = {}
    for name in ("numba", "numpy"):
        k = get_backend(name)
        k.sweep_batch(seeds[:2], 8, thetas)  # warm-up / compile
        k.jacobi_eigh(herm)
        t_sweep, out = _time(lambda: k.sweep_batch(seeds, 8, thetas), repeat)
        t_eig, _ = _time(lambda: [k.jacobi_eigh(herm) for _ in range(1000)], repeat)
        results[name] = out
        rows.append((name, t_sweep, states * theta_steps / t_sweep, t_eig * 1e3))
    gap = max(np.abs(a - b).max() for a, b in zip(results["numba"][:4], results["numpy"][:4]))
    print(f"{'backend':8} {'sweep s':>9} {'evals/s':>12} {'1000 eigh ms':>13}")
    for name, ts, rate, te in rows:
        print(f"{name:8} {ts:9.3f} {rate:12.0f} {te:13.1f}")
    print(f"speed-up (sweep): {rows[1][1] / rows[0][1]:.1f}x; max backend difference {gap:.2e}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--states", type=int, default=2000)
    p.add_argument("--theta-steps", type=int, default=72)
    p.add_argument("--repeat", type=int, default=3)
    a = p.parse_args()
    bench(a.states, a.theta_steps, a.repeat)


if __name__ == "__main__":
    main()
