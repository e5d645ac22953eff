"""Random-state sweeps over the basis angle and the negative-D_RC witness search.

States are evaluated in fixed-size chunks of consecutive seeds. Chunks go to a
process pool but are consumed in seed order, so output never depends on the
number of workers.
"""

import json
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .correlation import dissension_drc
from .errors import ConvergenceError, RankError
from .states import random_density

CHUNK = 2000
NEGATIVE_TOL = 1e-6
SWEEP_HEADER = "seed,purity,theta,drc,delta1,delta2"


def theta_grid(steps, endpoint=False, hi=2.0 * np.pi):
    """``steps`` angles on ``[0, hi)`` (or ``[0, hi]`` with ``endpoint``)."""
    if steps < 1:
        raise ValueError("theta grid needs at least one point")
    if endpoint:
        return np.linspace(0.0, hi, steps)
    return hi * np.arange(steps) / steps


def fmt(x):
    return "%.12g" % x


def default_jobs():
    return os.cpu_count() or 1


def _seeds(seed0, start, stop):
    # seed arithmetic wraps modulo 2**64 like the generator state
    idx = np.arange(start, stop, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return np.uint64(seed0) + idx


def _chunks(n, size=CHUNK):
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def _check_rank(rank):
    if not 1 <= rank <= 8:
        raise RankError(f"rank must lie in [1, 8], got {rank}")


def _evaluate(seeds, rank, thetas):
    purity, drc, d1, d2, ok = _kernels.sweep_batch(seeds, rank, thetas)
    if not ok:
        raise ConvergenceError("Jacobi iteration did not converge inside the sweep kernel")
    return purity, drc, d1, d2


def format_rows(seeds, purity, thetas, drc, d1, d2):
    theta_s = [fmt(t) for t in thetas]
    out = []
    for i, seed in enumerate(seeds.tolist()):
        prefix = "%d,%s," % (seed, fmt(purity[i]))
        out.extend(
            "%s%s,%.12g,%.12g,%.12g\n" % (prefix, ts, a, b, c)
            for ts, a, b, c in zip(theta_s, drc[i].tolist(), d1[i].tolist(), d2[i].tolist())
        )
    return "".join(out)


def _sweep_chunk(args):
    seed0, lo, hi, rank, thetas = args
    seeds = _seeds(seed0, lo, hi)
    purity, drc, d1, d2 = _evaluate(seeds, rank, thetas)
    text = format_rows(seeds, purity, thetas, drc, d1, d2)
    echo = float(np.max(np.abs(drc - d1 - d2))) if drc.size else 0.0
    return text, int(np.sum(drc < -NEGATIVE_TOL)), float(drc.min()), float(drc.max()), echo


def _run(fn, tasks, jobs):
    if jobs <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield fn(t)
        return
    # bounded window of in-flight chunks; results are yielded in task order
    window = 2 * jobs
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        pending = deque()
        it = iter(tasks)
        for t in it:
            pending.append(pool.submit(fn, t))
            if len(pending) >= window:
                break
        while pending:
            result = pending.popleft().result()
            nxt = next(it, None)
            if nxt is not None:
                pending.append(pool.submit(fn, nxt))
            yield result
    finally:
        pool.shutdown(wait=True, cancel_futures=True)


@dataclass(frozen=True)
class SweepSummary:
    rows: int
    negative_rows: int
    min_drc: float
    max_drc: float
    max_echo_error: float

    def line(self):
        return (
            f"rows={self.rows} negative_rows={self.negative_rows} "
            f"min_drc={fmt(self.min_drc)} max_drc={fmt(self.max_drc)}"
        )


def sweep_random(out_path, n, rank=8, theta_steps=72, seed0=42, jobs=1):
    """Write one CSV row per (state, theta) pair and return the summary.

    State ``i`` is ``random_density(3, rank, seed0 + i)``; the angle grid is
    ``theta_grid(theta_steps)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    _check_rank(rank)
    thetas = theta_grid(theta_steps)
    tasks = [(seed0, lo, hi, rank, thetas) for lo, hi in _chunks(n)]
    neg, lo_v, hi_v, echo = 0, np.inf, -np.inf, 0.0
    with open(out_path, "w", newline="") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for text, k, mn, mx, e in _run(_sweep_chunk, tasks, jobs):
            fh.write(text)
            neg += k
            lo_v, hi_v, echo = min(lo_v, mn), max(hi_v, mx), max(echo, e)
    return SweepSummary(n * len(thetas), neg, lo_v, hi_v, echo)


# --- negative residual correlation witness -----------------------------------


@dataclass(frozen=True)
class Witness:
    seed: int
    rank: int
    theta: float
    drc: float


@dataclass(frozen=True)
class SearchResult:
    states_scanned: int
    min_drc: float
    argmin_seed: int
    argmin_theta: float
    witness: Witness = None


def _search_chunk(args):
    seed0, lo, hi, rank, thetas = args
    seeds = _seeds(seed0, lo, hi)
    _, drc, _, _ = _evaluate(seeds, rank, thetas)
    flat = int(np.argmin(drc))
    i, k = divmod(flat, drc.shape[1])
    return int(seeds[i]), float(thetas[k]), float(drc[i, k])


def search_negative_witness(n, rank=8, theta_steps=72, seed0=0, threshold=-1e-3, jobs=1):
    """Scan ``n`` random states for a ``D_RC`` value below ``threshold``.

    Stops at the first chunk holding a witness; within it the most negative
    entry wins.
    """
    _check_rank(rank)
    thetas = theta_grid(theta_steps)
    tasks = [(seed0, lo, hi, rank, thetas) for lo, hi in _chunks(n)]
    best = (None, None, np.inf)
    scanned = 0
    for (lo, hi), (seed, theta, value) in zip(_chunks(n), _run(_search_chunk, tasks, jobs)):
        scanned = hi
        if value < best[2]:
            best = (seed, theta, value)
        if value < threshold:
            w = Witness(seed, rank, theta, value)
            return SearchResult(scanned, value, seed, theta, w)
    return SearchResult(scanned, best[2], best[0], best[1], None)


def save_witness(witness, path):
    Path(path).write_text(json.dumps(asdict(witness), indent=2, sort_keys=True) + "\n")


def load_witness(path):
    return Witness(**json.loads(Path(path).read_text()))


def replay_witness(witness):
    """Recompute the witness value through the library (non-kernel) path."""
    rho = random_density(3, witness.rank, witness.seed)
    return dissension_drc(rho, witness.theta)
