"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected in the terminal summary.
"""

import subprocess
import sys
import time
from math import log2, pi

import numpy as np
import pytest

from conftest import DATA, random_hermitian, record_acceptance
from dissension.correlation import (
    conditional_entropy_two,
    dissension_drc,
    entropy_panel,
    verify_lemma1,
)
from dissension.linalg import hermitian_eigen, partial_trace
from dissension.merging import merging_report, unmeasured_costs, verify_corollary
from dissension.states import random_density, random_pure_state, to_density
from dissension.sweep import (
    default_jobs,
    load_witness,
    replay_witness,
    save_witness,
    search_negative_witness,
)
from test_correlation import W_DELTA_RC

pytestmark = pytest.mark.slow

WITNESS_PATH = DATA / "negative_witness.json"
TWO_PI = 2.0 * pi


def check(n, ok, detail):
    record_acceptance(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "dissension", *args], capture_output=True, check=True
    ).stdout


def _grid(steps):
    return TWO_PI * np.arange(steps) / steps


@pytest.fixture(scope="module")
def lemma2_run():
    thetas = _grid(50)
    worst, min_d2 = 0.0, np.inf
    start = time.perf_counter()
    for i in range(1000):
        rho = random_density(3, 8, 10_000 + i)
        panel, costs = entropy_panel(rho), unmeasured_costs(rho)
        for t in thetas:
            # correlation side: entropy panel + measured conditionals
            drc = dissension_drc(rho, t, panel=panel)
            # merging side: conditional-entropy cost changes
            rep = merging_report(rho, t, costs)
            worst = max(worst, abs(drc - rep.delta_total))
            min_d2 = min(min_d2, rep.delta2)
    return {"worst": worst, "min_delta2": min_d2, "seconds": time.perf_counter() - start}


@pytest.fixture(scope="module")
def lemma1_run():
    thetas = _grid(20)
    out = {"gap": 0.0, "s_abc": 0.0, "c2": 0.0, "fails": 0, "min_delta2": np.inf}
    for i in range(100):
        psi = random_pure_state(3, 20_000 + i)
        rho = to_density(psi)
        chk = verify_lemma1(psi)
        out["gap"] = max(out["gap"], abs(chk.lhs - chk.rhs))
        out["s_abc"] = max(out["s_abc"], entropy_panel(rho).s_abc)
        out["c2"] = max(out["c2"], max(conditional_entropy_two(rho, t) for t in thetas))
        out["fails"] += not chk.ok
        costs = unmeasured_costs(rho)
        out["min_delta2"] = min(out["min_delta2"], min(merging_report(rho, t, costs).delta2 for t in thetas))
    return out


@pytest.fixture(scope="module")
def corollary_run():
    thetas = _grid(100)
    out = {"fails": 0, "margin": np.inf, "min_delta2": np.inf}
    for i in range(100):
        rho = random_density(3, 8, 30_000 + i)
        chk = verify_corollary(rho, grid_points=100, slack=1e-9)
        out["fails"] += not chk.ok
        out["margin"] = min(out["margin"], min(chk.delta_at_thetas) - chk.delta_rc)
        costs = unmeasured_costs(rho)
        out["min_delta2"] = min(out["min_delta2"], min(merging_report(rho, t, costs).delta2 for t in thetas))
    return out


def test_criterion_1_lemma2_identity(lemma2_run):
    r = lemma2_run
    ok = r["worst"] < 1e-9 and r["seconds"] < 60
    check(1, ok, f"1000 states x 50 angles, max |D_RC - Delta| = {r['worst']:.3e}, {r['seconds']:.1f} s")


def test_criterion_2_lemma1(lemma1_run):
    r = lemma1_run
    ok = r["fails"] == 0 and r["gap"] < 1e-8 and r["s_abc"] < 1e-9 and r["c2"] < 1e-9
    check(
        2, ok,
        f"100 pure states, max gap {r['gap']:.3e}, max S(ABC) {r['s_abc']:.3e}, "
        f"max S(C|Pi_AB) {r['c2']:.3e}",
    )


def test_criterion_3_corollary(corollary_run):
    r = corollary_run
    check(3, r["fails"] == 0, f"100 states x 100 angles, min (Delta - delta_RC) = {r['margin']:.3e}")


def test_criterion_4_delta2_nonnegative(lemma2_run, lemma1_run, corollary_run):
    m = min(lemma2_run["min_delta2"], lemma1_run["min_delta2"], corollary_run["min_delta2"])
    check(4, m >= -1e-9, f"min delta2 over criteria 1-3 = {m:.3e}")


def test_criterion_5_ghz_scan(tmp_path):
    out = tmp_path / "ghz.csv"
    _cli("scan-ghz", "--out", str(out))
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    t, th, drc = data[:, 0], data[:, 1], data[:, 2]
    ts, thetas = np.unique(t), np.unique(th)
    surf = drc.reshape(len(ts), len(thetas))
    i_q = int(np.argmin(np.abs(ts - pi / 4)))
    j_q = int(np.argmin(np.abs(thetas - pi / 4)))
    j_pi = int(np.argmin(np.abs(thetas - pi)))
    t0 = np.abs(surf[0]).max()
    v0 = abs(surf[i_q, 0] - 1.0)
    vq = abs(surf[i_q, j_q] - 2.0)
    sym = np.abs(surf[:, : len(thetas) - j_pi] - surf[:, j_pi:]).max()
    ok = (
        abs(ts[i_q] - pi / 4) < 1e-12 and abs(thetas[j_q] - pi / 4) < 1e-12
        and t0 < 1e-9 and v0 < 1e-8 and vq < 1e-8 and sym < 1e-9
    )
    check(
        5, ok,
        f"{len(ts)}x{len(thetas)} grid, max|D_RC(t=0)| {t0:.1e}, |D_RC(pi/4,0)-1| {v0:.1e}, "
        f"|D_RC(pi/4,pi/4)-2| {vq:.1e}, theta+pi asymmetry {sym:.1e}",
    )


def test_criterion_6_w_scan(tmp_path):
    out = tmp_path / "w.csv"
    stdout = _cli("scan-w", "--out", str(out)).decode()
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    thetas, drc = data[:, 0], data[:, 1]
    j_pi = int(np.argmin(np.abs(thetas - pi)))
    delta_rc = float(stdout.strip().split("=")[1])
    v0 = abs(drc[0] - log2(3))
    dv = abs(delta_rc - W_DELTA_RC)
    per = np.abs(drc[: len(drc) - j_pi] - drc[j_pi:]).max()
    ok = abs(thetas[j_pi] - pi) < 1e-12 and v0 < 1e-8 and dv < 1e-6 and per < 1e-9
    check(
        6, ok,
        f"|D_RC(0)-log2 3| {v0:.1e}, delta_rc {delta_rc:.12g} vs oracle {W_DELTA_RC!r} "
        f"(diff {dv:.1e}), pi-periodicity error {per:.1e}",
    )


def test_criterion_7_negative_witness():
    jobs = min(4, default_jobs())
    res = search_negative_witness(10_000, rank=8, theta_steps=72, seed0=42, threshold=-1e-3, jobs=jobs)
    scanned = res.states_scanned
    if res.witness is None:
        res = search_negative_witness(100_000, rank=8, theta_steps=72, seed0=42, threshold=-1e-3, jobs=jobs)
        scanned = res.states_scanned
    if res.witness is not None:
        WITNESS_PATH.parent.mkdir(exist_ok=True)
        save_witness(res.witness, WITNESS_PATH)
    if WITNESS_PATH.exists():
        w = load_witness(WITNESS_PATH)
        replay = replay_witness(w)
        ok = replay < -1e-3 and abs(replay - w.drc) < 1e-9
        check(7, ok, f"witness seed={w.seed} theta={w.theta:.6f} D_RC={w.drc:.6g}, replay {replay:.6g}")
    else:
        check(
            7, False,
            f"no D_RC < -1e-3 in {scanned} full-rank states x 72 angles; "
            f"global min D_RC = {res.min_drc:.6g} (seed {res.argmin_seed}, theta {res.argmin_theta:.4f})",
        )


def test_criterion_8_linear_algebra():
    rng = np.random.default_rng(8)
    recon = orth = 0.0
    count = 0
    for n in (2, 4, 8):
        for _ in range(10_000):
            m = random_hermitian(rng, n)
            d = hermitian_eigen(m)
            v = d.eigenvectors
            recon = max(recon, np.abs(d.reconstruct() - m).max())
            orth = max(orth, np.abs(v.conj().T @ v - np.eye(n)).max())
            count += 1
    comp = 0.0
    for s in range(200):
        rho = random_density(3, 1 + s % 8, 40_000 + s).matrix
        full = [2, 2, 2]
        for keep in ({0}, {1}, {2}):
            once = partial_trace(rho, full, keep)
            for first in sorted(set(range(3)) - keep):
                mid_keep = set(range(3)) - {first}
                mid = partial_trace(rho, full, mid_keep)
                pos = sorted(mid_keep).index(next(iter(keep)))
                comp = max(comp, np.abs(partial_trace(mid, [2, 2], {pos}) - once).max())
    ok = recon < 1e-10 and orth < 1e-10 and comp < 1e-12
    check(
        8, ok,
        f"{count} Hermitian matrices (dims 2,4,8), max reconstruction {recon:.1e}, "
        f"orthonormality {orth:.1e}; partial-trace composition {comp:.1e}",
    )


def test_criterion_9_determinism(tmp_path):
    v1 = _cli("verify", "--seed", "7")
    v2 = _cli("verify", "--seed", "7")
    paths = [tmp_path / f"s{k}.csv" for k in range(3)]
    base = ["sweep-random", "--n", "5000", "--theta-steps", "72", "--seed", "7"]
    for path, jobs in zip(paths, ("1", "1", "4")):
        _cli(*base, "--jobs", jobs, "--out", str(path))
    blobs = [p.read_bytes() for p in paths]
    ok = v1 == v2 and blobs[0] == blobs[1] == blobs[2]
    check(
        9, ok,
        f"verify-all x2 identical: {v1 == v2}; sweep-random 5000 states jobs 1/1/4 identical: "
        f"{blobs[0] == blobs[1] == blobs[2]} ({len(blobs[0])} bytes)",
    )


def test_criterion_10_full_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    start = time.perf_counter()
    summary = _cli(
        "sweep-random", "--n", "300000", "--rank", "8", "--theta-steps", "72",
        "--seed", "42", "--jobs", "4", "--out", str(out),
    ).decode().strip()
    secs = time.perf_counter() - start
    size = out.stat().st_size
    out.unlink()
    check(10, secs < 600, f"300000 states x 72 angles in {secs:.1f} s on {default_jobs()} core(s); {summary}; {size} bytes")
