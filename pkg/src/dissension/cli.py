"""Command-line interface: figure scans, random sweeps, verification, scoring."""

import argparse
import json
import os
import sys

from .correlation import correlation_report, entropy_panel, residual_correlation, theta_profile
from .errors import ConvergenceError, DimensionMismatchError, ParseError, ValidationError
from .merging import merging_report
from .states import DensityMatrix, ghz_state, parse_density, to_density, w_state
from .sweep import default_jobs, fmt, sweep_random, theta_grid
from .verification import SUITES, run_suite

DEFAULT_SEED = 42
SEED_ENV = "DISSENSION_SEED"

GHZ_HEADER = "t,theta,drc,d1c,d2c,i0,i1,i2"
W_HEADER = "theta,drc,d1c,d2c"
SCORE_FIELDS = (
    "i0", "i1", "i2", "d1c", "d2c", "drc",
    "delta1", "delta2", "delta_total", "delta_rc", "theta_star",
)


def resolve_seed(flag):
    """``--seed`` beats ``$DISSENSION_SEED`` beats 42."""
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        return int(env.strip(), 0)
    return DEFAULT_SEED


def _steps(value):
    n = int(value)
    if n < 2:
        raise argparse.ArgumentTypeError("need at least 2 steps")
    return n


def _seed(value):
    n = int(value, 0)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def _open_out(path):
    try:
        return open(path, "w", newline="")
    except OSError as exc:
        raise SystemExit(f"error: cannot write {path}: {exc.strerror}") from None


def cmd_scan_ghz(args):
    ts = theta_grid(args.t_steps, endpoint=True)
    thetas = theta_grid(args.theta_steps, endpoint=True)
    with _open_out(args.out) as fh:
        fh.write(GHZ_HEADER + "\n")
        for t in ts:
            prof = theta_profile(to_density(ghz_state(t)), thetas)
            cols = (prof.drc, prof.d1c, prof.d2c, prof.i0, prof.i1, prof.i2)
            for k, th in enumerate(thetas):
                fh.write(",".join([fmt(t), fmt(th)] + [fmt(c[k]) for c in cols]) + "\n")
    return 0


def cmd_scan_w(args):
    rho = to_density(w_state())
    thetas = theta_grid(args.theta_steps, endpoint=True)
    prof = theta_profile(rho, thetas)
    with _open_out(args.out) as fh:
        fh.write(W_HEADER + "\n")
        for k, th in enumerate(thetas):
            fh.write(",".join([fmt(th), fmt(prof.drc[k]), fmt(prof.d1c[k]), fmt(prof.d2c[k])]) + "\n")
    print(f"delta_rc={fmt(residual_correlation(rho).value)}")
    return 0


def cmd_sweep_random(args):
    seed = resolve_seed(args.seed)
    try:
        summary = sweep_random(args.out, args.n, args.rank, args.theta_steps, seed, args.jobs)
    except OSError as exc:
        raise SystemExit(f"error: cannot write {args.out}: {exc.strerror}") from None
    print(summary.line())
    return 0


def cmd_verify(args):
    seed = resolve_seed(args.seed)
    try:
        results = run_suite(args.suite, args.samples, seed)
    except ConvergenceError as exc:
        print(f"ERROR numerical convergence: {exc}")
        return 2
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{'PASS' if ok else 'FAIL'} {sum(r.passed for r in results)}/{len(results)} properties")
    return 0 if ok else 1


def score_state(rho, theta=None):
    """JSON-ready dict of correlation and merging values for a 3-qubit state."""
    if rho.num_qubits != 3:
        raise DimensionMismatchError(f"expected a 3-qubit state, got {rho.num_qubits} qubit(s)")
    best = residual_correlation(rho)
    at = best.theta if theta is None else theta
    panel = entropy_panel(rho)
    corr = correlation_report(rho, at, panel)
    merge = merging_report(rho, at)
    values = {
        "i0": corr.i0, "i1": corr.i1, "i2": corr.i2,
        "d1c": corr.d1c, "d2c": corr.d2c, "drc": corr.drc,
        "delta1": merge.delta1, "delta2": merge.delta2, "delta_total": merge.delta_total,
        "delta_rc": best.value, "theta_star": best.theta,
    }
    # exact zeros print as 0.0 rather than -0.0
    return {k: float(values[k]) + 0.0 for k in SCORE_FIELDS}


def cmd_score(args):
    try:
        with open(args.state_file) as fh:
            matrix = parse_density(fh.read())
        rho = DensityMatrix(matrix)
        out = score_state(rho, args.theta)
    except OSError as exc:
        print(f"error: cannot read {args.state_file}: {exc.strerror}", file=sys.stderr)
        return 1
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 1
    except DimensionMismatchError as exc:
        print(f"dimension error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(out))
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="dissension",
        description="Quantum dissension, residual correlation and state-merging costs of three-qubit states.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("scan-ghz", help="D_RC surface of cos t|000> + sin t|111> over (t, theta)")
    g.add_argument("--t-steps", type=_steps, default=65)
    g.add_argument("--theta-steps", type=_steps, default=65)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_scan_ghz)

    w = sub.add_parser("scan-w", help="D_RC curve of the W state over theta")
    w.add_argument("--theta-steps", type=_steps, default=361)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_scan_w)

    s = sub.add_parser("sweep-random", help="D_RC and merging deltas of random mixed states")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--rank", type=int, default=8, choices=range(1, 9), metavar="{1..8}")
    s.add_argument("--theta-steps", type=int, default=72)
    s.add_argument("--seed", type=_seed, default=None)
    s.add_argument("--jobs", type=int, default=default_jobs())
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_sweep_random)

    v = sub.add_parser("verify", help="run property suites; exit 0 iff all pass")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=_seed, default=None)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("score", help="correlation and merging report for a density-matrix file")
    c.add_argument("state_file")
    c.add_argument("--theta", type=float, default=None)
    c.set_defaults(func=cmd_score)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "n", 1) < 1:
        raise SystemExit("error: --n must be at least 1")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
