"""State-merging cost accounting for three parties merging onto B.

A sends ``S(A|B)`` then C sends ``S(C|AB)``. Measuring B (one-particle basis)
and then A,B (two-particle basis) replaces these costs by the averaged
post-measurement conditional entropies; ``delta1`` and ``delta2`` are the
respective changes. The post-measurement terms reuse
:mod:`dissension.correlation`'s conditional entropies so both modules measure
through one code path, while the unmeasured terms are computed here from
generic conditional entropies.
"""

from dataclasses import dataclass
from math import pi
from typing import NamedTuple

import numpy as np

from .correlation import (
    conditional_entropy_one,
    conditional_entropy_two,
    dissension_drc,
    residual_correlation,
    von_neumann_entropy,
)
from .errors import SubsystemError
from .linalg import partial_trace

__all__ = [
    "CorollaryCheck",
    "Lemma2Check",
    "MergingReport",
    "conditional_entropy",
    "merging_cost_total",
    "merging_report",
    "unmeasured_costs",
    "verify_corollary",
    "verify_lemma2",
]


def _subsystem_entropy(rho, qubits):
    if len(qubits) == rho.num_qubits:
        return von_neumann_entropy(rho)
    return von_neumann_entropy(partial_trace(rho.matrix, [2] * rho.num_qubits, qubits))


def conditional_entropy(rho, target, given):
    """``S(target | given) = S(target + given) - S(given)``; negative values flag entanglement.

    Raises:
        SubsystemError: if the qubit sets overlap, are empty or hold an
            out-of-range index.
    """
    target, given = set(target), set(given)
    if target & given:
        raise SubsystemError(f"target {sorted(target)} and given {sorted(given)} overlap")
    if not target:
        raise SubsystemError("target must be non-empty")
    joint = target | given
    if min(joint) < 0 or max(joint) >= rho.num_qubits:
        raise SubsystemError(f"qubit index out of range for {rho.num_qubits} qubits")
    s_given = _subsystem_entropy(rho, sorted(given)) if given else 0.0
    return _subsystem_entropy(rho, sorted(joint)) - s_given


def merging_cost_total(rho):
    """Total quantum communication for A then C to merge onto B."""
    return conditional_entropy(rho, [0], [1]) + conditional_entropy(rho, [2], [0, 1])


@dataclass(frozen=True)
class MergingReport:
    theta: float
    s_a_given_b: float
    s_c_given_ab: float
    s_a_given_b_post: float
    s_c_given_ab_post: float
    delta1: float
    delta2: float
    delta_total: float


def merging_report(rho, theta, costs=None):
    """Merging costs before and after measurement at ``theta``.

    ``costs`` may carry a precomputed ``(S(A|B), S(C|AB))`` pair when many
    angles are evaluated for the same state.
    """
    a_b, c_ab = costs if costs is not None else unmeasured_costs(rho)
    a_post = conditional_entropy_one(rho, theta)
    c_post = conditional_entropy_two(rho, theta)
    d1 = a_post - a_b
    d2 = c_post - c_ab
    return MergingReport(
        theta=float(theta),
        s_a_given_b=a_b,
        s_c_given_ab=c_ab,
        s_a_given_b_post=a_post,
        s_c_given_ab_post=c_post,
        delta1=d1,
        delta2=d2,
        delta_total=d1 + d2,
    )


def unmeasured_costs(rho):
    """``(S(A|B), S(C|AB))`` of the state before any measurement."""
    return conditional_entropy(rho, [0], [1]), conditional_entropy(rho, [2], [0, 1])


class Lemma2Check(NamedTuple):
    drc: float
    delta: float
    ok: bool


def verify_lemma2(rho, theta, tol=1e-9, panel=None, costs=None):
    """Compare ``D_RC`` from the dissension formula with ``delta1 + delta2``.

    ``panel`` (an :class:`EntropyPanel`) and ``costs`` (from
    :func:`unmeasured_costs`) may be passed to reuse per-state work across angles.
    """
    drc = dissension_drc(rho, theta, panel=panel)
    delta = merging_report(rho, theta, costs).delta_total
    return Lemma2Check(drc, delta, abs(drc - delta) < tol)


class CorollaryCheck(NamedTuple):
    delta_rc: float
    delta_at_thetas: list
    ok: bool


def verify_corollary(rho, grid_points=100, slack=1e-9):
    """Check that the minimised residual correlation never exceeds the cost change."""
    delta_rc = residual_correlation(rho).value
    costs = unmeasured_costs(rho)
    thetas = 2.0 * pi * np.arange(grid_points) / grid_points
    deltas = [merging_report(rho, t, costs).delta_total for t in thetas]
    ok = all(delta_rc <= d + slack for d in deltas)
    return CorollaryCheck(delta_rc, deltas, ok)
