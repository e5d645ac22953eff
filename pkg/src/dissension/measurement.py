"""Real one-parameter projective bases and projective measurement of three-qubit states."""

from dataclasses import dataclass
from functools import lru_cache
from math import cos, sin
from typing import NamedTuple

import numpy as np

from .constants import PROB_TOL
from .errors import ArityError, SubsystemError
from .states import DensityMatrix

__all__ = [
    "MeasurementEnsemble",
    "Outcome",
    "ProjectiveBasis",
    "embed",
    "measure",
    "one_particle_basis",
    "post_measurement_state",
    "two_particle_basis",
]

ONE_PARTICLE = "one-particle"
TWO_PARTICLE = "two-particle"


@dataclass(frozen=True)
class ProjectiveBasis:
    theta: float
    kets: tuple
    arity: str

    @property
    def projectors(self):
        return tuple(np.outer(k, k.conj()) for k in self.kets)

    @property
    def num_targets(self):
        return 1 if self.arity == ONE_PARTICLE else 2


def _kets(rows):
    out = []
    for r in rows:
        k = np.asarray(r, dtype=np.complex128)
        k.setflags(write=False)
        out.append(k)
    return tuple(out)


def one_particle_basis(theta):
    """``|u1> = cos t|0> + sin t|1>``, ``|u2> = sin t|0> - cos t|1>``."""
    c, s = cos(theta), sin(theta)
    return ProjectiveBasis(float(theta), _kets([[c, s], [s, -c]]), ONE_PARTICLE)


def two_particle_basis(theta):
    """Four kets over ``|00>, |01>, |10>, |11>``; ``theta = pi/4`` gives the Bell basis."""
    c, s = cos(theta), sin(theta)
    rows = [
        [c, 0, 0, s],
        [s, 0, 0, -c],
        [0, c, s, 0],
        [0, s, -c, 0],
    ]
    return ProjectiveBasis(float(theta), _kets(rows), TWO_PARTICLE)


def _check_targets(targets, num_qubits):
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise SubsystemError(f"targets must be distinct, got {targets}")
    for t in targets:
        if not 0 <= t < num_qubits:
            raise SubsystemError(f"qubit index {t} out of range for {num_qubits} qubits")
    return targets


@lru_cache(maxsize=None)
def _identity(d):
    eye = np.eye(d)
    eye.setflags(write=False)
    return eye


def embed(op, targets, num_qubits=3):
    """Lift ``op`` acting on ``targets`` (in the given order) to the full register."""
    targets = _check_targets(targets, num_qubits)
    k = len(targets)
    if op.shape != (2**k, 2**k):
        raise ArityError(f"operator of shape {op.shape} cannot act on {k} qubit(s)")
    rest = [q for q in range(num_qubits) if q not in targets]
    r = 2 ** len(rest)
    full = (op[:, None, :, None] * _identity(r)[None, :, None, :]).reshape(2**k * r, 2**k * r)
    order = list(targets) + rest
    if order == list(range(num_qubits)):
        return full
    n = num_qubits
    t = full.reshape([2] * (2 * n))
    # axis i of t carries qubit order[i]; move it back to position order[i]
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


@lru_cache(maxsize=512)
def _embedded_projectors(ket_bytes, targets, num_qubits):
    # keyed on the raw ket bytes so any basis, not just the built-in ones, caches safely
    out = []
    for raw in ket_bytes:
        k = np.frombuffer(raw, dtype=np.complex128)
        big = embed(np.outer(k, k.conj()), targets, num_qubits)
        big.setflags(write=False)
        out.append(big)
    return tuple(out)


class Outcome(NamedTuple):
    index: int
    probability: float
    state: DensityMatrix


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Outcome probabilities and normalised post-measurement states.

    Outcomes with probability at or below ``PROB_TOL`` are dropped from
    ``outcomes``; ``total_probability`` still counts every projector.
    """

    outcomes: tuple
    measured_subsystems: tuple
    total_probability: float

    @property
    def probabilities(self):
        return np.array([o.probability for o in self.outcomes])


def measure(rho, basis, targets):
    """Projectively measure ``targets`` of a three-qubit state in ``basis``.

    Raises:
        ArityError: if the basis acts on a different number of qubits than
            ``len(targets)``.
        SubsystemError: for repeated or out-of-range target indices.
    """
    targets = _check_targets(targets, rho.num_qubits)
    if len(targets) != basis.num_targets:
        raise ArityError(f"{basis.arity} basis cannot measure {len(targets)} qubit(s)")
    m = rho.matrix
    outcomes = []
    total = 0.0
    key = tuple(np.ascontiguousarray(k, dtype=np.complex128).tobytes() for k in basis.kets)
    for j, big in enumerate(_embedded_projectors(key, targets, rho.num_qubits)):
        collapsed = big @ m @ big
        p = float(np.trace(collapsed).real)
        total += p
        if p <= PROB_TOL:
            continue
        cond = collapsed / p
        cond = 0.5 * (cond + cond.conj().T)
        outcomes.append(Outcome(j, p, DensityMatrix.trusted(cond, rho.num_qubits)))
    return MeasurementEnsemble(tuple(outcomes), targets, total)


def post_measurement_state(ensemble):
    """Dephased state ``sum_j p_j rho_j`` after forgetting the outcome."""
    if not ensemble.outcomes:
        raise ValueError("ensemble has no outcomes")
    m = sum(o.probability * o.state.matrix for o in ensemble.outcomes)
    n = ensemble.outcomes[0].state.num_qubits
    return DensityMatrix(m / np.trace(m).real, n)
