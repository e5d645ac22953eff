"""Quantum states: validated density matrices, named three-qubit states, random sampling."""

from dataclasses import dataclass, field
from math import cos, sin, sqrt
from pathlib import Path

import numpy as np

from . import _kernels
from .constants import HERMITICITY_TOL, NORM_TOL, PSD_TOL, TRACE_TOL
from .errors import NormalizationError, ParseError, RankError, ValidationError
from .linalg import hermitian_eigen, hermiticity_error

__all__ = [
    "DensityMatrix",
    "PureState",
    "basis_state",
    "ghz_state",
    "maximally_mixed",
    "parse_density",
    "purity",
    "random_density",
    "random_pure_state",
    "read_density",
    "to_density",
    "w_state",
    "write_density",
    "format_density",
]


def _frozen(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


def _qubits_for(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or (1 << n) != dim:
        return None
    return n


@dataclass(frozen=True)
class PureState:
    """State vector on ``num_qubits`` qubits, computational basis, ``|q0 q1 ...>`` order."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128)
        if a.ndim != 1 or _qubits_for(a.size) is None:
            raise ValidationError("dimension", f"amplitude count {a.size} is not a power of two")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def num_qubits(self):
        return _qubits_for(self.amplitudes.size)

    @property
    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator on ``num_qubits`` qubits.

    Construction validates every invariant and raises :class:`ValidationError`
    naming the first one that fails.
    """

    matrix: np.ndarray
    num_qubits: int = field(default=None)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("square", f"shape {m.shape} is not square")
        if not np.all(np.isfinite(m)):
            raise ValidationError("finite", "matrix has non-finite entries")
        n = _qubits_for(m.shape[0])
        if n is None or (self.num_qubits is not None and self.num_qubits != n):
            raise ValidationError(
                "dimension", f"dimension {m.shape[0]} does not match {self.num_qubits} qubits"
            )
        herm = hermiticity_error(m)
        if herm > HERMITICITY_TOL:
            raise ValidationError("hermitian", f"max |rho - rho^H| = {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError("trace", f"trace = {tr.real:.12g}, expected 1")
        lo = hermitian_eigen(m).eigenvalues[0]
        if lo < -PSD_TOL:
            raise ValidationError("positive semidefinite", f"smallest eigenvalue {lo:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def trusted(cls, matrix, num_qubits):
        """Wrap a matrix known to be a valid state (e.g. a normalised projection).

        Skips the eigenvalue-based positivity check, which dominates the cost
        of construction.
        """
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", _frozen(matrix))
        object.__setattr__(obj, "num_qubits", int(num_qubits))
        return obj

    @property
    def dim(self):
        return self.matrix.shape[0]


def basis_state(bits):
    """Computational basis ket, e.g. ``basis_state("010")``."""
    bits = str(bits)
    amps = np.zeros(2 ** len(bits), dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return PureState(amps)


def ghz_state(t):
    """``cos(t)|000> + sin(t)|111>``; the maximally entangled GHZ state sits at ``t = pi/4``."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0] = cos(t)
    amps[7] = sin(t)
    return PureState(amps)


def w_state():
    amps = np.zeros(8, dtype=np.complex128)
    amps[[1, 2, 4]] = 1.0 / sqrt(3.0)
    return PureState(amps)


def maximally_mixed(num_qubits=3):
    d = 2**num_qubits
    return DensityMatrix(np.eye(d) / d, num_qubits)


def to_density(psi):
    """Projector ``|psi><psi|``.

    Raises:
        NormalizationError: if ``| ||psi|| - 1 | > 1e-9``.
    """
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    if abs(psi.norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"state norm {psi.norm:.12g} differs from 1")
    a = psi.amplitudes
    return DensityMatrix(np.outer(a, a.conj()), psi.num_qubits)


def _check_rank(num_qubits, rank):
    d = 2**num_qubits
    if not 1 <= rank <= d:
        raise RankError(f"rank must lie in [1, {d}] for {num_qubits} qubits, got {rank}")
    return d


def random_density(num_qubits, rank, seed):
    """Ginibre-induced random state ``G G^H / Tr(G G^H)`` with ``G`` of shape ``2^n x rank``.

    The Gaussian entries come from the package's SplitMix64 + Box-Muller
    stream, so a given ``(num_qubits, rank, seed)`` yields the same matrix on
    every platform up to libm rounding.
    """
    d = _check_rank(num_qubits, rank)
    rho = _kernels.ginibre_density(np.uint64(seed), d, int(rank))
    return DensityMatrix(rho, num_qubits)


def random_pure_state(num_qubits, seed):
    """Normalised first column of the rank-1 Ginibre draw; ``to_density`` of it equals
    ``random_density(num_qubits, 1, seed)`` to rounding."""
    d = 2**num_qubits
    g = np.asarray(_kernels.ginibre(np.uint64(seed), d, 1))[:, 0]
    return PureState(g / np.linalg.norm(g))


def purity(rho):
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    return float(np.sum(np.abs(m) ** 2))


# --- text serialisation ------------------------------------------------------


def format_density(rho):
    """``dim n`` header, then one ``i j re im`` line per entry (row-major, 17 significant digits)."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    d = m.shape[0]
    lines = [f"dim {d}"]
    for i in range(d):
        for j in range(d):
            z = m[i, j]
            lines.append(f"{i} {j} {z.real:.17g} {z.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_density(text):
    """Parse the text format into a raw matrix (validation is left to the caller).

    Raises:
        ParseError: on a bad header, malformed or duplicate entry lines, or
            missing entries.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty density-matrix file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise ParseError(f"expected header 'dim n', got {lines[0]!r}")
    try:
        d = int(head[1])
    except ValueError:
        raise ParseError(f"bad dimension {head[1]!r}") from None
    if d < 1:
        raise ParseError(f"dimension must be positive, got {d}")
    m = np.zeros((d, d), dtype=np.complex128)
    seen = np.zeros((d, d), dtype=bool)
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: expected 'i j re im', got {ln!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except ValueError:
            raise ParseError(f"line {lineno}: cannot parse {ln!r}") from None
        if not (0 <= i < d and 0 <= j < d):
            raise ParseError(f"line {lineno}: index ({i}, {j}) outside {d}x{d}")
        if seen[i, j]:
            raise ParseError(f"line {lineno}: duplicate entry ({i}, {j})")
        seen[i, j] = True
        m[i, j] = complex(re, im)
    if not seen.all():
        raise ParseError(f"expected {d * d} entries, found {int(seen.sum())}")
    return m


def write_density(rho, path):
    Path(path).write_text(format_density(rho))


def read_density(path):
    """Read and validate a density matrix file."""
    return DensityMatrix(parse_density(Path(path).read_text()))
