"""Small dense complex linear algebra for operators on at most three qubits.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Subsystem
index 0 is the leftmost (most significant) tensor factor, so ``|abc>`` has flat
index ``4a + 2b + c``.
"""

from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np

from . import _kernels
from .constants import EIGEN_TOL, HERMITICITY_TOL, MAX_JACOBI_SWEEPS
from .errors import ConvergenceError, DimensionMismatchError, NotHermitianError

__all__ = [
    "EigenDecomposition",
    "as_matrix",
    "hermitian_eigen",
    "hermiticity_error",
    "partial_trace",
    "tensor",
]


def as_matrix(m):
    """Coerce to a square, finite ``complex128`` array (a copy is not forced)."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def tensor(*factors):
    """Kronecker product of one or more matrices, left factor most significant."""
    if not factors:
        raise ValueError("tensor needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=np.complex128) for f in factors))


def partial_trace(rho, dims, keep):
    """Reduce ``rho`` onto the subsystems in ``keep``.

    Args:
        rho: square matrix on the composite system.
        dims: dimension of each subsystem, in tensor order.
        keep: indices of the subsystems to keep. Output ordering follows
            ``dims`` regardless of the order given here.

    Raises:
        DimensionMismatchError: if ``prod(dims)`` differs from ``rho``'s size.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if prod(dims) != rho.shape[0]:
        raise DimensionMismatchError(
            f"subsystem dims {dims} multiply to {prod(dims)}, matrix is {rho.shape[0]}x{rho.shape[0]}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise IndexError(f"subsystem index out of range for {len(dims)} subsystems")

    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace out from the highest index down so remaining axis numbers stay valid
    for s in reversed(range(n)):
        if s in keep:
            continue
        half = t.ndim // 2
        t = np.trace(t, axis1=s, axis2=s + half)
    d = prod(dims[k] for k in keep)
    return t.reshape(d, d)


def hermiticity_error(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def hermitian_eigen(m, tol=EIGEN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back ascending, with matching eigenvector columns.

    Raises:
        NotHermitianError: if ``max|m - m^H|`` exceeds ``HERMITICITY_TOL``.
        ConvergenceError: if the off-diagonal norm is still above ``tol``
            after ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    err = hermiticity_error(a)
    if err > HERMITICITY_TOL:
        raise NotHermitianError(f"max |m - m^H| = {err:.3e} exceeds {HERMITICITY_TOL:g}")
    a = 0.5 * (a + a.conj().T)
    w, v, ok = _kernels.jacobi_eigh(a, tol, max_sweeps)
    if not ok:
        raise ConvergenceError(f"Jacobi iteration did not converge within {max_sweeps} sweeps")
    return EigenDecomposition(np.asarray(w), np.asarray(v))
