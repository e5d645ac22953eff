"""Hot-kernel dispatch.

The numba backend is used when numba imports and ``DISSENSION_DISABLE_NUMBA``
is unset or falsy; otherwise the pure-numpy twins are bound. Both backends stay
importable by name through :func:`get_backend` for cross-checks and benchmarks.
"""

import importlib
import os

_FALSY = {"", "0", "false", "no", "off"}

FUNCTIONS = (
    "splitmix64_stream",
    "uniform_stream",
    "ginibre",
    "ginibre_density",
    "jacobi_eigh",
    "state_terms",
    "sweep_batch",
)


def numba_disabled():
    return os.environ.get("DISSENSION_DISABLE_NUMBA", "").strip().lower() not in _FALSY


def get_backend(name):
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r}")
    return importlib.import_module(f"._{name}", __name__)


def _select():
    if numba_disabled():
        return "numpy", get_backend("numpy")
    try:
        return "numba", get_backend("numba")
    except ImportError:
        return "numpy", get_backend("numpy")


BACKEND, _impl = _select()

splitmix64_stream = _impl.splitmix64_stream
uniform_stream = _impl.uniform_stream
ginibre = _impl.ginibre
ginibre_density = _impl.ginibre_density
jacobi_eigh = _impl.jacobi_eigh
state_terms = _impl.state_terms
sweep_batch = _impl.sweep_batch
