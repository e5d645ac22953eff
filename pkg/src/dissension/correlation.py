"""Entropies, tripartite mutual informations and quantum dissension.

All entropies are in bits. The one-particle measurement always acts on qubit
B (index 1) and the two-particle measurement on qubits A and B (indices 0, 1).
"""

from dataclasses import dataclass
from math import pi, sqrt
from typing import NamedTuple

import numpy as np

from . import _kernels
from .constants import PROB_TOL
from .errors import ConvergenceError, DimensionMismatchError
from .linalg import hermitian_eigen, partial_trace
from .measurement import measure, one_particle_basis, two_particle_basis
from .states import DensityMatrix, PureState, to_density

__all__ = [
    "CorrelationReport",
    "EntropyPanel",
    "Lemma1Check",
    "MinimizeResult",
    "conditional_entropy_one",
    "conditional_entropy_two",
    "correlation_report",
    "dissension_d1c",
    "dissension_d2c",
    "dissension_drc",
    "entropy_panel",
    "golden_section",
    "kernel_conditional_entropies",
    "minimize_over_theta",
    "minimized_dissension",
    "mutual_info_i0",
    "mutual_info_i1",
    "mutual_info_i2",
    "residual_correlation",
    "theta_profile",
    "ThetaProfile",
    "verify_lemma1",
    "von_neumann_entropy",
]

QUBITS = [2, 2, 2]
TWO_PI = 2.0 * pi


def von_neumann_entropy(rho):
    """``-sum(l * log2(l))`` over eigenvalues above ``PROB_TOL``, clamped at zero."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    w = hermitian_eigen(m).eigenvalues
    w = w[w > PROB_TOL]
    return max(0.0, float(-np.sum(w * np.log2(w))))


def _require_three_qubits(rho):
    if rho.num_qubits != 3:
        raise DimensionMismatchError(f"expected a 3-qubit state, got {rho.num_qubits} qubit(s)")


def _marginal_entropy(rho, keep):
    return von_neumann_entropy(partial_trace(rho.matrix, QUBITS, keep))


@dataclass(frozen=True)
class EntropyPanel:
    s_a: float
    s_b: float
    s_c: float
    s_ab: float
    s_bc: float
    s_ac: float
    s_abc: float


def entropy_panel(rho):
    """All seven marginal entropies of a three-qubit state."""
    _require_three_qubits(rho)
    return EntropyPanel(
        s_a=_marginal_entropy(rho, [0]),
        s_b=_marginal_entropy(rho, [1]),
        s_c=_marginal_entropy(rho, [2]),
        s_ab=_marginal_entropy(rho, [0, 1]),
        s_bc=_marginal_entropy(rho, [1, 2]),
        s_ac=_marginal_entropy(rho, [0, 2]),
        s_abc=von_neumann_entropy(rho),
    )


# single-qubit marginals of a stack of 3-qubit states, one einsum per ensemble
_MARGINAL_SUBSCRIPTS = {0: "kabcxbc->kax", 1: "kabcayc->kby", 2: "kabcabz->kcz"}


def _average_conditional_entropy(ensemble, keep):
    if not ensemble.outcomes:
        return 0.0
    stack = np.stack([o.state.matrix for o in ensemble.outcomes]).reshape((-1,) + (2,) * 6)
    marginals = np.einsum(_MARGINAL_SUBSCRIPTS[keep], stack)
    return sum(
        o.probability * von_neumann_entropy(m) for o, m in zip(ensemble.outcomes, marginals)
    )


def conditional_entropy_one(rho, theta):
    """Average entropy of A after measuring B in the one-particle basis at ``theta``."""
    _require_three_qubits(rho)
    ens = measure(rho, one_particle_basis(theta), [1])
    return _average_conditional_entropy(ens, 0)


def conditional_entropy_two(rho, theta):
    """Average entropy of C after measuring A,B in the two-particle basis at ``theta``."""
    _require_three_qubits(rho)
    ens = measure(rho, two_particle_basis(theta), [0, 1])
    return _average_conditional_entropy(ens, 2)


def _i0(p):
    return p.s_a + p.s_b + p.s_c - (p.s_ab + p.s_bc + p.s_ac) + p.s_abc


def _i1(p, cond_one):
    return p.s_a + p.s_c - cond_one - p.s_ac - p.s_bc + p.s_abc


def _i2(p, cond_two):
    return p.s_a + p.s_b + p.s_c - p.s_bc - p.s_ac + cond_two


def _d1c(p, cond_one):
    return p.s_ab - p.s_b - cond_one


def _d2c(p, cond_two):
    return cond_two + p.s_ab - p.s_abc


def _drc(p, cond_one, cond_two):
    return cond_two - p.s_abc + p.s_b + cond_one


def mutual_info_i0(rho, panel=None):
    return _i0(panel or entropy_panel(rho))


def mutual_info_i1(rho, theta, panel=None):
    return _i1(panel or entropy_panel(rho), conditional_entropy_one(rho, theta))


def mutual_info_i2(rho, theta, panel=None):
    return _i2(panel or entropy_panel(rho), conditional_entropy_two(rho, theta))


def dissension_d1c(rho, theta, panel=None):
    return _d1c(panel or entropy_panel(rho), conditional_entropy_one(rho, theta))


def dissension_d2c(rho, theta, panel=None):
    return _d2c(panel or entropy_panel(rho), conditional_entropy_two(rho, theta))


def dissension_drc(rho, theta, panel=None):
    """Residual correlation function at a single measurement angle."""
    p = panel or entropy_panel(rho)
    return _drc(p, conditional_entropy_one(rho, theta), conditional_entropy_two(rho, theta))


@dataclass(frozen=True)
class CorrelationReport:
    theta: float
    panel: EntropyPanel
    i0: float
    i1: float
    i2: float
    d1c: float
    d2c: float
    drc: float
    cond_a_given_pib: float
    cond_c_given_piab: float


def correlation_report(rho, theta, panel=None):
    p = panel or entropy_panel(rho)
    c1 = conditional_entropy_one(rho, theta)
    c2 = conditional_entropy_two(rho, theta)
    rep = CorrelationReport(
        theta=float(theta),
        panel=p,
        i0=_i0(p),
        i1=_i1(p, c1),
        i2=_i2(p, c2),
        d1c=_d1c(p, c1),
        d2c=_d2c(p, c2),
        drc=_drc(p, c1, c2),
        cond_a_given_pib=c1,
        cond_c_given_piab=c2,
    )
    assert abs(rep.d1c - (rep.i1 - rep.i0)) < 1e-10
    assert abs(rep.d2c - (rep.i2 - rep.i0)) < 1e-10
    assert abs(rep.drc - (rep.i2 - rep.i1)) < 1e-10
    assert abs(rep.drc - (rep.d2c - rep.d1c)) < 1e-10
    return rep


# --- minimisation over the basis angle ----------------------------------------

_INVPHI = (sqrt(5.0) - 1.0) / 2.0


class MinimizeResult(NamedTuple):
    theta: float
    value: float


def golden_section(f, a, b, tol=1e-8, max_iter=200):
    """Golden-section search for a minimum of ``f`` on ``[a, b]``."""
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
    return MinimizeResult(x1, f1) if f1 <= f2 else MinimizeResult(x2, f2)


def minimize_over_theta(
    f, lo=0.0, hi=TWO_PI, grid_points=721, tol=1e-8, periodic=True, grid_values=None
):
    """Minimise ``f`` over ``[lo, hi)``: grid scan, then golden-section refinement.

    The grid holds ``grid_points`` equally spaced angles; ties go to the
    smallest angle. Refinement searches one grid step either side of the best
    point (wrapping around when ``periodic``) and is kept only if it improves
    on the grid value. ``grid_values``, if given, maps the whole grid array to
    values in one call and replaces the pointwise scan.
    """
    grid = lo + (hi - lo) * np.arange(grid_points) / grid_points
    if grid_values is not None:
        values = np.asarray(grid_values(grid), dtype=np.float64)
    else:
        values = np.array([f(float(t)) for t in grid])
    k = int(np.argmin(values))
    best = MinimizeResult(float(grid[k]), float(values[k]))
    step = (hi - lo) / grid_points
    a, b = best.theta - step, best.theta + step
    if not periodic:
        a, b = max(a, lo), min(b, hi)
    ref = golden_section(f, a, b, tol)
    if ref.value < best.value:
        t = ref.theta
        if periodic:
            t = lo + (t - lo) % (hi - lo)
        best = MinimizeResult(float(t), float(ref.value))
    return best


@dataclass(frozen=True)
class ThetaProfile:
    """Correlation quantities of one state over an array of angles."""

    thetas: np.ndarray
    panel: EntropyPanel
    cond_a_given_pib: np.ndarray
    cond_c_given_piab: np.ndarray

    @property
    def i0(self):
        return np.full(self.thetas.shape, _i0(self.panel))

    @property
    def i1(self):
        return _i1(self.panel, self.cond_a_given_pib)

    @property
    def i2(self):
        return _i2(self.panel, self.cond_c_given_piab)

    @property
    def d1c(self):
        return _d1c(self.panel, self.cond_a_given_pib)

    @property
    def d2c(self):
        return _d2c(self.panel, self.cond_c_given_piab)

    @property
    def drc(self):
        return _drc(self.panel, self.cond_a_given_pib, self.cond_c_given_piab)


def kernel_conditional_entropies(rho, thetas):
    """Both measured conditional entropies on a grid, from the compiled kernel."""
    _require_three_qubits(rho)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    *_, sa, sc, ok = _kernels.state_terms(np.ascontiguousarray(rho.matrix), thetas)
    if not ok:
        raise ConvergenceError("Jacobi iteration did not converge")
    return np.asarray(sa), np.asarray(sc)


def theta_profile(rho, thetas, panel=None):
    thetas = np.asarray(thetas, dtype=np.float64)
    sa, sc = kernel_conditional_entropies(rho, thetas)
    return ThetaProfile(thetas, panel or entropy_panel(rho), sa, sc)


_POINTWISE = {"d1c": dissension_d1c, "d2c": dissension_d2c, "drc": dissension_drc}


def minimized_dissension(rho, which="drc", **kwargs):
    """Minimum of ``D1C``, ``D2C`` or ``D_RC`` over the basis angle.

    The grid scan runs through :func:`theta_profile`; the golden-section
    refinement evaluates the pointwise functions.
    """
    p = entropy_panel(rho)
    fn = _POINTWISE[which]
    kwargs.setdefault("grid_values", lambda g: getattr(theta_profile(rho, g, p), which))
    return minimize_over_theta(lambda t: fn(rho, t, panel=p), **kwargs)


def residual_correlation(rho, **kwargs):
    """Residual correlation: ``D_RC`` minimised over the basis angle."""
    return minimized_dissension(rho, "drc", **kwargs)


class Lemma1Check(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def verify_lemma1(psi, check_points=20, tol=1e-8):
    """Check the pure-state reduction of the residual correlation.

    ``lhs`` minimises the full ``D_RC``; ``rhs`` is ``S(rho_B)`` plus the
    minimum of the B-measured conditional entropy of A. ``ok`` also requires
    the global entropy and the AB-measured conditional entropy of C (at
    ``check_points`` angles) to vanish within 1e-9.
    """
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    rho = to_density(psi)
    p = entropy_panel(rho)
    lhs = residual_correlation(rho).value
    rhs = p.s_b + minimize_over_theta(
        lambda t: conditional_entropy_one(rho, t),
        grid_values=lambda g: kernel_conditional_entropies(rho, g)[0],
    ).value
    thetas = TWO_PI * np.arange(check_points) / check_points
    c2 = max(conditional_entropy_two(rho, t) for t in thetas)
    ok = abs(lhs - rhs) < tol and p.s_abc < 1e-9 and c2 < 1e-9
    return Lemma1Check(lhs, rhs, bool(ok))
