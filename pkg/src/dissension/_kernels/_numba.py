"""Numba-compiled hot kernels.

Every public function here has a twin with the same signature and semantics in
``_numpy.py``. Results agree to rounding; the PRNG integer stream is bit-exact
between the two.
"""

import math

import numpy as np
from numba import njit

from ..constants import EIGEN_TOL, MAX_JACOBI_SWEEPS, PROB_TOL

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * math.pi
_INV_LN2 = 1.0 / math.log(2.0)


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def splitmix64_stream(seed, count):
    out = np.empty(count, dtype=np.uint64)
    state = np.uint64(seed)
    for k in range(count):
        state = state + _GAMMA
        out[k] = _mix(state)
    return out


@njit(cache=True)
def uniform_stream(seed, count):
    raw = splitmix64_stream(seed, count)
    out = np.empty(count)
    for k in range(count):
        out[k] = np.float64(raw[k] >> _S11) * _INV53
    return out


@njit(cache=True)
def ginibre(seed, dim, rank):
    """Row-major ``dim x rank`` complex Gaussian matrix, one Box-Muller pair per entry."""
    u = uniform_stream(seed, 2 * dim * rank)
    g = np.empty((dim, rank), dtype=np.complex128)
    k = 0
    for i in range(dim):
        for j in range(rank):
            r = math.sqrt(-2.0 * math.log(1.0 - u[k]))
            phi = _TWO_PI * u[k + 1]
            g[i, j] = complex(r * math.cos(phi), r * math.sin(phi))
            k += 2
    return g


@njit(cache=True)
def ginibre_density(seed, dim, rank):
    g = ginibre(seed, dim, rank)
    rho = g @ np.conj(g.T)
    tr = 0.0
    for i in range(dim):
        tr += rho[i, i].real
    rho /= tr
    for i in range(dim):
        rho[i, i] = rho[i, i].real
        for j in range(i + 1, dim):
            rho[j, i] = np.conj(rho[i, j])
    return rho


@njit(cache=True)
def _off_norm(a):
    n = a.shape[0]
    acc = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            acc += a[p, q].real ** 2 + a[p, q].imag ** 2
    return math.sqrt(2.0 * acc)


@njit(cache=True)
def jacobi_eigh(m, tol=EIGEN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    """Cyclic complex Jacobi. Returns ``(eigenvalues ascending, eigenvectors, converged)``."""
    n = m.shape[0]
    a = m.astype(np.complex128)
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, np.sqrt(np.sum(np.abs(a) ** 2)))
    converged = False
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) < tol * scale:
            converged = True
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (beta - alpha) / (2.0 * mag)
                t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
                if tau < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                e = apq / mag
                se = s * e
                sec = s * np.conj(e)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sec * akq
                    a[k, q] = se * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - se * aqk
                    a[q, k] = sec * apk + c * aqk
                a[p, p] = alpha - t * mag
                a[q, q] = beta + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sec * vkq
                    v[k, q] = se * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order], converged


@njit(cache=True)
def _entropy_of_eigs(w, norm):
    # entropy (bits) of eigenvalues w / norm
    acc = 0.0
    for i in range(w.shape[0]):
        lam = w[i] / norm
        if lam > PROB_TOL:
            acc -= lam * math.log(lam)
    acc *= _INV_LN2
    return acc if acc > 0.0 else 0.0


@njit(cache=True)
def _weighted_entropy2(s00, s11, s01):
    """``p * S(sigma / p)`` for an unnormalised 2x2 Hermitian block, p = trace.

    A 2x2 Jacobi step diagonalises in one rotation, so the eigenvalues come
    straight from the rotation formula.
    """
    p = s00 + s11
    if p <= PROB_TOL:
        return 0.0
    mag = abs(s01)
    if mag == 0.0:
        l0 = s00
        l1 = s11
    else:
        tau = (s11 - s00) / (2.0 * mag)
        t = 1.0 / (abs(tau) + math.sqrt(1.0 + tau * tau))
        if tau < 0.0:
            t = -t
        l0 = s00 - t * mag
        l1 = s11 + t * mag
    acc = 0.0
    lam = l0 / p
    if lam > PROB_TOL:
        acc -= lam * math.log(lam)
    lam = l1 / p
    if lam > PROB_TOL:
        acc -= lam * math.log(lam)
    acc *= _INV_LN2
    if acc < 0.0:
        acc = 0.0
    return p * acc


@njit(cache=True)
def _reduce_ab(rho):
    rab = np.empty((4, 4), dtype=np.complex128)
    for i in range(4):
        for j in range(4):
            rab[i, j] = rho[2 * i, 2 * j] + rho[2 * i + 1, 2 * j + 1]
    return rab


@njit(cache=True)
def _fill_terms(rho, rab, cos_t, sin_t, sa, sc):
    n_theta = cos_t.shape[0]
    u = np.empty((2, 2))
    v = np.zeros((4, 4))
    for k in range(n_theta):
        c = cos_t[k]
        s = sin_t[k]
        # one-particle basis on B
        u[0, 0] = c
        u[0, 1] = s
        u[1, 0] = s
        u[1, 1] = -c
        acc = 0.0
        for j in range(2):
            b0 = u[j, 0]
            b1 = u[j, 1]
            w00 = b0 * b0
            w01 = b0 * b1
            w11 = b1 * b1
            s00 = (
                w00 * rab[0, 0].real
                + 2.0 * w01 * rab[0, 1].real
                + w11 * rab[1, 1].real
            )
            s11 = (
                w00 * rab[2, 2].real
                + 2.0 * w01 * rab[2, 3].real
                + w11 * rab[3, 3].real
            )
            s01 = (
                w00 * rab[0, 2]
                + w01 * (rab[0, 3] + rab[1, 2])
                + w11 * rab[1, 3]
            )
            acc += _weighted_entropy2(s00, s11, s01)
        sa[k] = acc
        # two-particle basis on AB, rows are |v1>..|v4> over |00>,|01>,|10>,|11>
        v[0, 0] = c
        v[0, 3] = s
        v[1, 0] = s
        v[1, 3] = -c
        v[2, 1] = c
        v[2, 2] = s
        v[3, 1] = s
        v[3, 2] = -c
        acc = 0.0
        for j in range(4):
            s00 = 0.0
            s11 = 0.0
            s01 = 0.0 + 0.0j
            for x in range(4):
                vx = v[j, x]
                if vx == 0.0:
                    continue
                for y in range(4):
                    vy = v[j, y]
                    if vy == 0.0:
                        continue
                    w = vx * vy
                    s00 += w * rho[2 * x, 2 * y].real
                    s11 += w * rho[2 * x + 1, 2 * y + 1].real
                    s01 += w * rho[2 * x, 2 * y + 1]
            acc += _weighted_entropy2(s00, s11, s01)
        sc[k] = acc


@njit(cache=True)
def state_terms(rho, thetas):
    """Entropies needed for D_RC and the merging deltas of one 3-qubit state.

    Returns ``(s_b, s_ab, s_abc, s_a_given_pib[T], s_c_given_piab[T], converged)``.
    """
    n_theta = thetas.shape[0]
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)
    rab = _reduce_ab(rho)
    w8, _, ok8 = jacobi_eigh(rho)
    w4, _, ok4 = jacobi_eigh(rab)
    rb00 = rab[0, 0].real + rab[2, 2].real
    rb11 = rab[1, 1].real + rab[3, 3].real
    rb01 = rab[0, 1] + rab[2, 3]
    s_b = _weighted_entropy2(rb00, rb11, rb01) / (rb00 + rb11)
    s_ab = _entropy_of_eigs(w4, 1.0)
    s_abc = _entropy_of_eigs(w8, 1.0)
    sa = np.empty(n_theta)
    sc = np.empty(n_theta)
    _fill_terms(rho, rab, cos_t, sin_t, sa, sc)
    return s_b, s_ab, s_abc, sa, sc, ok8 and ok4


@njit(cache=True)
def sweep_batch(seeds, rank, thetas):
    """Sample one Ginibre state per seed and evaluate it on the theta grid.

    Returns ``(purity[N], drc[N,T], delta1[N,T], delta2[N,T], converged)``.
    ``drc`` uses the dissension formula; the deltas use the merging-cost
    formula, so ``drc - delta1 - delta2`` is a rounding-level echo check.
    """
    n = seeds.shape[0]
    n_theta = thetas.shape[0]
    purity = np.empty(n)
    drc = np.empty((n, n_theta))
    d1 = np.empty((n, n_theta))
    d2 = np.empty((n, n_theta))
    converged = True
    for i in range(n):
        rho = ginibre_density(seeds[i], 8, rank)
        acc = 0.0
        for x in range(8):
            for y in range(8):
                acc += rho[x, y].real ** 2 + rho[x, y].imag ** 2
        purity[i] = acc
        s_b, s_ab, s_abc, sa, sc, ok = state_terms(rho, thetas)
        converged = converged and ok
        a_given_b = s_ab - s_b
        c_given_ab = s_abc - s_ab
        for k in range(n_theta):
            drc[i, k] = sc[k] - s_abc + s_b + sa[k]
            d1[i, k] = sa[k] - a_given_b
            d2[i, k] = sc[k] - c_given_ab
    return purity, drc, d1, d2, converged
