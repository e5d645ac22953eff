"""Pure-numpy twins of the kernels in ``_numba.py``.

Loops over Jacobi pivots stay in Python but every update is vectorised over a
batch of matrices, so the fallback is usable (if slower) for whole sweeps.
"""

import math

import numpy as np

from ..constants import EIGEN_TOL, MAX_JACOBI_SWEEPS, PROB_TOL

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0


def splitmix64_stream(seed, count):
    # state after k advances is seed + k * gamma (mod 2**64)
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + k * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniform_stream(seed, count):
    return (splitmix64_stream(seed, count) >> np.uint64(11)).astype(np.float64) * _INV53


def ginibre(seed, dim, rank):
    u = uniform_stream(seed, 2 * dim * rank).reshape(dim * rank, 2)
    r = np.sqrt(-2.0 * np.log(1.0 - u[:, 0]))
    phi = 2.0 * math.pi * u[:, 1]
    return (r * np.cos(phi) + 1j * (r * np.sin(phi))).reshape(dim, rank)


def ginibre_density(seed, dim, rank):
    g = ginibre(seed, dim, rank)
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return _symmetrize(rho)


def _symmetrize(rho):
    upper = np.triu(rho, 1)
    diag = np.diagonal(rho, axis1=-2, axis2=-1).real
    out = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(rho.shape[-1])
    out[..., idx, idx] = diag
    return out


def jacobi_eigh_batch(m, tol=EIGEN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    """Cyclic complex Jacobi applied to a stack ``(N, n, n)`` in lockstep."""
    a = np.array(m, dtype=np.complex128, copy=True)
    nb, n, _ = a.shape
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), a.shape).copy()
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2))))
    iu = np.triu_indices(n, 1)
    rows = np.arange(nb)
    converged = False
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(2.0 * np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off < tol * scale):
            converged = True
            break
        if sweep == max_sweeps:
            break
        for p, q in zip(*iu):
            apq = a[:, p, q].copy()
            mag = np.abs(apq)
            live = mag > 0.0
            safe = np.where(live, mag, 1.0)
            alpha = a[:, p, p].real.copy()
            beta = a[:, q, q].real.copy()
            tau = np.where(live, (beta - alpha) / (2.0 * safe), 0.0)
            with np.errstate(over="ignore"):
                # huge |tau| sends t to 0, which is the correct limit
                t = np.copysign(1.0 / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), tau)
            t = np.where(tau == 0.0, 1.0, t)
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            e = np.where(live, apq / safe, 1.0)
            se = (s * e)[:, None]
            sec = (s * np.conj(e))[:, None]
            cc = c[:, None]
            akp = a[:, :, p].copy()
            akq = a[:, :, q].copy()
            a[:, :, p] = cc * akp - sec * akq
            a[:, :, q] = se * akp + cc * akq
            apk = a[:, p, :].copy()
            aqk = a[:, q, :].copy()
            a[:, p, :] = cc * apk - se * aqk
            a[:, q, :] = sec * apk + cc * aqk
            a[rows, p, p] = np.where(live, alpha - t * mag, a[rows, p, p])
            a[rows, q, q] = np.where(live, beta + t * mag, a[rows, q, q])
            a[rows, p, q] = np.where(live, 0.0, a[rows, p, q])
            a[rows, q, p] = np.where(live, 0.0, a[rows, q, p])
            vkp = v[:, :, p].copy()
            vkq = v[:, :, q].copy()
            v[:, :, p] = cc * vkp - sec * vkq
            v[:, :, q] = se * vkp + cc * vkq
    w = np.diagonal(a, axis1=1, axis2=2).real
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v, converged


def jacobi_eigh(m, tol=EIGEN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    w, v, ok = jacobi_eigh_batch(np.asarray(m)[None], tol, max_sweeps)
    return w[0], v[0], ok


def _entropy_of_eigs(w, norm=1.0):
    lam = w / np.asarray(norm)[..., None]
    safe = np.where(lam > PROB_TOL, lam, 1.0)
    h = -np.sum(np.where(lam > PROB_TOL, lam * np.log2(safe), 0.0), axis=-1)
    return np.maximum(h, 0.0)


def _weighted_entropy_blocks(blocks):
    """``p * S(sigma / p)`` over a stack of unnormalised 2x2 blocks."""
    shape = blocks.shape[:-2]
    flat = blocks.reshape(-1, 2, 2)
    p = np.trace(flat, axis1=1, axis2=2).real
    w, _, ok = jacobi_eigh_batch(flat)
    live = p > PROB_TOL
    h = _entropy_of_eigs(w, np.where(live, p, 1.0))
    return np.where(live, p * h, 0.0).reshape(shape), ok


def _bases(thetas):
    c = np.cos(thetas)
    s = np.sin(thetas)
    z = np.zeros_like(c)
    one = np.stack([np.stack([c, s], -1), np.stack([s, -c], -1)], 1)
    two = np.stack(
        [
            np.stack([c, z, z, s], -1),
            np.stack([s, z, z, -c], -1),
            np.stack([z, c, s, z], -1),
            np.stack([z, s, -c, z], -1),
        ],
        1,
    )
    return one, two


def state_terms_batch(rho, thetas):
    """Vectorised ``state_terms`` over a stack of 3-qubit states ``(N, 8, 8)``."""
    rho = np.asarray(rho, dtype=np.complex128)
    nb = rho.shape[0]
    r6 = rho.reshape(nb, 2, 2, 2, 2, 2, 2)
    rab = np.einsum("nabcxyc->nabxy", r6).reshape(nb, 4, 4)
    rb = np.einsum("nabay->nby", rab.reshape(nb, 2, 2, 2, 2))
    w8, _, ok8 = jacobi_eigh_batch(rho)
    w4, _, ok4 = jacobi_eigh_batch(rab)
    s_b, okb = _weighted_entropy_blocks(rb)
    s_ab = _entropy_of_eigs(w4)
    s_abc = _entropy_of_eigs(w8)

    one, two = _bases(np.asarray(thetas, dtype=np.float64))
    r4 = rab.reshape(nb, 2, 2, 2, 2)
    # sigma_A[n,t,j,a,x] = sum_{b,y} u_tjb u_tjy rab[n,a,b,x,y]
    sig_a = np.einsum("tjb,tjy,nabxy->ntjax", one, one, r4)
    r3 = rho.reshape(nb, 4, 2, 4, 2)
    sig_c = np.einsum("tjb,tjy,nbcyd->ntjcd", two, two, r3)
    ha, oka = _weighted_entropy_blocks(sig_a)
    hc, okc = _weighted_entropy_blocks(sig_c)
    ok = ok8 and ok4 and okb and oka and okc
    return s_b, s_ab, s_abc, ha.sum(axis=2), hc.sum(axis=2), ok


def state_terms(rho, thetas):
    s_b, s_ab, s_abc, sa, sc, ok = state_terms_batch(np.asarray(rho)[None], thetas)
    return float(s_b[0]), float(s_ab[0]), float(s_abc[0]), sa[0], sc[0], ok


def sweep_batch(seeds, rank, thetas):
    seeds = np.asarray(seeds, dtype=np.uint64)
    rho = np.stack([ginibre_density(s, 8, rank) for s in seeds]) if len(seeds) else np.empty((0, 8, 8), complex)
    purity = np.sum(np.abs(rho) ** 2, axis=(1, 2))
    s_b, s_ab, s_abc, sa, sc, ok = state_terms_batch(rho, thetas)
    a_given_b = (s_ab - s_b)[:, None]
    c_given_ab = (s_abc - s_ab)[:, None]
    drc = sc - s_abc[:, None] + s_b[:, None] + sa
    return purity, drc, sa - a_given_b, sc - c_given_ab, ok
