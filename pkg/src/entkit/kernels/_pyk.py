"""Numpy implementations of the hot kernels.

This is the fallback backend used when the compiled extension is not
available.  Semantics match ``_cyk``: a hermitian eigensolver and the
two-member rotation sweep that drives the entanglement-of-formation
optimizer.  Ensembles are stored as (K, n) arrays whose rows are
subnormalized pure-state vectors.
"""

import numpy as np

from . import _grids

BACKEND = "python"

_LOG2 = np.log(2.0)


def eigh(h):
    """Eigendecomposition of a hermitian matrix.

    Returns (w, v) with eigenvalues ascending and orthonormal eigenvector
    columns.  The input is assumed hermitian; callers symmetrize first.
    """
    return np.linalg.eigh(h)


def _weighted_entropies(rows, d1, d2):
    """Weights and weighted marginal entropies of subnormalized vectors.

    For each row w returns p = <w|w> and p * S(tr_2 |w><w| / p) in bits,
    with zero reported for rows below the weight floor.
    """
    k = rows.shape[0]
    r = rows.reshape(k, d1, d2)
    m = np.matmul(r, r.conj().transpose(0, 2, 1))
    lam = np.linalg.eigvalsh(m)
    lam = np.clip(lam, 0.0, None)
    p = lam.sum(axis=1)
    safe_p = np.where(p > _grids.WEIGHT_FLOOR, p, 1.0)
    nu = lam / safe_p[:, None]
    mask = nu > _grids.ENTROPY_FLOOR
    terms = np.where(mask, -lam * (np.log(np.where(mask, nu, 1.0)) / _LOG2), 0.0)
    ew = terms.sum(axis=1)
    ew[p <= _grids.WEIGHT_FLOOR] = 0.0
    return p, ew


def column_scores(ens, d1, d2):
    """Per-member weights and weighted marginal entropies (bits)."""
    ens = np.ascontiguousarray(ens, dtype=np.complex128)
    return _weighted_entropies(ens, d1, d2)


def _pair_objective(wa, wb, thetas, phis, d1, d2):
    """Rotation objective on the (theta, phi) grid; returns (T*P,) array."""
    c = np.cos(thetas)
    s = np.sin(thetas)
    e = np.exp(1j * phis)
    # candidate rows, shape (T, P, n)
    ra = c[:, None, None] * wa[None, None, :] - (s[:, None] * e[None, :])[:, :, None] * wb[None, None, :]
    rb = (s[:, None] * e.conj()[None, :])[:, :, None] * wa[None, None, :] + c[:, None, None] * wb[None, None, :]
    n = wa.shape[0]
    _, ewa = _weighted_entropies(ra.reshape(-1, n), d1, d2)
    _, ewb = _weighted_entropies(rb.reshape(-1, n), d1, d2)
    return ewa + ewb


def eof_sweep(ens, ew, d1, d2):
    """One cyclic pass of two-member rotations, minimizing sum(ew).

    ``ens`` (K, n) and its weighted-entropy cache ``ew`` (K,) are updated
    in place; returns the total objective improvement of the pass.
    """
    k = ens.shape[0]
    thetas = _grids.THETAS
    phis = _grids.PHIS
    gained = 0.0
    for a in range(k - 1):
        for b in range(a + 1, k):
            wa = ens[a]
            wb = ens[b]
            base = ew[a] + ew[b]
            vals = _pair_objective(wa, wb, thetas, phis, d1, d2)
            idx = int(np.argmin(vals))
            best = vals[idx]
            th = thetas[idx // phis.shape[0]]
            ph = phis[idx % phis.shape[0]]
            if best >= base - _grids.ACCEPT_EPS:
                continue
            dth = _grids.THETA_STEP0
            dph = _grids.PHI_STEP0
            for _ in range(_grids.REFINE_ROUNDS):
                cand_th = np.array([th - dth, th, th + dth])
                cand_ph = np.array([ph - dph, ph, ph + dph])
                cand_th = np.clip(cand_th, 1e-9, np.pi / 2 - 1e-9)
                vals = _pair_objective(wa, wb, cand_th, cand_ph, d1, d2)
                idx = int(np.argmin(vals))
                if vals[idx] < best:
                    best = vals[idx]
                    th = cand_th[idx // 3]
                    ph = cand_ph[idx % 3]
                dth *= 0.5
                dph *= 0.5
            if best >= base - _grids.ACCEPT_EPS:
                continue
            cth = np.cos(th)
            sth = np.sin(th)
            eph = np.exp(1j * ph)
            new_a = cth * wa - sth * eph * wb
            new_b = sth * eph.conjugate() * wa + cth * wb
            ens[a] = new_a
            ens[b] = new_b
            _, pair_ew = _weighted_entropies(np.vstack([new_a, new_b]), d1, d2)
            gained += base - (pair_ew[0] + pair_ew[1])
            ew[a] = pair_ew[0]
            ew[b] = pair_ew[1]
    return gained
