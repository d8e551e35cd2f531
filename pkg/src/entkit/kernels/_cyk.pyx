# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: cyclic Jacobi eigensolver and ensemble rotation sweeps.

Mirrors the numpy backend semantics; the search grids are read from
``_grids`` at import time so both backends run the same protocol.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, log, sin, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

BACKEND = "compiled"

from . import _grids as _g

cdef enum:
    MAX_GRID = 64
    MAX_MARG = 32
    MAX_MARG2 = 1024

cdef double[MAX_GRID] _THETAS
cdef double[MAX_GRID] _PHIS
cdef int _NT = 0
cdef int _NP = 0
cdef int _NREF = 0
cdef double _TSTEP0 = 0.0
cdef double _PSTEP0 = 0.0
cdef double _ACCEPT = 0.0
cdef double _WFLOOR = 0.0
cdef double _EFLOOR = 0.0
cdef double _LN2 = 0.6931471805599453


def _init_grids():
    global _NT, _NP, _NREF, _TSTEP0, _PSTEP0, _ACCEPT, _WFLOOR, _EFLOOR
    thetas = np.asarray(_g.THETAS, dtype=np.float64)
    phis = np.asarray(_g.PHIS, dtype=np.float64)
    if thetas.shape[0] > MAX_GRID or phis.shape[0] > MAX_GRID:
        raise RuntimeError("search grid larger than compiled capacity")
    cdef int i
    for i in range(thetas.shape[0]):
        _THETAS[i] = thetas[i]
    for i in range(phis.shape[0]):
        _PHIS[i] = phis[i]
    _NT = thetas.shape[0]
    _NP = phis.shape[0]
    _NREF = int(_g.REFINE_ROUNDS)
    _TSTEP0 = float(_g.THETA_STEP0)
    _PSTEP0 = float(_g.PHI_STEP0)
    _ACCEPT = float(_g.ACCEPT_EPS)
    _WFLOOR = float(_g.WEIGHT_FLOOR)
    _EFLOOR = float(_g.ENTROPY_FLOOR)


_init_grids()


# ---------------------------------------------------------------------------
# cyclic Jacobi for hermitian matrices
# ---------------------------------------------------------------------------


cdef void _jacobi_core(double complex* a, double complex* v, Py_ssize_t n,
                       bint want_v) noexcept nogil:
    cdef Py_ssize_t i, p, q, sweep
    cdef double scale = 0.0, off, zre, zim, mag, app, aqq, tau, t, c, s
    cdef double complex alpha, calpha, xp, xq
    for i in range(n * n):
        zre = a[i].real
        zim = a[i].imag
        scale += zre * zre + zim * zim
    scale = sqrt(scale)
    if scale == 0.0:
        return
    for sweep in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                zre = a[p * n + q].real
                zim = a[p * n + q].imag
                off += zre * zre + zim * zim
        if sqrt(2.0 * off) <= 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                zre = a[p * n + q].real
                zim = a[p * n + q].imag
                mag = sqrt(zre * zre + zim * zim)
                if mag <= 1e-18 * scale:
                    continue
                app = a[p * n + p].real
                aqq = a[q * n + q].real
                tau = (aqq - app) / (2.0 * mag)
                if tau >= 0.0:
                    t = -1.0 / (tau + sqrt(tau * tau + 1.0))
                else:
                    t = 1.0 / (-tau + sqrt(tau * tau + 1.0))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                alpha = (zre / mag) + 1j * (zim / mag)
                calpha = (zre / mag) - 1j * (zim / mag)
                # columns: X <- X U
                for i in range(n):
                    xp = a[i * n + p]
                    xq = a[i * n + q]
                    a[i * n + p] = c * xp + s * calpha * xq
                    a[i * n + q] = -s * alpha * xp + c * xq
                # rows: X <- U^+ X
                for i in range(n):
                    xp = a[p * n + i]
                    xq = a[q * n + i]
                    a[p * n + i] = c * xp + s * alpha * xq
                    a[q * n + i] = -s * calpha * xp + c * xq
                # exact 2x2 block
                a[p * n + q] = 0.0
                a[q * n + p] = 0.0
                a[p * n + p] = app + t * mag
                a[q * n + q] = aqq - t * mag
                if want_v:
                    for i in range(n):
                        xp = v[i * n + p]
                        xq = v[i * n + q]
                        v[i * n + p] = c * xp + s * calpha * xq
                        v[i * n + q] = -s * alpha * xp + c * xq


def eigh(h):
    """Hermitian eigendecomposition: ascending eigenvalues, orthonormal columns."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.array(
        h, dtype=np.complex128, order="C", copy=True
    )
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v = np.eye(n, dtype=np.complex128)
    # magnitude pre-scaling keeps the squared-norm accumulators finite
    cdef double mag = float(np.abs(a).max()) if n > 0 else 0.0
    rescale = mag > 0.0 and (mag > 1e50 or mag < 1e-50)
    if rescale:
        a /= mag
    if n > 0:
        _jacobi_core(<double complex*> a.data, <double complex*> v.data, n, True)
    w = np.diagonal(a).real.copy()
    if rescale:
        w = w * mag
    order = np.argsort(w, kind="stable")
    return np.ascontiguousarray(w[order]), np.ascontiguousarray(v[:, order])


# ---------------------------------------------------------------------------
# weighted marginal entropies
# ---------------------------------------------------------------------------


cdef double _went_row(const double complex* row, int d1, int d2,
                      double complex* marg, double* evals) noexcept nogil:
    """Weighted marginal entropy (bits) of one subnormalized vector."""
    cdef int i, j, k
    cdef double complex acc
    cdef double p = 0.0, ent = 0.0, lam, nu, tr, det, mid, disc, re, im
    for i in range(d1):
        for j in range(d1):
            acc = 0.0
            for k in range(d2):
                acc = acc + row[i * d2 + k] * (row[j * d2 + k].conjugate())
            marg[i * d1 + j] = acc
    for i in range(d1):
        p += marg[i * d1 + i].real
    if p <= _WFLOOR:
        return 0.0
    if d1 == 1:
        return 0.0
    if d1 == 2:
        tr = marg[0].real + marg[3].real
        re = marg[1].real
        im = marg[1].imag
        det = marg[0].real * marg[3].real - (re * re + im * im)
        mid = 0.5 * tr
        disc = mid * mid - det
        if disc < 0.0:
            disc = 0.0
        disc = sqrt(disc)
        evals[0] = mid - disc
        evals[1] = mid + disc
    else:
        _jacobi_core(marg, NULL, d1, False)
        for i in range(d1):
            evals[i] = marg[i * d1 + i].real
    for i in range(d1):
        lam = evals[i]
        if lam <= 0.0:
            continue
        nu = lam / p
        if nu > _EFLOOR:
            ent -= lam * (log(nu) / _LN2)
    return ent


def column_scores(ens, int d1, int d2):
    """Per-member weights and weighted marginal entropies (bits)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] e = np.ascontiguousarray(
        ens, dtype=np.complex128
    )
    cdef Py_ssize_t k = e.shape[0]
    cdef Py_ssize_t n = e.shape[1]
    if d1 > MAX_MARG or d1 * d2 != n:
        raise ValueError("bad split for column_scores")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = np.zeros(k)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ew = np.zeros(k)
    cdef double complex marg[MAX_MARG2]
    cdef double evals[MAX_MARG]
    cdef double complex* rows = <double complex*> e.data
    cdef Py_ssize_t j, i
    cdef double acc
    for j in range(k):
        acc = 0.0
        for i in range(n):
            acc += rows[j * n + i].real ** 2 + rows[j * n + i].imag ** 2
        p[j] = acc
        ew[j] = _went_row(rows + j * n, d1, d2, marg, evals)
    return p, ew


# ---------------------------------------------------------------------------
# rotation sweep for the entanglement-of-formation search
# ---------------------------------------------------------------------------


cdef double _pair_eval(const double complex* ea, const double complex* eb,
                       Py_ssize_t n, double th, double ph, int d1, int d2,
                       double complex* wa, double complex* wb,
                       double complex* marg, double* evals) noexcept nogil:
    cdef double c = cos(th)
    cdef double s = sin(th)
    cdef double complex z = cos(ph) + 1j * sin(ph)
    cdef double complex cz = cos(ph) - 1j * sin(ph)
    cdef Py_ssize_t i
    for i in range(n):
        wa[i] = c * ea[i] - s * z * eb[i]
        wb[i] = s * cz * ea[i] + c * eb[i]
    return _went_row(wa, d1, d2, marg, evals) + _went_row(wb, d1, d2, marg, evals)


def eof_sweep(ens, ew, int d1, int d2):
    """One cyclic pass of two-member rotations; updates ens/ew in place."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] e = ens
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scores = ew
    cdef Py_ssize_t k = e.shape[0]
    cdef Py_ssize_t n = e.shape[1]
    if d1 > MAX_MARG or d1 * d2 != n:
        raise ValueError("bad split for eof_sweep")
    cdef double complex* rows = <double complex*> e.data
    cdef double complex* wa = <double complex*> malloc(2 * n * sizeof(double complex))
    if wa == NULL:
        raise MemoryError()
    cdef double complex* wb = wa + n
    cdef double complex marg[MAX_MARG2]
    cdef double evals[MAX_MARG]
    cdef double gained = 0.0
    cdef Py_ssize_t a, b, i
    cdef int it, ip, r, best_it
    cdef double base, best, f, th, ph, dth, dph, cth, cph_
    cdef double cand_th[3]
    cdef double cand_ph[3]
    cdef double pi_half = 1.5707963267948966
    cdef double complex z, cz, xa, xb
    cdef double c, s
    try:
        for a in range(k - 1):
            for b in range(a + 1, k):
                base = scores[a] + scores[b]
                best = 1e300
                th = 0.0
                ph = 0.0
                for it in range(_NT):
                    for ip in range(_NP):
                        f = _pair_eval(rows + a * n, rows + b * n, n,
                                       _THETAS[it], _PHIS[ip], d1, d2,
                                       wa, wb, marg, evals)
                        if f < best:
                            best = f
                            th = _THETAS[it]
                            ph = _PHIS[ip]
                if best >= base - _ACCEPT:
                    continue
                dth = _TSTEP0
                dph = _PSTEP0
                for r in range(_NREF):
                    cand_th[0] = th - dth
                    cand_th[1] = th
                    cand_th[2] = th + dth
                    for i in range(3):
                        if cand_th[i] < 1e-9:
                            cand_th[i] = 1e-9
                        if cand_th[i] > pi_half - 1e-9:
                            cand_th[i] = pi_half - 1e-9
                    cand_ph[0] = ph - dph
                    cand_ph[1] = ph
                    cand_ph[2] = ph + dph
                    best_it = -1
                    for it in range(3):
                        for ip in range(3):
                            f = _pair_eval(rows + a * n, rows + b * n, n,
                                           cand_th[it], cand_ph[ip], d1, d2,
                                           wa, wb, marg, evals)
                            if f < best:
                                best = f
                                best_it = it * 3 + ip
                    if best_it >= 0:
                        th = cand_th[best_it // 3]
                        ph = cand_ph[best_it % 3]
                    dth *= 0.5
                    dph *= 0.5
                if best >= base - _ACCEPT:
                    continue
                c = cos(th)
                s = sin(th)
                z = cos(ph) + 1j * sin(ph)
                cz = cos(ph) - 1j * sin(ph)
                for i in range(n):
                    xa = rows[a * n + i]
                    xb = rows[b * n + i]
                    rows[a * n + i] = c * xa - s * z * xb
                    rows[b * n + i] = s * cz * xa + c * xb
                scores[a] = _went_row(rows + a * n, d1, d2, marg, evals)
                scores[b] = _went_row(rows + b * n, d1, d2, marg, evals)
                gained += base - (scores[a] + scores[b])
    finally:
        free(wa)
    return gained
