"""Independent reference computations used to freeze expected values.

Everything here deliberately avoids the package's own code paths: partial
transposes are explicit index permutations, eigenproblems go through
numpy.linalg directly, and the two-qubit entanglement-of-formation uses
the closed concurrence formula.
"""

import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def pt_reference(mat, d1, d2, leg):
    """Partial transpose by explicit index permutation."""
    out = np.zeros_like(np.asarray(mat, dtype=complex))
    for i in range(d1):
        for k in range(d2):
            for j in range(d1):
                for l in range(d2):
                    if leg == 2:
                        out[i * d2 + k, j * d2 + l] = mat[i * d2 + l, j * d2 + k]
                    else:
                        out[i * d2 + k, j * d2 + l] = mat[j * d2 + k, i * d2 + l]
    return out


def trace_out_reference(mat, d1, d2, keep):
    """Partial trace by explicit summation."""
    if keep == 1:
        out = np.zeros((d1, d1), dtype=complex)
        for i in range(d1):
            for j in range(d1):
                for k in range(d2):
                    out[i, j] += mat[i * d2 + k, j * d2 + k]
    else:
        out = np.zeros((d2, d2), dtype=complex)
        for k in range(d2):
            for l in range(d2):
                for i in range(d1):
                    out[k, l] += mat[i * d2 + k, i * d2 + l]
    return out


def binary_entropy(x):
    h = 0.0
    for t in (x, 1.0 - x):
        if t > 1e-15:
            h -= t * np.log2(t)
    return h


def wootters_eof(rho):
    """Exact two-qubit entanglement of formation via the concurrence."""
    yy = np.kron(SY, SY)
    r = rho @ yy @ rho.conj() @ yy
    ev = np.sqrt(np.abs(np.linalg.eigvals(r).real))
    ev.sort()
    c = max(0.0, ev[3] - ev[2] - ev[1] - ev[0])
    if c == 0.0:
        return 0.0
    return binary_entropy((1.0 + np.sqrt(1.0 - c * c)) / 2.0)


def random_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (g + g.conj().T) / 2.0


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return g @ g.conj().T
