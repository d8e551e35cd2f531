"""Dense complex linear algebra for small bipartite systems.

Everything operates on square complex numpy arrays.  The composite index
convention is fixed globally: the first tensor factor is the slow index,
so a product basis vector |i>|k> sits at position i * d2 + k.
"""

import numpy as np

from . import kernels

HERMITICITY_TOL = 1e-10


def as_complex_matrix(m):
    """Coerce input to a square complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def dagger(m):
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def frobenius_norm(m):
    return float(np.linalg.norm(np.asarray(m)))


def hermiticity_defect(m):
    """Largest entrywise deviation of M from its conjugate transpose."""
    a = np.asarray(m)
    return float(np.abs(a - a.conj().T).max())


def is_hermitian(m, tol=HERMITICITY_TOL):
    return hermiticity_defect(m) <= tol


def _require_hermitian(m, tol, what):
    a = as_complex_matrix(m)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(
            f"{what}: matrix is not hermitian (max deviation {defect:.3e} > {tol:.1e})"
        )
    return (a + a.conj().T) / 2.0


def kron(a, b):
    """Kronecker product with the first factor on the slow index."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def hermitian_eig(h, tol=HERMITICITY_TOL):
    """Eigendecomposition of a hermitian matrix.

    The input is symmetrized when its hermiticity defect is within ``tol``
    and rejected otherwise.  Returns (w, v): eigenvalues ascending and the
    matrix of orthonormal eigenvector columns, h v_k = w_k v_k.
    """
    sym = _require_hermitian(h, tol, "hermitian_eig")
    w, v = kernels.eigh(sym)
    return np.asarray(w, dtype=np.float64), np.asarray(v, dtype=np.complex128)


def _check_split(m, dims):
    d1, d2 = dims
    if d1 < 1 or d2 < 1:
        raise ValueError(f"invalid dimension split {dims}")
    a = as_complex_matrix(m)
    if a.shape[0] != d1 * d2:
        raise ValueError(
            f"matrix dimension {a.shape[0]} does not match split {d1}x{d2}"
        )
    return a, d1, d2


def partial_trace(m, dims, keep):
    """Trace out one tensor factor of a (d1*d2)-dimensional operator.

    ``keep=1`` returns the d1-dimensional operator tr_2 M, ``keep=2``
    returns tr_1 M.  Satisfies tr[tr_2(M) A] = tr[M (A ox I)].
    """
    a, d1, d2 = _check_split(m, dims)
    t = a.reshape(d1, d2, d1, d2)
    if keep == 1:
        return np.einsum("ikjk->ij", t)
    if keep == 2:
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 1 or 2, got {keep}")


def partial_transpose(m, dims, leg):
    """Transpose one tensor factor: (A ox B)^G2 = A ox B^T, extended linearly."""
    a, d1, d2 = _check_split(m, dims)
    t = a.reshape(d1, d2, d1, d2)
    if leg == 1:
        out = t.transpose(2, 1, 0, 3)
    elif leg == 2:
        out = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"leg must be 1 or 2, got {leg}")
    return np.ascontiguousarray(out.reshape(d1 * d2, d1 * d2))


def psd_project(h, tol=HERMITICITY_TOL):
    """Frobenius-nearest positive semidefinite matrix to a hermitian input."""
    sym = _require_hermitian(h, tol, "psd_project")
    w, v = kernels.eigh(sym)
    w = np.clip(w, 0.0, None)
    out = (v * w) @ v.conj().T
    return (out + out.conj().T) / 2.0


def min_eigenvalue(h, tol=HERMITICITY_TOL):
    """Smallest eigenvalue of a hermitian matrix."""
    sym = _require_hermitian(h, tol, "min_eigenvalue")
    w, _ = kernels.eigh(sym)
    return float(w[0])
