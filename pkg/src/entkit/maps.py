"""Linear maps on matrices via their Choi representation.

Convention, fixed package-wide: the Choi matrix of a map t is
C = sum_ij E_ij ox t(E_ij), input leg first (slow index).  Block
positivity of C corresponds to positivity of the map, a PSD C to complete
positivity, and a PSD partial transpose of C to co-complete positivity.
"""

from dataclasses import dataclass

import numpy as np

from . import matcore

DEFAULT_DECOMP_TOL = 1e-6
DEFAULT_DECOMP_ITERS = 5000


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi representation of a hermiticity-preserving linear map."""

    mat: np.ndarray
    d_in: int
    d_out: int

    def __post_init__(self):
        a = matcore.as_complex_matrix(self.mat)
        if a.shape[0] != self.d_in * self.d_out:
            raise ValueError(
                f"Choi dimension {a.shape[0]} does not match {self.d_in}x{self.d_out}"
            )
        defect = matcore.hermiticity_defect(a)
        if defect > matcore.HERMITICITY_TOL:
            raise ValueError(
                "Choi matrix not hermitian (the map would not preserve "
                f"hermiticity); defect {defect:.3e}"
            )
        a = (a + a.conj().T) / 2.0
        a.setflags(write=False)
        object.__setattr__(self, "mat", a)

    @property
    def dim(self):
        return self.d_in * self.d_out

    def tensor4(self):
        """View as C[i, a, j, b] with (i, j) input and (a, b) output indices."""
        return self.mat.reshape(self.d_in, self.d_out, self.d_in, self.d_out)

    def to_json(self):
        return choi_to_json(self)


def choi_from_map(fn, d_in, d_out=None):
    """Build the Choi matrix of a map given as a callable on matrices."""
    d_out = d_in if d_out is None else d_out
    c4 = np.zeros((d_in, d_out, d_in, d_out), dtype=np.complex128)
    for i in range(d_in):
        for j in range(d_in):
            e = np.zeros((d_in, d_in), dtype=np.complex128)
            e[i, j] = 1.0
            c4[i, :, j, :] = np.asarray(fn(e), dtype=np.complex128)
    return ChoiMatrix(c4.reshape(d_in * d_out, d_in * d_out), d_in, d_out)


def apply_map(choi, x):
    """Apply the represented map: t(X)_ab = sum_ij X_ij C[i,a,j,b]."""
    xm = matcore.as_complex_matrix(x)
    if xm.shape[0] != choi.d_in:
        raise ValueError(
            f"input dimension {xm.shape[0]} does not match map input {choi.d_in}"
        )
    return np.einsum("ij,iajb->ab", xm, choi.tensor4())


def dual_map(choi):
    """Choi matrix of the adjoint map w.r.t. the trace inner product.

    Satisfies tr[t(X)^+ Y] = tr[X^+ t^d(Y)] for all X, Y.
    """
    c4 = choi.tensor4()
    dual4 = c4.conj().transpose(1, 0, 3, 2)
    d = choi.d_in * choi.d_out
    return ChoiMatrix(np.ascontiguousarray(dual4.reshape(d, d)), choi.d_out, choi.d_in)


def tensor_with_identity(choi, d2):
    """Choi matrix of t ox id acting on the composite (d_in * d2) system."""
    if d2 < 1:
        raise ValueError(f"identity dimension must be >= 1, got {d2}")
    c4 = choi.tensor4()
    eye = np.eye(d2, dtype=np.complex128)
    big = np.einsum("iajb,kl,mn->ikaljmbn", c4, eye, eye)
    din = choi.d_in * d2
    dout = choi.d_out * d2
    return ChoiMatrix(big.reshape(din * dout, din * dout), din, dout)


@dataclass(frozen=True)
class PositivityCheck:
    ok: bool
    min_eig: float


def is_cp(choi, tol=1e-9):
    """Complete positivity: the Choi matrix is PSD."""
    lo = matcore.min_eigenvalue(choi.mat)
    return PositivityCheck(lo >= -tol, lo)


def is_co_cp(choi, tol=1e-9):
    """Co-complete positivity: PSD partial transpose on the output leg."""
    pt = matcore.partial_transpose(choi.mat, (choi.d_in, choi.d_out), leg=2)
    lo = matcore.min_eigenvalue(pt)
    return PositivityCheck(lo >= -tol, lo)


@dataclass(frozen=True, eq=False)
class BlockPositivityReport:
    block_positive: bool
    min_value: float
    witness: tuple | None
    restarts_used: int


def is_block_positive(choi, restarts=40, iters=200, tol=1e-9, seed=0):
    """See-saw search for min <x ox y| C |x ox y> over unit product vectors.

    A negative verdict is certified by the returned witness pair; a positive
    verdict is heuristic evidence whose strength grows with ``restarts``.
    """
    c4 = choi.tensor4()
    rng = np.random.default_rng(seed)
    best = np.inf
    witness = None
    used = 0
    for _ in range(max(1, restarts)):
        used += 1
        y = rng.standard_normal(choi.d_out) + 1j * rng.standard_normal(choi.d_out)
        y /= np.linalg.norm(y)
        x = None
        prev = np.inf
        val = np.inf
        for _ in range(max(1, iters)):
            my = np.einsum("a,iajb,b->ij", y.conj(), c4, y)
            my = (my + my.conj().T) / 2.0
            w, v = matcore.hermitian_eig(my)
            x = v[:, 0]
            nx = np.einsum("i,iajb,j->ab", x.conj(), c4, x)
            nx = (nx + nx.conj().T) / 2.0
            w, v = matcore.hermitian_eig(nx)
            y = v[:, 0]
            val = float(w[0])
            if abs(prev - val) < 1e-12:
                break
            prev = val
        if val < best:
            best = val
            witness = (x.copy(), y.copy())
        if best < -tol:
            break
    ok = best >= -tol
    return BlockPositivityReport(ok, best, None if ok else witness, used)


@dataclass(frozen=True, eq=False)
class DecomposabilityReport:
    """Verdict True/False, or None when the residual is inconclusive."""

    decomposable: bool | None
    residual: float
    iterations: int
    part_cp: np.ndarray | None
    part_co_cp: np.ndarray | None


def _project_co_cp_shifted(z, cmat, dims):
    # Frobenius projection of z onto {A : (C - A)^PT >= 0}; the partial
    # transpose is a Frobenius isometry, so project in transposed frame.
    pt = matcore.partial_transpose(cmat - z, dims, leg=2)
    b = matcore.psd_project(pt)
    return cmat - matcore.partial_transpose(b, dims, leg=2)


def is_decomposable(choi, max_iter=DEFAULT_DECOMP_ITERS, tol=DEFAULT_DECOMP_TOL):
    """Search for a split C = A + B with A PSD and B^PT PSD.

    Runs Dykstra's alternating projections between the PSD cone and the
    shifted co-CP cone.  The returned residual is the Frobenius distance
    between the two projected iterates: below ``tol`` the split is found,
    residuals beyond 10 * tol after the budget are reported as a
    non-decomposability verdict, and the band in between is indeterminate.
    """
    cmat = choi.mat
    dims = (choi.d_in, choi.d_out)
    scale = max(1.0, matcore.frobenius_norm(cmat))
    lo = matcore.min_eigenvalue(cmat)
    if lo >= -1e-10 * scale:
        return DecomposabilityReport(True, 0.0, 0, cmat, np.zeros_like(cmat))
    pt = matcore.partial_transpose(cmat, dims, leg=2)
    if matcore.min_eigenvalue(pt) >= -1e-10 * scale:
        return DecomposabilityReport(True, 0.0, 0, np.zeros_like(cmat), cmat)

    x = cmat.copy()
    p = np.zeros_like(cmat)
    q = np.zeros_like(cmat)
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y = matcore.psd_project(x + p)
        p = x + p - y
        x_new = _project_co_cp_shifted(y + q, cmat, dims)
        q = y + q - x_new
        residual = matcore.frobenius_norm(y - x_new)
        x = x_new
        if residual < tol:
            a = y
            return DecomposabilityReport(True, residual, iterations, a, cmat - a)
    if residual <= 10.0 * tol:
        return DecomposabilityReport(None, residual, iterations, None, None)
    return DecomposabilityReport(False, residual, iterations, None, None)


# ---------------------------------------------------------------------------
# catalog of reference maps
# ---------------------------------------------------------------------------


def _check_dim(d):
    if d < 2:
        raise ValueError(f"map dimension must be >= 2, got {d}")


def catalog(name, **params):
    """Reference maps by name.

    identity(d), transpose(d), depolarizing(d, lam), reduction(d),
    choi_map() on M3 (the canonical non-decomposable positive map) and
    werner_holevo(d).
    """
    if name == "identity":
        d = int(params.get("d", 2))
        _check_dim(d)
        return choi_from_map(lambda x: x, d)
    if name == "transpose":
        d = int(params.get("d", 2))
        _check_dim(d)
        return choi_from_map(lambda x: x.T, d)
    if name == "depolarizing":
        d = int(params.get("d", 2))
        _check_dim(d)
        lam = float(params.get("lam", 1.0))
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"depolarizing weight must be in [0, 1], got {lam}")
        eye = np.eye(d)
        return choi_from_map(
            lambda x: lam * x + (1.0 - lam) * np.trace(x) * eye / d, d
        )
    if name == "reduction":
        d = int(params.get("d", 2))
        _check_dim(d)
        eye = np.eye(d)
        return choi_from_map(lambda x: np.trace(x) * eye - x, d)
    if name == "choi_map":
        return choi_from_map(_choi_map_action, 3)
    if name == "werner_holevo":
        d = int(params.get("d", 2))
        _check_dim(d)
        eye = np.eye(d)
        return choi_from_map(lambda x: (np.trace(x) * eye - x.T) / (d - 1), d)
    raise ValueError(f"unknown catalog map {name!r}")


def _choi_map_action(x):
    # Positive non-decomposable map on M3: diagonal entries x_kk + x_(k+1,k+1)
    # cyclically, off-diagonal entries negated.
    out = -np.asarray(x, dtype=np.complex128).copy()
    for k in range(3):
        out[k, k] = x[k, k] + x[(k + 1) % 3, (k + 1) % 3]
    return out


def random_cp_map(d, kraus_count=2, seed=0):
    """Random completely positive map from Gaussian Kraus operators."""
    rng = np.random.default_rng(seed)
    ops = [
        rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        for _ in range(kraus_count)
    ]
    norm = np.sqrt(sum(float(np.sum(np.abs(a) ** 2)) for a in ops))
    ops = [a / norm for a in ops]
    return choi_from_map(lambda x: sum(a @ x @ a.conj().T for a in ops), d)


# ---------------------------------------------------------------------------
# serialization (field names are part of the file format)
# ---------------------------------------------------------------------------


def choi_to_json(choi):
    return {
        "d_in": int(choi.d_in),
        "d_out": int(choi.d_out),
        "re": choi.mat.real.tolist(),
        "im": choi.mat.imag.tolist(),
        "convention": "in_out",
    }


def choi_from_json(obj):
    try:
        if obj.get("convention", "in_out") != "in_out":
            raise ValueError(f"unsupported Choi convention {obj['convention']!r}")
        d_in = int(obj["d_in"])
        d_out = int(obj["d_out"])
        mat = np.asarray(obj["re"], dtype=np.float64) + 1j * np.asarray(
            obj["im"], dtype=np.float64
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed Choi JSON: {exc}") from exc
    return ChoiMatrix(mat, d_in, d_out)
