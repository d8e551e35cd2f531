import numpy as np
import pytest
from numpy.testing import assert_allclose

from entkit import matcore

from oracles import SX, SY, SZ, pt_reference, random_hermitian, random_psd, trace_out_reference


def bell_projector():
    v = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(v, v.conj())


class TestKron:
    def test_identity(self):
        assert_allclose(matcore.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_basis_action(self):
        # sigma_x ox sigma_x maps |00> to |11>
        v00 = np.zeros(4)
        v00[0] = 1.0
        out = matcore.kron(SX, SX) @ v00
        expected = np.zeros(4)
        expected[3] = 1.0
        assert_allclose(out, expected)

    def test_dimension_product(self):
        a = np.eye(2)
        b = np.eye(3)
        assert matcore.kron(a, b).shape == (6, 6)

    def test_associativity(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            a = random_hermitian(rng, 2)
            b = random_hermitian(rng, 3)
            c = random_hermitian(rng, 2)
            left = matcore.kron(matcore.kron(a, b), c)
            right = matcore.kron(a, matcore.kron(b, c))
            assert np.abs(left - right).max() < 1e-12

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            matcore.kron(np.ones((2, 3)), np.eye(2))


class TestHermitianEig:
    def test_sigma_z(self):
        w, _ = matcore.hermitian_eig(SZ)
        assert_allclose(w, [-1.0, 1.0], atol=1e-12)

    def test_identity(self):
        w, _ = matcore.hermitian_eig(np.eye(4))
        assert_allclose(w, np.ones(4), atol=1e-12)

    def test_sigma_x_eigenvectors(self):
        w, v = matcore.hermitian_eig(SX)
        assert_allclose(w, [-1.0, 1.0], atol=1e-12)
        minus = np.array([1, -1]) / np.sqrt(2)
        plus = np.array([1, 1]) / np.sqrt(2)
        assert abs(abs(minus @ v[:, 0]) - 1.0) < 1e-9
        assert abs(abs(plus @ v[:, 1]) - 1.0) < 1e-9

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            matcore.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_random_contracts(self):
        rng = np.random.default_rng(11)
        for n in (2, 3, 5, 9, 16):
            h = random_hermitian(rng, n)
            w, v = matcore.hermitian_eig(h)
            assert np.all(np.diff(w) >= -1e-12)
            scale = max(1.0, np.linalg.norm(h))
            assert np.linalg.norm(h - (v * w) @ v.conj().T) < 1e-9 * scale
            assert np.linalg.norm(v.conj().T @ v - np.eye(n)) < 1e-9


class TestPartialTrace:
    def test_product_factorization(self):
        rng = np.random.default_rng(0)
        rho = random_psd(rng, 2)
        rho /= np.trace(rho)
        sigma = random_psd(rng, 3)
        sigma /= np.trace(sigma)
        m = matcore.kron(rho, sigma)
        assert_allclose(matcore.partial_trace(m, (2, 3), keep=1), rho, atol=1e-12)
        assert_allclose(matcore.partial_trace(m, (2, 3), keep=2), sigma, atol=1e-12)

    def test_bell_reduction(self):
        red = matcore.partial_trace(bell_projector(), (2, 2), keep=1)
        assert_allclose(red, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(1)
        m = random_hermitian(rng, 6)
        out = matcore.partial_trace(m, (2, 3), keep=1)
        assert abs(np.trace(out) - np.trace(m)) < 1e-12

    def test_duality_with_kron(self):
        # tr[tr_2(M) A] = tr[M (A ox I)] on random pairs
        rng = np.random.default_rng(2)
        for _ in range(50):
            m = random_hermitian(rng, 6)
            a = random_hermitian(rng, 2)
            lhs = np.trace(matcore.partial_trace(m, (2, 3), keep=1) @ a)
            rhs = np.trace(m @ matcore.kron(a, np.eye(3)))
            assert abs(lhs - rhs) < 1e-10

    def test_matches_reference(self):
        rng = np.random.default_rng(8)
        m = random_hermitian(rng, 6)
        for keep in (1, 2):
            assert_allclose(
                matcore.partial_trace(m, (2, 3), keep=keep),
                trace_out_reference(m, 2, 3, keep),
                atol=1e-13,
            )

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matcore.partial_trace(np.eye(5), (2, 3), keep=1)


class TestPartialTranspose:
    def test_pauli_product(self):
        m = matcore.kron(SX, SY)
        assert_allclose(
            matcore.partial_transpose(m, (2, 2), leg=2), -m, atol=1e-12
        )

    def test_involution_bit_exact(self):
        rng = np.random.default_rng(4)
        m = random_hermitian(rng, 6)
        twice = matcore.partial_transpose(
            matcore.partial_transpose(m, (2, 3), leg=2), (2, 3), leg=2
        )
        assert np.array_equal(twice, m)

    def test_bell_spectrum(self):
        # frozen via direct eigendecomposition of the permuted matrix
        pt = matcore.partial_transpose(bell_projector(), (2, 2), leg=2)
        ref = np.linalg.eigvalsh(pt_reference(bell_projector(), 2, 2, 2))
        assert_allclose(np.linalg.eigvalsh(pt), ref, atol=1e-12)
        assert_allclose(ref, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_matches_reference_both_legs(self):
        rng = np.random.default_rng(5)
        m = random_hermitian(rng, 6)
        for leg in (1, 2):
            assert_allclose(
                matcore.partial_transpose(m, (2, 3), leg=leg),
                pt_reference(m, 2, 3, leg),
                atol=0,
            )

    def test_preserves_trace_hermiticity_norm(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            m = random_hermitian(rng, 6)
            pt = matcore.partial_transpose(m, (2, 3), leg=2)
            assert abs(np.trace(pt) - np.trace(m)) < 1e-12
            assert matcore.hermiticity_defect(pt) < 1e-12
            assert abs(np.linalg.norm(pt) - np.linalg.norm(m)) < 1e-12


class TestPsdProject:
    def test_fixed_point(self):
        rng = np.random.default_rng(7)
        p = random_psd(rng, 4)
        assert np.abs(matcore.psd_project(p) - p).max() < 1e-10

    def test_negative_identity(self):
        assert_allclose(matcore.psd_project(-np.eye(3)), np.zeros((3, 3)), atol=1e-12)

    def test_eigenvalue_clipping(self):
        out = matcore.psd_project(np.diag([1.0, -1.0]))
        assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(9)
        h = random_hermitian(rng, 5)
        once = matcore.psd_project(h)
        assert np.abs(matcore.psd_project(once) - once).max() < 1e-10

    def test_frobenius_minimality(self):
        rng = np.random.default_rng(10)
        h = random_hermitian(rng, 4)
        proj = matcore.psd_project(h)
        dist = np.linalg.norm(h - proj)
        for _ in range(20):
            other = random_psd(rng, 4)
            assert dist <= np.linalg.norm(h - other) + 1e-12

    def test_rejects_nonhermitian(self):
        with pytest.raises(ValueError):
            matcore.psd_project(np.array([[0.0, 1.0], [0.0, 0.0]]))
