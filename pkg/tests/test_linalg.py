import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from dualsim import linalg
from dualsim.errors import DimensionError, NotHermitianError, NumericalError

from randgen import random_hermitian, random_psd, random_unitary, seeds

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
RAISE = np.array([[0, 1], [0, 0]], dtype=complex)


def test_dagger_examples():
    np.testing.assert_array_equal(linalg.dagger(np.eye(2)), np.eye(2))
    np.testing.assert_array_equal(linalg.dagger(RAISE), [[0, 0], [1, 0]])
    np.testing.assert_array_equal(linalg.dagger(Y), Y)


@given(seeds, st.integers(1, 6), st.integers(1, 6))
def test_dagger_is_exact_involution(seed, r, c):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))
    np.testing.assert_array_equal(linalg.dagger(linalg.dagger(m)), m)
    d = linalg.dagger(m)
    for i in range(c):
        for j in range(r):
            assert d[i, j] == np.conj(m[j, i])


def test_matmul_examples():
    np.testing.assert_array_equal(linalg.matmul(X, X), np.eye(2))
    m = np.arange(9).reshape(3, 3) * (1 + 2j)
    np.testing.assert_array_equal(linalg.matmul(np.eye(3), m), m)
    np.testing.assert_allclose(linalg.matmul(H, H), np.eye(2), atol=1e-15)


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        linalg.matmul(np.eye(2), np.eye(3))


def test_tensor_product_examples():
    np.testing.assert_array_equal(linalg.tensor_product(np.eye(2), np.eye(2)), np.eye(4))
    ket00 = linalg.basis_state(4, 0)
    # |10> is index 2 when the first factor is the most significant digit
    np.testing.assert_array_equal(linalg.tensor_product(X, np.eye(2)) @ ket00, linalg.basis_state(4, 2))
    np.testing.assert_array_equal(np.diag(linalg.tensor_product(Z, Z)), [1, -1, -1, 1])


@given(seeds)
def test_tensor_product_index_arithmetic(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(2, 3)).astype(complex)
    b = rng.integers(-3, 4, size=(3, 2)).astype(complex)
    t = linalg.tensor_product(a, b)
    assert t.shape == (6, 6)
    for i in range(2):
        for j in range(3):
            for k in range(3):
                for l in range(2):
                    assert t[i * 3 + k, j * 2 + l] == a[i, j] * b[k, l]


@given(seeds)
def test_tensor_product_associative_on_integers(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.integers(-4, 5, size=(2, 2)) + 1j * rng.integers(-4, 5, size=(2, 2)) for _ in range(3))
    left = linalg.tensor_product(linalg.tensor_product(a, b), c)
    right = linalg.tensor_product(a, linalg.tensor_product(b, c))
    np.testing.assert_array_equal(left, right)


def test_hermitian_eig_examples():
    e = linalg.hermitian_eig(np.diag([3.0, 1.0]))
    np.testing.assert_array_equal(e.eigenvalues, [3, 1])
    np.testing.assert_array_equal(e.eigenvectors, np.eye(2))

    e = linalg.hermitian_eig(X)
    np.testing.assert_allclose(e.eigenvalues, [1, -1], atol=1e-15)
    plus = np.array([1, 1]) / math.sqrt(2)
    minus = np.array([1, -1]) / math.sqrt(2)
    assert abs(abs(np.vdot(plus, e.eigenvectors[:, 0])) - 1) < 1e-12
    assert abs(abs(np.vdot(minus, e.eigenvectors[:, 1])) - 1) < 1e-12

    np.testing.assert_array_equal(linalg.hermitian_eig(np.zeros((4, 4))).eigenvalues, np.zeros(4))


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        linalg.hermitian_eig(RAISE)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 16))
def test_hermitian_eig_reconstruction(seed, d):
    rng = np.random.default_rng(seed)
    h = random_hermitian(rng, d)
    e = linalg.hermitian_eig(h)
    v, lam = e.eigenvectors, e.eigenvalues
    assert np.all(np.diff(lam) <= 0)
    assert np.max(np.abs(v @ np.diag(lam) @ v.conj().T - h)) <= 1e-9
    assert np.max(np.abs(v.conj().T @ v - np.eye(d))) <= 1e-10
    off = v.conj().T @ h @ v
    assert np.max(np.abs(off - np.diag(np.diag(off)))) <= 1e-9
    # independent route: LAPACK
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(h)[::-1], atol=1e-9)


def test_hermitian_eig_degenerate_spectrum():
    rng = np.random.default_rng(3)
    u = random_unitary(rng, 6)
    h = u @ np.diag([2, 2, 2, -1, -1, 0]) @ u.conj().T
    e = linalg.hermitian_eig(h)
    np.testing.assert_allclose(e.eigenvalues, [2, 2, 2, 0, -1, -1], atol=1e-12)


def test_operator_norm_examples():
    assert linalg.operator_norm(np.eye(5)) == pytest.approx(1, abs=1e-15)
    assert linalg.operator_norm(2 * Z) == pytest.approx(2, abs=1e-15)
    assert linalg.operator_norm(RAISE) == pytest.approx(1, abs=1e-15)
    with pytest.raises(DimensionError):
        linalg.operator_norm(np.ones((2, 3)))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 12))
def test_operator_norm_matches_svd(seed, d):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    assert linalg.operator_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False)[0], rel=1e-10)
    assert linalg.operator_norm(random_unitary(rng, d)) == pytest.approx(1, abs=1e-9)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(linalg.psd_sqrt(np.diag([4.0, 9.0])), np.diag([2, 3]), atol=1e-14)
    np.testing.assert_allclose(linalg.psd_sqrt(np.eye(3)), np.eye(3), atol=1e-14)
    np.testing.assert_allclose(linalg.psd_sqrt(np.eye(2) - X @ X), np.zeros((2, 2)), atol=1e-14)


def test_psd_sqrt_clamps_rounding_noise_only():
    np.testing.assert_allclose(linalg.psd_sqrt(np.diag([1.0, -5e-11])), np.diag([1, 0]), atol=1e-14)
    with pytest.raises(NumericalError):
        linalg.psd_sqrt(np.diag([1.0, -1e-6]))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 16), st.booleans())
def test_psd_sqrt_squares_back(seed, d, low_rank):
    rng = np.random.default_rng(seed)
    p = random_psd(rng, d, rank=max(1, d // 2) if low_rank else None)
    r = linalg.psd_sqrt(p)
    assert linalg.is_hermitian(r, 1e-12)
    assert np.linalg.eigvalsh(r).min() >= -1e-8
    assert np.max(np.abs(r @ r - p)) <= 1e-8 * max(1.0, np.abs(p).max())
    if not low_rank:
        np.testing.assert_allclose(r, scipy.linalg.sqrtm(p), atol=1e-7)


def test_frobenius_distance_examples():
    m = np.arange(4).reshape(2, 2) + 1j
    assert linalg.frobenius_distance(m, m) == 0
    assert linalg.frobenius_distance(np.eye(2), np.zeros((2, 2))) == pytest.approx(math.sqrt(2), abs=1e-15)
    ket0 = np.diag([1.0, 0.0])
    assert linalg.frobenius_distance(ket0, np.eye(2) / 2) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    with pytest.raises(DimensionError):
        linalg.frobenius_distance(np.eye(2), np.eye(3))


@given(seeds)
def test_frobenius_distance_matches_entry_loop(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    b = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
    total = 0.0
    for i in range(3):
        for j in range(4):
            diff = a[i, j] - b[i, j]
            total += diff.real**2 + diff.imag**2
    assert linalg.frobenius_distance(a, b) == pytest.approx(math.sqrt(total), rel=1e-14)


def test_is_unitary_examples():
    assert linalg.is_unitary(H, 1e-10)
    assert not linalg.is_unitary(0.5 * np.eye(2), 1e-10)
    u = random_unitary(np.random.default_rng(0), 4)
    assert linalg.is_unitary(np.exp(0.3j) * u, 1e-10)


def test_non_finite_input_rejected():
    with pytest.raises(NumericalError):
        linalg.dagger(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(NumericalError):
        linalg.as_state([np.inf, 0])


def test_as_density_validation():
    with pytest.raises(NotHermitianError):
        linalg.as_density(RAISE)
    with pytest.raises(NumericalError):
        linalg.as_density(np.diag([1.5, -0.5]))
    with pytest.raises(NumericalError):
        linalg.as_density(np.eye(2), proper=True)
    rho = linalg.as_density(np.eye(2) / 2, proper=True)
    assert not rho.flags.writeable
