import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualsim import engine, lcu, linalg
from dualsim.errors import DimensionError, NotHermitianError, NotUnitaryError, NumericalError

from randgen import random_disc_matrix, random_distribution, random_gate, random_hermitian, random_unitary, seeds

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
RAISE = np.array([[0, 1], [0, 0]], dtype=complex)


def assert_terms(comb, expected, atol=1e-12):
    assert len(comb) == len(expected)
    for (c, v), (ce, ve) in zip(comb.terms, expected):
        assert c == pytest.approx(ce, abs=atol)
        np.testing.assert_allclose(v, ve, atol=atol)


def test_hermitian_split_examples():
    b, c = lcu.hermitian_split(np.eye(2))
    np.testing.assert_array_equal(b, np.eye(2))
    np.testing.assert_array_equal(c, np.zeros((2, 2)))
    b, c = lcu.hermitian_split(RAISE)
    np.testing.assert_allclose(b, X / 2, atol=1e-15)
    np.testing.assert_allclose(c, Y / 2, atol=1e-15)
    _, c = lcu.hermitian_split(random_hermitian(np.random.default_rng(0), 4))
    assert np.max(np.abs(c)) <= 1e-12


@given(seeds, st.integers(1, 6))
def test_hermitian_split_parts(seed, d):
    a = random_disc_matrix(np.random.default_rng(seed), d)
    b, c = lcu.hermitian_split(a)
    assert linalg.is_hermitian(b, 1e-12) and linalg.is_hermitian(c, 1e-12)
    np.testing.assert_allclose(b + 1j * c, a, atol=1e-15)


def test_hermitian_to_unitaries_examples():
    assert_terms(lcu.hermitian_to_unitaries(X), [(0.5, X), (0.5, X)])
    assert_terms(lcu.hermitian_to_unitaries(np.eye(2)), [(0.5, I2), (0.5, I2)])
    assert_terms(lcu.hermitian_to_unitaries(np.diag([1.0, 0.0])),
                 [(0.5, np.diag([1, 1j])), (0.5, np.diag([1, -1j]))])
    assert len(lcu.hermitian_to_unitaries(np.zeros((3, 3)))) == 0


def test_hermitian_to_unitaries_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        lcu.hermitian_to_unitaries(RAISE)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 8))
def test_hermitian_to_unitaries_reconstructs(seed, d):
    h = random_hermitian(np.random.default_rng(seed), d)
    comb = lcu.hermitian_to_unitaries(h)
    assert linalg.frobenius_distance(lcu.reconstruct(comb), h) <= 1e-8
    assert sum(comb.coefficients) == pytest.approx(np.linalg.svd(h, compute_uv=False)[0], rel=1e-10)


def test_decompose_examples():
    comb = lcu.decompose(RAISE)
    assert_terms(comb, [(0.25, X), (0.25, X), (0.25, 1j * Y), (0.25, 1j * Y)])
    np.testing.assert_allclose(lcu.reconstruct(comb), RAISE, atol=1e-15)
    assert_terms(lcu.decompose(Z), [(0.5, Z), (0.5, Z)])
    assert len(lcu.decompose(np.zeros((2, 2)))) == 0
    with pytest.raises(DimensionError):
        lcu.decompose(np.ones((2, 3)))


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([1, 2, 4, 8]))
def test_decompose_round_trip(seed, d):
    a = random_disc_matrix(np.random.default_rng(seed), d)
    comb = lcu.decompose(a)
    assert 1 <= len(comb) <= 4
    assert all(c > 0 for c in comb.coefficients)
    assert all(linalg.is_unitary(v, 1e-9) for v in comb.unitaries)
    assert linalg.frobenius_distance(lcu.reconstruct(comb), a) <= 1e-8
    b, c = lcu.hermitian_split(a)
    norms = sum(np.linalg.svd(m, compute_uv=False)[0] for m in (b, c))
    assert abs(sum(comb.coefficients) - norms) <= 1e-9


def test_reconstruct_examples():
    np.testing.assert_array_equal(lcu.reconstruct(lcu.UnitaryCombination((), 3)), np.zeros((3, 3)))
    comb = lcu.UnitaryCombination(((0.5, I2), (0.5, Z)), 2)
    np.testing.assert_array_equal(lcu.reconstruct(comb), np.diag([1, 0]))


def test_combination_validation():
    with pytest.raises(NumericalError):
        lcu.UnitaryCombination(((0.0, I2),), 2)
    with pytest.raises(NotUnitaryError):
        lcu.UnitaryCombination(((1.0, 2 * I2),), 2)
    with pytest.raises(DimensionError):
        lcu.UnitaryCombination(((1.0, np.eye(3)),), 2)


def test_contraction_set_examples():
    rng = np.random.default_rng(1)
    p = random_distribution(rng, 3)
    assert lcu.is_in_contraction_set(engine.duality_operator(p, random_gate(rng, 3, 4)))
    assert not lcu.is_in_contraction_set(2 * np.eye(2))
    assert lcu.is_in_contraction_set(np.eye(5))
    w = lcu.ContractionWitness(RAISE)
    assert w.norm == pytest.approx(1) and w.is_member
    with pytest.raises(DimensionError):
        lcu.is_in_contraction_set(np.ones((2, 3)))


@given(seeds, st.integers(1, 6), st.floats(0, 1))
def test_convex_combinations_of_unitaries_are_contractions(seed, d, lam):
    rng = np.random.default_rng(seed)
    v, w = random_unitary(rng, d), random_unitary(rng, d)
    assert lcu.is_in_contraction_set(lam * v + (1 - lam) * w)


def test_midpoint_examples():
    assert lcu.midpoint_unitarity_check(H, H)
    assert not lcu.midpoint_unitarity_check(I2, Z)
    assert not lcu.midpoint_unitarity_check(I2, np.exp(0.5j) * I2)
    with pytest.raises(NotUnitaryError):
        lcu.midpoint_unitarity_check(I2, 0.5 * I2)


@given(seeds, st.integers(1, 6))
def test_midpoint_of_distinct_unitaries_is_not_unitary(seed, d):
    rng = np.random.default_rng(seed)
    v, w = random_unitary(rng, d), random_unitary(rng, d)
    assert linalg.frobenius_distance(v, w) > 1e-3
    assert not lcu.midpoint_unitarity_check(v, w)
    assert lcu.midpoint_unitarity_check(v, v)
