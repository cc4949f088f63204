"""
Dense complex linear algebra used throughout the simulator.

Matrices and state vectors are plain ``numpy`` arrays of dtype ``complex128``.
Every public entry point validates its operands through :func:`as_matrix` /
:func:`as_state`, which reject non-finite values, so NaN or Inf never reach
the numerical routines.

The Hermitian eigensolver is a cyclic complex Jacobi iteration; everything
else (products, Kronecker products, norms of vectors) leans on numpy.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError, NumericalError

TOL_STRICT = 1e-10
TOL_RECON = 1e-8
# Jacobi stops once the off-diagonal Frobenius mass drops below this (scaled by ||h||_F when > 1).
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 64
# Eigenvalues in [-PSD_CLAMP, 0) are treated as rounding noise and clamped to zero.
PSD_CLAMP = 1e-10
MAX_DIM = 64


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns orthonormal


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array (a read-only copy)."""
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError("matrix contains NaN or Inf")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return _freeze(arr)


def as_state(psi, *, normalized: bool = False) -> np.ndarray:
    """Coerce ``psi`` to a finite 1-D complex array.

    With ``normalized=True`` the squared norm must be 1 within ``TOL_STRICT``.
    """
    arr = np.array(psi, dtype=complex)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"expected a non-empty state vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericalError("state vector contains NaN or Inf")
    if normalized:
        norm2 = float(np.vdot(arr, arr).real)
        if abs(norm2 - 1.0) > TOL_STRICT:
            raise NumericalError(f"state vector is not normalized (squared norm {norm2!r})")
    return _freeze(arr)


def as_density(rho, *, proper: bool = False) -> np.ndarray:
    """Coerce ``rho`` to a density matrix: Hermitian and PSD within ``TOL_STRICT``.

    ``proper=True`` additionally requires unit trace.
    """
    arr = as_matrix(rho, square=True)
    if not is_hermitian(arr, TOL_STRICT):
        raise NotHermitianError("density matrix is not Hermitian")
    lowest = hermitian_eig(arr).eigenvalues[-1]
    if lowest < -TOL_STRICT:
        raise NumericalError(f"density matrix is not positive semidefinite (eigenvalue {lowest!r})")
    if proper and abs(np.trace(arr).real - 1.0) > TOL_STRICT:
        raise NumericalError(f"density matrix trace {np.trace(arr).real!r} is not 1")
    return arr


def identity(d: int) -> np.ndarray:
    return _freeze(np.eye(d, dtype=complex))


def zero(d: int, cols: int | None = None) -> np.ndarray:
    return _freeze(np.zeros((d, d if cols is None else cols), dtype=complex))


def basis_state(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return _freeze(v)


def outer(psi) -> np.ndarray:
    """|psi><psi| (no normalization applied)."""
    v = as_state(psi)
    return _freeze(np.outer(v, v.conj()))


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return _freeze(as_matrix(m).conj().T.copy())


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return _freeze(a @ b)


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; the first operand indexes the most significant digit."""
    return _freeze(np.kron(as_matrix(a), as_matrix(b)))


def is_hermitian(m, tol: float = TOL_STRICT) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T))) <= tol


def is_unitary(m, tol: float = TOL_STRICT) -> bool:
    """True iff max entrywise |m^dagger m - I| <= tol."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(m.shape[0])))) <= tol


def _off_diagonal_mass(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the classical real Jacobi rotation, so the pivot is annihilated
    exactly in the working copy. Sweeps repeat until the off-diagonal
    Frobenius mass falls below ``JACOBI_TOL`` (relative to ``||h||_F`` for
    large matrices).

    Returns eigenvalues sorted in descending order with matching columns.
    """
    h = as_matrix(h, square=True)
    if not is_hermitian(h, TOL_STRICT):
        raise NotHermitianError("hermitian_eig requires a Hermitian matrix")
    d = h.shape[0]
    a = (h + h.conj().T) / 2
    v = np.eye(d, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    target = JACOBI_TOL * scale

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_mass(a) <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        if _off_diagonal_mass(a) > target:
            raise ConvergenceError("Jacobi iteration did not converge")

    eigenvalues = np.diag(a).real.copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return EigenDecomposition(_freeze(eigenvalues[order]), _freeze(v[:, order].copy()))


def operator_norm(m) -> float:
    """Largest singular value, via the top eigenvalue of m^dagger m."""
    m = as_matrix(m, square=True)
    top = hermitian_eig(m.conj().T @ m).eigenvalues[0]
    return float(np.sqrt(max(top, 0.0)))


def psd_sqrt(h) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-PSD_CLAMP, 0)`` are clamped to zero; anything more
    negative raises :class:`NumericalError`.
    """
    eig = hermitian_eig(h)
    lam = eig.eigenvalues
    if lam[-1] < -PSD_CLAMP:
        raise NumericalError(f"matrix is not positive semidefinite (eigenvalue {lam[-1]!r})")
    roots = np.sqrt(np.clip(lam, 0.0, None))
    vecs = eig.eigenvectors
    r = (vecs * roots) @ vecs.conj().T
    return _freeze((r + r.conj().T) / 2)


def frobenius_distance(a, b) -> float:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2)))


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m, square=True)))
