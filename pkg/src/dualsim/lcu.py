"""
Decomposition of arbitrary square operators into positive combinations of unitaries.

Any operator ``A`` splits into Hermitian parts ``A = B + iC``. A Hermitian
``H`` with operator norm ``s`` is the midpoint of two unitaries::

    H = (s/2) (U + U^dagger),    U = H/s + i sqrt(I - (H/s)^2)

so ``A`` is a combination of at most four unitaries with positive weights
summing to ``||B|| + ||C||``. Zero parts contribute no terms.

Also provides membership tests for the operator-norm unit ball and the
midpoint test behind "unitaries are its extreme points".
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionError, NotHermitianError, NotUnitaryError, NumericalError

UNITARY_TOL = 1e-9
CONTRACTION_SLACK = 1e-9
MIDPOINT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class UnitaryCombination:
    """``sum_k c_k V_k`` with every ``c_k > 0`` and every ``V_k`` unitary."""

    terms: tuple[tuple[float, np.ndarray], ...]
    dim: int

    def __post_init__(self):
        terms = []
        for c, v in self.terms:
            c = float(c)
            v = linalg.as_matrix(v, square=True)
            if not (np.isfinite(c) and c > 0):
                raise NumericalError(f"coefficients must be strictly positive, got {c!r}")
            if v.shape != (self.dim, self.dim):
                raise DimensionError(f"term of shape {v.shape} in a dimension-{self.dim} combination")
            if not linalg.is_unitary(v, UNITARY_TOL):
                raise NotUnitaryError("combination term is not unitary")
            terms.append((c, v))
        object.__setattr__(self, "terms", tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> list[float]:
        return [c for c, _ in self.terms]

    @property
    def unitaries(self) -> list[np.ndarray]:
        return [v for _, v in self.terms]


@dataclass(frozen=True, eq=False)
class ContractionWitness:
    operator: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        op = linalg.as_matrix(self.operator, square=True)
        object.__setattr__(self, "operator", op)
        object.__setattr__(self, "norm", linalg.operator_norm(op))

    @property
    def is_member(self) -> bool:
        return self.norm <= 1.0 + CONTRACTION_SLACK


def hermitian_split(a) -> tuple[np.ndarray, np.ndarray]:
    """Cartesian decomposition ``a = b + i c`` with ``b``, ``c`` Hermitian."""
    a = linalg.as_matrix(a, square=True)
    ad = a.conj().T
    b = (a + ad) / 2
    c = (a - ad) / 2j
    return linalg.as_matrix(b), linalg.as_matrix(c)


def hermitian_to_unitaries(h) -> UnitaryCombination:
    h = linalg.as_matrix(h, square=True)
    if not linalg.is_hermitian(h, linalg.TOL_STRICT):
        raise NotHermitianError("hermitian_to_unitaries requires a Hermitian matrix")
    d = h.shape[0]
    s = linalg.operator_norm(h)
    if s == 0.0:
        return UnitaryCombination((), d)
    hs = h / s
    root = linalg.psd_sqrt(np.eye(d) - hs @ hs)
    u = hs + 1j * root
    return UnitaryCombination(((s / 2, u), (s / 2, u.conj().T)), d)


def decompose(a) -> UnitaryCombination:
    """Write ``a`` as a positive combination of at most four unitaries."""
    b, c = hermitian_split(a)
    d = b.shape[0]
    terms = list(hermitian_to_unitaries(b).terms)
    terms += [(coef, 1j * v) for coef, v in hermitian_to_unitaries(c).terms]
    return UnitaryCombination(tuple(terms), d)


def reconstruct(comb: UnitaryCombination) -> np.ndarray:
    out = np.zeros((comb.dim, comb.dim), dtype=complex)
    for c, v in comb.terms:
        if v.shape != out.shape:
            raise DimensionError("combination terms disagree in dimension")
        out += c * v
    return linalg.as_matrix(out)


def is_in_contraction_set(t) -> bool:
    """Whether ``t`` lies in the operator-norm unit ball."""
    return ContractionWitness(t).is_member


def midpoint_unitarity_check(v, w) -> bool:
    """Whether ``(v + w)/2`` is unitary; for unitary ``v``, ``w`` this holds only when ``v == w``."""
    v = linalg.as_matrix(v, square=True)
    w = linalg.as_matrix(w, square=True)
    if v.shape != w.shape:
        raise DimensionError(f"shape mismatch {v.shape} vs {w.shape}")
    if not (linalg.is_unitary(v, UNITARY_TOL) and linalg.is_unitary(w, UNITARY_TOL)):
        raise NotUnitaryError("midpoint_unitarity_check requires unitary inputs")
    return linalg.is_unitary((v + w) / 2, MIDPOINT_TOL)
