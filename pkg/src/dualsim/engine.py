"""
Divider, combiner and duality-gate pipelines.

Three semantics are provided side by side so they can be compared:

* pure states: ``psi -> sum_i p_i U_i psi`` through an explicit divide /
  gate / combine composition;
* coherent density matrices: the divided state keeps the full ``n x n``
  grid of blocks ``M_ij = p_i p_j rho / ||p||^2`` so the combiner yields
  ``A rho A^dagger`` with ``A = sum_i p_i U_i``;
* the incoherent "Gudder-mixed" map ``rho -> sum_i p_i U_i rho U_i^dagger``,
  which drops the cross terms and disagrees with the pure-state result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, NotUnitaryError, NumericalError

MAX_BRANCHES = 16
WEIGHT_SUM_TOL = 1e-9
UNITARY_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BranchDistribution:
    """Probability vector ``p`` over the divider's branches, with ``||p||`` cached."""

    weights: tuple[float, ...]
    norm: float = field(init=False, compare=False)

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not 1 <= len(w) <= MAX_BRANCHES:
            raise DimensionError(f"branch count must be in [1, {MAX_BRANCHES}], got {len(w)}")
        if not all(np.isfinite(w)):
            raise NumericalError("branch weights must be finite")
        if any(x < 0 for x in w):
            raise NumericalError("branch weights must be nonnegative")
        if abs(sum(w) - 1.0) > WEIGHT_SUM_TOL:
            raise NumericalError(f"branch weights sum to {sum(w)!r}, not 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "norm", float(np.sqrt(sum(x * x for x in w))))

    @property
    def n(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class DualityGate:
    """Per-branch unitaries ``(U_1, ..., U_n)``."""

    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        us = tuple(linalg.as_matrix(u, square=True) for u in self.unitaries)
        if not us:
            raise DimensionError("a duality gate needs at least one unitary")
        d = us[0].shape[0]
        for i, u in enumerate(us):
            if u.shape != (d, d):
                raise DimensionError(f"unitary {i} has shape {u.shape}, expected {(d, d)}")
            if not linalg.is_unitary(u, UNITARY_TOL):
                raise NotUnitaryError(f"path {i} operator is not unitary")
        object.__setattr__(self, "unitaries", us)

    @property
    def n(self) -> int:
        return len(self.unitaries)

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]


@dataclass(frozen=True, eq=False)
class DividedPureState:
    branches: tuple[np.ndarray, ...]
    dist: BranchDistribution

    @property
    def n(self) -> int:
        return len(self.branches)

    @property
    def dim(self) -> int:
        return self.branches[0].shape[0]

    def as_vector(self) -> np.ndarray:
        """The direct sum as one vector of length ``n * dim``."""
        return np.concatenate(self.branches)


@dataclass(frozen=True, eq=False)
class DividedDensityState:
    """Block grid ``blocks[i, j]`` of shape ``(n, n, dim, dim)``."""

    blocks: np.ndarray
    dist: BranchDistribution

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @property
    def dim(self) -> int:
        return self.blocks.shape[2]

    def full_matrix(self) -> np.ndarray:
        n, d = self.n, self.dim
        return self.blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)


@dataclass(frozen=True, eq=False)
class PipelineResult:
    """Unnormalized pipeline output; ``efficiency`` is its squared norm or trace."""

    kind: Literal["pure", "density"]
    pure_out: np.ndarray | None = None
    density_out: np.ndarray | None = None
    efficiency: float = field(init=False)

    def __post_init__(self):
        if self.kind == "pure":
            if self.pure_out is None or self.density_out is not None:
                raise ValueError("pure result needs pure_out only")
            out = _frozen(self.pure_out)
            object.__setattr__(self, "pure_out", out)
            object.__setattr__(self, "efficiency", float(np.vdot(out, out).real))
        elif self.kind == "density":
            if self.density_out is None or self.pure_out is not None:
                raise ValueError("density result needs density_out only")
            out = _frozen(self.density_out)
            object.__setattr__(self, "density_out", out)
            object.__setattr__(self, "efficiency", float(np.trace(out).real))
        else:
            raise ValueError(f"unknown result kind {self.kind!r}")

    @property
    def dim(self) -> int:
        out = self.pure_out if self.kind == "pure" else self.density_out
        return out.shape[0]


def _check_gate(n: int, dim: int, g: DualityGate) -> None:
    if g.n != n:
        raise DimensionError(f"gate has {g.n} paths but the distribution has {n} branches")
    if g.dim != dim:
        raise DimensionError(f"gate acts on dimension {g.dim}, state has dimension {dim}")


def divide_pure(psi, p: BranchDistribution) -> DividedPureState:
    """Split ``psi`` into branches ``(p_i / ||p||) psi``; the map is an isometry."""
    psi = linalg.as_state(psi, normalized=True)
    branches = tuple(_frozen((w / p.norm) * psi) for w in p.weights)
    return DividedPureState(branches, p)


def combine_pure(dps: DividedPureState) -> np.ndarray:
    """``||p|| * sum_i branch_i``, extended linearly to arbitrary branch vectors."""
    return _frozen(dps.dist.norm * np.sum(np.stack(dps.branches), axis=0))


def apply_gate_pure(dps: DividedPureState, g: DualityGate) -> DividedPureState:
    _check_gate(dps.n, dps.dim, g)
    branches = tuple(_frozen(u @ b) for u, b in zip(g.unitaries, dps.branches))
    return DividedPureState(branches, dps.dist)


def duality_operator(p: BranchDistribution, g: DualityGate) -> np.ndarray:
    """The effective operator ``sum_i p_i U_i``."""
    if g.n != p.n:
        raise DimensionError(f"gate has {g.n} paths but the distribution has {p.n} branches")
    return _frozen(sum(w * u for w, u in zip(p.weights, g.unitaries)))


def run_pure_pipeline(psi, p: BranchDistribution, g: DualityGate) -> PipelineResult:
    dps = divide_pure(psi, p)
    return PipelineResult("pure", pure_out=combine_pure(apply_gate_pure(dps, g)))


def divide_density(rho, p: BranchDistribution) -> DividedDensityState:
    """Conjugate ``rho`` by the divider: block ``(i, j)`` is ``p_i p_j rho / ||p||^2``."""
    rho = linalg.as_density(rho, proper=True)
    w = np.asarray(p.weights)
    coeff = np.outer(w, w) / p.norm**2
    return DividedDensityState(_frozen(coeff[:, :, None, None] * rho[None, None]), p)


def apply_gate_density(dds: DividedDensityState, g: DualityGate) -> DividedDensityState:
    """``M_ij -> U_i M_ij U_j^dagger`` on every block."""
    _check_gate(dds.n, dds.dim, g)
    u = np.stack(g.unitaries)
    blocks = np.einsum("iab,ijbc,jdc->ijad", u, dds.blocks, u.conj())
    return DividedDensityState(_frozen(blocks), dds.dist)


def combine_density(dds: DividedDensityState) -> np.ndarray:
    """``||p||^2 * sum_ij M_ij``; the output is unnormalized in general."""
    out = dds.dist.norm**2 * dds.blocks.sum(axis=(0, 1))
    return _frozen((out + out.conj().T) / 2)


def run_density_pipeline(rho, p: BranchDistribution, g: DualityGate) -> PipelineResult:
    rho = linalg.as_density(rho, proper=True)
    _check_gate(p.n, rho.shape[0], g)
    a = duality_operator(p, g)
    out = a @ rho @ a.conj().T
    return PipelineResult("density", density_out=(out + out.conj().T) / 2)


def run_density_pipeline_stepwise(rho, p: BranchDistribution, g: DualityGate) -> PipelineResult:
    """Same output as :func:`run_density_pipeline`, built block by block."""
    dds = apply_gate_density(divide_density(rho, p), g)
    return PipelineResult("density", density_out=combine_density(dds))


def run_gudder_mixed_pipeline(rho, p: BranchDistribution, g: DualityGate) -> np.ndarray:
    """Incoherent recombination ``sum_i p_i U_i rho U_i^dagger`` (trace preserving)."""
    rho = linalg.as_density(rho, proper=True)
    _check_gate(p.n, rho.shape[0], g)
    out = sum(w * (u @ rho @ u.conj().T) for w, u in zip(p.weights, g.unitaries))
    return _frozen((out + out.conj().T) / 2)


def convex_average_check(
    ensemble: Sequence[tuple[float, np.ndarray]], p: BranchDistribution, g: DualityGate
) -> float:
    """Distance between the ensemble average of per-member outputs and the output on the averaged input.

    Returns the Frobenius distance between ``sum_j q_j A|phi_j><phi_j|A^dagger``
    and ``run_density_pipeline(sum_j q_j |phi_j><phi_j|)``; linearity makes it
    vanish up to rounding.
    """
    if not ensemble:
        raise ValueError("ensemble must be non-empty")
    qs = [float(q) for q, _ in ensemble]
    if any(not np.isfinite(q) or q < 0 for q in qs) or abs(sum(qs) - 1.0) > WEIGHT_SUM_TOL:
        raise NumericalError("ensemble weights must be nonnegative and sum to 1")
    phis = [linalg.as_state(phi, normalized=True) for _, phi in ensemble]
    a = duality_operator(p, g)
    averaged_outputs = sum(q * np.outer(a @ phi, (a @ phi).conj()) for q, phi in zip(qs, phis))
    rho = sum(q * np.outer(phi, phi.conj()) for q, phi in zip(qs, phis))
    rho = (rho + rho.conj().T) / 2
    out = run_density_pipeline(rho, p, g).density_out
    return linalg.frobenius_distance(averaged_outputs, out)
