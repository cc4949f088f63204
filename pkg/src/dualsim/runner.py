"""Execute parsed circuits on a chosen backend and build JSON-ready reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from . import engine, io, linalg
from .dsl import CircuitAST, GateStatement, MeasurementSpec, lower
from .engine import BranchDistribution, PipelineResult
from .errors import DualityError, NumericalError
from .measurement import (
    MeasurementScenario,
    Mode,
    OutcomeDistribution,
    ZenoSchedule,
    measure,
    renormalize,
    sample,
    zeno_detection_probability,
)

Backend = Literal["pure", "density", "mixed"]
BACKENDS = ("pure", "density", "mixed")


class BackendScenarioError(DualityError):
    code = "E_BACKEND_SCENARIO"


@dataclass(frozen=True, eq=False)
class RunReport:
    backend: str
    scenario: MeasurementScenario
    efficiency: float
    output: PipelineResult
    renormalized: PipelineResult | None
    distribution: OutcomeDistribution
    counts: dict[int | None, int] | None = None
    zeno_boosted_efficiency: float | None = None

    @property
    def is_null(self) -> bool:
        """No outcome can be obtained: renormalization failed, or nothing survives at all."""
        if self.scenario.renormalizes:
            return self.renormalized is None
        return self.distribution.null_probability >= 1.0

    def to_dict(self) -> dict[str, Any]:
        def state(r: PipelineResult | None):
            if r is None:
                return None
            if r.kind == "pure":
                return {"kind": "pure", "amplitudes": io.state_to_json(r.pure_out)}
            return {"kind": "density", "matrix": io.matrix_to_json(r.density_out)}

        d: dict[str, Any] = {
            "backend": self.backend,
            "scenario": self.scenario.mode.value,
            "epsilon": self.scenario.epsilon,
            "efficiency": self.efficiency,
            "outcome": None if self.is_null else "detected",
            "output_state": {"unnormalized": state(self.output), "renormalized": state(self.renormalized)},
            "distribution": {
                "probabilities": {str(k): v for k, v in self.distribution.probabilities.items()},
                "null_probability": self.distribution.null_probability,
            },
        }
        if self.counts is not None:
            d["counts"] = {("null" if k is None else str(k)): v for k, v in self.counts.items()}
        if self.zeno_boosted_efficiency is not None:
            d["zeno_boosted_efficiency"] = self.zeno_boosted_efficiency
        return d


def _initial_state(dim: int, initial, backend: str) -> np.ndarray:
    if initial is None:
        return linalg.basis_state(dim, 0)
    arr = np.asarray(initial, dtype=complex)
    if arr.shape not in ((dim,), (dim, dim)):
        raise NumericalError(f"initial state has shape {arr.shape}, circuit dimension is {dim}")
    if arr.ndim == 2 and backend == "pure":
        raise NumericalError("the pure backend needs a state vector, not a density matrix")
    if arr.ndim == 1:
        return linalg.as_state(arr, normalized=True)
    return linalg.as_density(arr, proper=True)


def execute(
    dist: BranchDistribution,
    gate: engine.DualityGate,
    m: MeasurementSpec,
    backend: Backend = "pure",
    initial=None,
) -> RunReport:
    """Run one divide/gate/combine round and measure it according to ``m``."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "mixed" and m.scenario.mode is Mode.RENORM_IDEAL:
        raise BackendScenarioError(
            "E_BACKEND_SCENARIO: the mixed backend supports scenario=none or scenario=renorm only"
        )
    state = _initial_state(gate.dim, initial, backend)
    if backend == "pure":
        result = engine.run_pure_pipeline(state, dist, gate)
    else:
        rho = linalg.outer(state) if state.ndim == 1 else state
        if backend == "density":
            result = engine.run_density_pipeline(rho, dist, gate)
        else:
            result = PipelineResult("density", density_out=engine.run_gudder_mixed_pipeline(rho, dist, gate))

    renormed = renormalize(result, m.scenario) if m.scenario.renormalizes else None
    distribution = measure(result, m.scenario)
    counts = sample(distribution, m.shots, m.seed) if m.shots > 0 else None
    zeno = None
    if m.zeno is not None:
        zeno = zeno_detection_probability(min(max(result.efficiency, 0.0), 1.0), m.zeno)
    return RunReport(backend, m.scenario, result.efficiency, result, renormed, distribution, counts, zeno)


def run(ast: CircuitAST, backend: Backend = "pure", initial=None) -> RunReport:
    """Lower ``ast`` and execute it; ``initial`` defaults to ``|0...0>``."""
    dist, gate = lower(ast)
    return execute(dist, gate, ast.measure, backend, initial)


def search_circuit(n: int, target: int, scenario: MeasurementScenario, zeno: ZenoSchedule | None = None) -> CircuitAST:
    """One-query search: paths ``I`` and ``-O_target`` combined with equal weights.

    The effective operator ``(I - O_target)/2`` is the projector onto the
    target, so the uniform superposition is mapped to ``|target>/sqrt(n)``.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n!r}")
    if n > linalg.MAX_DIM:
        raise ValueError(f"n must not exceed {linalg.MAX_DIM}")
    if not 0 <= target < n:
        raise ValueError(f"target {target!r} outside [0, {n})")
    qubits = int(n).bit_length() - 1
    paths = ((GateStatement("I"),), (GateStatement("NEG"), GateStatement("ORACLE", (), (int(target),))))
    return CircuitAST(qubits, BranchDistribution((0.5, 0.5)), paths, MeasurementSpec(scenario, zeno=zeno))


def run_search_demo(
    n: int, target: int, scenario: MeasurementScenario, zeno: ZenoSchedule | None = None
) -> RunReport:
    ast = search_circuit(n, target, scenario, zeno)
    uniform = np.full(n, 1 / np.sqrt(n), dtype=complex)
    return run(ast, "pure", uniform)


def emit_json(report: RunReport) -> str:
    return io.dumps(report.to_dict())
