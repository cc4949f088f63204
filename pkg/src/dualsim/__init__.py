"""Numerical simulator of the duality computer: divider/combiner pipelines,
measurement-efficiency models, unitary decompositions and a small circuit DSL."""

from .engine import (
    BranchDistribution,
    DividedDensityState,
    DividedPureState,
    DualityGate,
    PipelineResult,
    apply_gate_density,
    apply_gate_pure,
    combine_density,
    combine_pure,
    convex_average_check,
    divide_density,
    divide_pure,
    duality_operator,
    run_density_pipeline,
    run_gudder_mixed_pipeline,
    run_pure_pipeline,
)
from .errors import DualityError
from .lcu import UnitaryCombination, decompose, reconstruct
from .measurement import MeasurementScenario, Mode, OutcomeDistribution, ZenoSchedule
from .dsl import CircuitAST, DslError, lower, parse
from .runner import RunReport, emit_json, run, run_search_demo

__all__ = [
    "BranchDistribution",
    "CircuitAST",
    "DividedDensityState",
    "DividedPureState",
    "DslError",
    "DualityError",
    "DualityGate",
    "MeasurementScenario",
    "Mode",
    "OutcomeDistribution",
    "PipelineResult",
    "RunReport",
    "UnitaryCombination",
    "ZenoSchedule",
    "apply_gate_density",
    "apply_gate_pure",
    "combine_density",
    "combine_pure",
    "convex_average_check",
    "decompose",
    "divide_density",
    "divide_pure",
    "duality_operator",
    "emit_json",
    "lower",
    "parse",
    "reconstruct",
    "run",
    "run_density_pipeline",
    "run_gudder_mixed_pipeline",
    "run_pure_pipeline",
    "run_search_demo",
]
