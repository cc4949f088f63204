"""
Measurement of (possibly subnormalized) duality-computer outputs.

Three detector models are supported:

``NO_RENORM``
    The partial wave is measured as is. Basis probabilities are the squared
    amplitudes (or diagonal entries) and the missing weight ``1 - efficiency``
    is reported as a NULL (no-click) outcome.
``RENORM_THRESHOLD``
    The output is renormalized before measurement provided its amplitude norm
    (pure) or trace (density) exceeds ``epsilon``; otherwise nothing is
    detected.
``RENORM_IDEAL``
    ``RENORM_THRESHOLD`` with ``epsilon = 0``.

Repeated detection attempts ("Zeno boosting") are modelled as independent
Bernoulli trials.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .engine import PipelineResult

DIST_TOL = 1e-10
# Outputs at or below this amplitude norm count as complete cancellation even
# when epsilon is 0; for density outputs the same floor is applied to the trace
# on the squared scale.
CANCELLATION_NORM = 1e-12


class Mode(enum.Enum):
    NO_RENORM = "none"
    RENORM_THRESHOLD = "renorm"
    RENORM_IDEAL = "ideal"


@dataclass(frozen=True)
class MeasurementScenario:
    mode: Mode
    epsilon: float = 0.0

    def __post_init__(self):
        mode = Mode(self.mode)
        object.__setattr__(self, "mode", mode)
        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0:
            raise ValueError(f"epsilon must be a finite nonnegative number, got {self.epsilon!r}")
        if mode is not Mode.RENORM_THRESHOLD and eps != 0.0:
            raise ValueError(f"epsilon only applies to {Mode.RENORM_THRESHOLD.value!r}")
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def none(cls) -> MeasurementScenario:
        return cls(Mode.NO_RENORM)

    @classmethod
    def renorm(cls, epsilon: float) -> MeasurementScenario:
        return cls(Mode.RENORM_THRESHOLD, epsilon)

    @classmethod
    def ideal(cls) -> MeasurementScenario:
        return cls(Mode.RENORM_IDEAL)

    @property
    def renormalizes(self) -> bool:
        return self.mode is not Mode.NO_RENORM


@dataclass(frozen=True)
class ZenoSchedule:
    repeats: int

    def __post_init__(self):
        if isinstance(self.repeats, bool) or int(self.repeats) != self.repeats or self.repeats < 1:
            raise ValueError(f"repeats must be a positive integer, got {self.repeats!r}")
        object.__setattr__(self, "repeats", int(self.repeats))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Computational-basis outcome probabilities plus the no-detection probability."""

    probabilities: dict[int, float]
    null_probability: float
    total: float = field(init=False, compare=False)

    def __post_init__(self):
        probs = {int(k): float(v) for k, v in sorted(self.probabilities.items())}
        values = list(probs.values()) + [float(self.null_probability)]
        if any(not np.isfinite(v) or v < 0 for v in values):
            raise ValueError("probabilities must be finite and nonnegative")
        total = float(sum(values))
        if abs(total - 1.0) > DIST_TOL:
            raise ValueError(f"outcome probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "null_probability", float(self.null_probability))
        object.__setattr__(self, "total", total)

    def __getitem__(self, k: int | None) -> float:
        if k is None:
            return self.null_probability
        return self.probabilities.get(k, 0.0)


def efficiency(result: PipelineResult) -> float:
    """Probability that a perfect detector registers anything at all."""
    return result.efficiency


def _basis_weights(result: PipelineResult) -> np.ndarray:
    if result.kind == "pure":
        w = np.abs(result.pure_out) ** 2
    else:
        w = np.diag(result.density_out).real
    return np.clip(w, 0.0, None)


def measure_scenario1(result: PipelineResult) -> OutcomeDistribution:
    """Measure without renormalizing: the shortfall in norm becomes the NULL probability."""
    w = _basis_weights(result)
    null = max(0.0, 1.0 - result.efficiency)
    return OutcomeDistribution(dict(enumerate(w.tolist())), null)


def _is_detectable(result: PipelineResult, eps: float) -> bool:
    if result.kind == "pure":
        norm = float(np.sqrt(result.efficiency)) if result.efficiency > 0 else 0.0
        return norm > eps and norm > CANCELLATION_NORM
    tr = result.efficiency
    return tr > eps and tr > CANCELLATION_NORM**2


def renormalize(result: PipelineResult, s: MeasurementScenario) -> PipelineResult | None:
    """Rescale ``result`` to unit norm/trace, or return ``None`` when nothing is detectable.

    For pure outputs the threshold compares against the amplitude norm
    ``||A psi||``; for density outputs against the trace. Both divide by the
    quantity that makes the output a normalized state.
    """
    if not s.renormalizes:
        raise ValueError("renormalize is undefined for the no-renormalization scenario")
    if not _is_detectable(result, s.epsilon):
        return None
    if result.kind == "pure":
        return PipelineResult("pure", pure_out=result.pure_out / np.sqrt(result.efficiency))
    return PipelineResult("density", density_out=result.density_out / result.efficiency)


def measure(result: PipelineResult, s: MeasurementScenario) -> OutcomeDistribution:
    """Outcome distribution of ``result`` under scenario ``s``."""
    if not s.renormalizes:
        return measure_scenario1(result)
    normed = renormalize(result, s)
    if normed is None:
        return OutcomeDistribution({k: 0.0 for k in range(result.dim)}, 1.0)
    w = _basis_weights(normed)
    # absorb rounding so the distribution totals exactly 1
    return OutcomeDistribution(dict(enumerate((w / w.sum()).tolist())), 0.0)


def zeno_detection_probability(eta: float, schedule: ZenoSchedule | int) -> float:
    """Detection probability after ``r`` independent attempts of efficiency ``eta``: ``1 - (1 - eta)^r``."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    if not isinstance(schedule, ZenoSchedule):
        schedule = ZenoSchedule(schedule)
    if schedule.repeats == 1:
        return float(eta)
    # 1 - (1 - eta)^r without cancellation for small eta
    return float(-np.expm1(schedule.repeats * np.log1p(-eta))) if eta < 1 else 1.0


def sample(dist: OutcomeDistribution, shots: int, seed: int) -> dict[int | None, int]:
    """Draw ``shots`` outcomes; ``None`` keys count NULL (no detection) events.

    Only outcomes that occurred appear in the returned map. The same seed
    always reproduces the same counts.
    """
    if isinstance(shots, bool) or int(shots) != shots or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    keys: list[int | None] = list(dist.probabilities) + [None]
    probs = np.array([dist.probabilities[k] for k in keys[:-1]] + [dist.null_probability])
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(int(shots), probs)
    return {k: int(c) for k, c in zip(keys, counts) if c > 0}
