"""The nine classical box-constrained test functions used by the comparison,
with their reference optima and success thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import (
    Bounds,
    ConfigurationError,
    DimensionError,
    DomainError,
    ProtocolError,
    RngStream,
)

FUNCTION_IDS = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9")

# Error threshold below which a run counts as successful; the noisy quartic
# gets a looser target because its evaluations carry additive noise.
DEFAULT_VTR = 1e-8
NOISY_VTR = 1e-2

SCHWEFEL_226_OPTIMUM_PER_DIM = -418.9828872724339
SCHWEFEL_226_MINIMIZER_COORD = 420.9687


@dataclass(frozen=True)
class ObjectiveSpec:
    """One benchmark function: identity, box, optimum, and success threshold."""

    id: str
    name: str
    dimension: int
    bounds: Bounds
    optimum_value: float
    vtr: float
    noisy: bool = False


class Evaluation(NamedTuple):
    """One objective call: its value and the running count within a run."""

    value: float
    evaluation_index: int


def make_suite(dimension: int) -> list[ObjectiveSpec]:
    """All nine benchmark functions instantiated at the given dimension."""
    if dimension < 2:
        raise ConfigurationError("the suite is defined for dimension >= 2")
    d = dimension

    def spec(fid, name, low, high, optimum=0.0, noisy=False):
        vtr = NOISY_VTR if noisy else DEFAULT_VTR
        return ObjectiveSpec(fid, name, d, Bounds.box(low, high, d), optimum, vtr, noisy)

    return [
        spec("F1", "Zakharov", -100, 100),
        spec("F2", "Schwefel 2.22", -10, 10),
        spec("F3", "Schwefel 2.21", -100, 100),
        spec("F4", "Rosenbrock", -30, 30),
        spec("F5", "Noise Quartic", -1.28, 1.28, noisy=True),
        spec("F6", "Schwefel 2.26", -500, 500, optimum=SCHWEFEL_226_OPTIMUM_PER_DIM * d),
        spec("F7", "Rastrigin", -5.12, 5.12),
        spec("F8", "Ackley", -32, 32),
        spec("F9", "Griewank", -600, 600),
    ]


def get_spec(function_id: str, dimension: int) -> ObjectiveSpec:
    """Single suite entry by id."""
    for spec in make_suite(dimension):
        if spec.id == function_id:
            return spec
    raise ConfigurationError(f"unknown function id {function_id!r}")


@lru_cache(maxsize=None)
def _coordinate_weights(dimension: int) -> np.ndarray:
    # 1-based coordinate indices; treat the cached array as read-only.
    return np.arange(1.0, dimension + 1.0)


@lru_cache(maxsize=None)
def _sqrt_coordinate_weights(dimension: int) -> np.ndarray:
    return np.sqrt(_coordinate_weights(dimension))


def _zakharov(x):
    s = 0.5 * _coordinate_weights(x.size).dot(x)
    return x.dot(x) + s * s + s ** 4


def _schwefel_2_22(x):
    ax = np.abs(x)
    return ax.sum() + ax.prod()


def _schwefel_2_21(x):
    return np.abs(x).max()


def _rosenbrock(x):
    head, tail = x[:-1], x[1:]
    return (100.0 * (tail - head * head) ** 2 + (head - 1.0) ** 2).sum()


def _quartic(x):
    # The uniform noise term is added by evaluate, not here.
    x2 = x * x
    return _coordinate_weights(x.size).dot(x2 * x2)


def _schwefel_2_26(x):
    return -x.dot(np.sin(np.sqrt(np.abs(x))))


def _rastrigin(x):
    return 10.0 * x.size + x.dot(x) - 10.0 * np.cos(2.0 * np.pi * x).sum()


def _ackley(x):
    d = x.size
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(x.dot(x) / d))
        - np.exp(np.cos(2.0 * np.pi * x).sum() / d)
        + 20.0
        + np.e
    )


def _griewank(x):
    return x.dot(x) / 4000.0 - np.cos(x / _sqrt_coordinate_weights(x.size)).prod() + 1.0


_FORMS = {
    "F1": _zakharov,
    "F2": _schwefel_2_22,
    "F3": _schwefel_2_21,
    "F4": _rosenbrock,
    "F5": _quartic,
    "F6": _schwefel_2_26,
    "F7": _rastrigin,
    "F8": _ackley,
    "F9": _griewank,
}


def evaluate(spec: ObjectiveSpec, x, rng: RngStream | None = None) -> float:
    """Objective value at a feasible point.

    Deterministic for every function except the noisy quartic, whose
    uniform [0, 1) noise term is drawn from ``rng`` once per call.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dimension,):
        raise DimensionError(f"{spec.id} expects a vector of length {spec.dimension}")
    bounds = spec.bounds
    if (x < bounds.lower).any() or (x > bounds.upper).any():
        raise DomainError(f"point lies outside the {spec.id} search box")
    value = _FORMS[spec.id](x)
    if spec.noisy:
        if rng is None:
            raise ProtocolError(f"{spec.id} is noisy and needs an rng")
        value += rng.random()
    return float(value)


class EvaluationCounter:
    """Counts objective calls within one run.

    Every call consumes exactly one unit of budget; the returned
    Evaluation carries the running index so callers can account for
    the evaluation cap exactly.
    """

    def __init__(self, spec: ObjectiveSpec, rng: RngStream | None = None, start: int = 0):
        self.spec = spec
        self.rng = rng
        self.count = int(start)

    def __call__(self, x) -> Evaluation:
        value = evaluate(self.spec, x, self.rng)
        self.count += 1
        return Evaluation(value, self.count)
