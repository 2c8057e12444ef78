"""Comparison optimizers sharing the core loop: two classic differential
evolution strategies and the simplified whale-swarm move."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .benchmarks import EvaluationCounter, ObjectiveSpec
from .core import (
    ConfigurationError,
    Population,
    RngStream,
    clamp_to_bounds,
    distinct_indices,
    make_rng,
    nearest_better,
    uniform_init,
)
from .optimizer import DEFAULT_BUDGET_PER_DIMENSION, crossover_binary
from .records import RunRecord

DE_RAND_1 = "de_rand_1"
DE_BEST_2 = "de_best_2"
WSA = "wsa"
ALGORITHMS = (DE_RAND_1, DE_BEST_2, WSA)

# initialization requires 4 regardless of strategy; de_best_2 needs one more
_MIN_POPULATION = {DE_RAND_1: 4, DE_BEST_2: 5, WSA: 4}


def default_population_size(algorithm: str, dimension: int) -> int:
    """Population schedule used by the benchmark comparison.

    The DE variants grow with dimension (30 / 100 / 200 at 10 / 30 / 50);
    the guided algorithms keep 40 regardless.
    """
    if algorithm in (WSA, "nbde"):
        return 40
    if dimension < 30:
        return 30
    if dimension < 50:
        return 100
    return 200


@dataclass(frozen=True)
class BaselineConfig:
    """Control parameters for one baseline; np unset follows the schedule."""

    algorithm: str
    np: int | None = None
    f: float = 0.5
    cr: float = 0.9
    max_evaluations: int | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"unknown baseline algorithm {self.algorithm!r}")
        if self.np is not None and self.np < _MIN_POPULATION[self.algorithm]:
            raise ConfigurationError(
                f"{self.algorithm} needs np >= {_MIN_POPULATION[self.algorithm]}"
            )
        if not (0.0 <= self.cr <= 1.0):
            raise ConfigurationError("cr must lie in [0, 1]")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigurationError("max_evaluations must be positive")

    def population_size(self, dimension: int) -> int:
        if self.np is not None:
            return self.np
        return default_population_size(self.algorithm, dimension)

    def budget(self, dimension: int) -> int:
        if self.max_evaluations is not None:
            return self.max_evaluations
        return DEFAULT_BUDGET_PER_DIMENSION * dimension


def mutate_de_rand_1(pop: Population, i: int, f: float, rng: RngStream) -> np.ndarray:
    """v = x_r1 + f * (x_r2 - x_r3) with r1, r2, r3 distinct and != i."""
    if pop.size < 4:
        raise ConfigurationError("de_rand_1 mutation needs at least 4 members")
    r = distinct_indices(pop.size, 3, (i,), rng)
    return pop.positions[r[0]] + f * (pop.positions[r[1]] - pop.positions[r[2]])


def mutate_de_best_2(pop: Population, i: int, f: float, rng: RngStream) -> np.ndarray:
    """v = x_best + f * (x_r1 + x_r2 - x_r3 - x_r4), picks outside {i, best}."""
    best = pop.best_index()
    excluded = {i, best}
    if pop.size - len(excluded) < 4:
        raise ConfigurationError("de_best_2 mutation needs at least 5 members")
    r = distinct_indices(pop.size, 4, excluded, rng)
    xb = pop.positions[best]
    return xb + f * (
        pop.positions[r[0]] + pop.positions[r[1]] - pop.positions[r[2]] - pop.positions[r[3]]
    )


def mutate_wsa(pop: Population, i: int, y: int, rng: RngStream) -> np.ndarray:
    """Coordinate-wise move toward the nearest-better guide, scaled by
    independent uniform [0, 2) draws so the step can overshoot it."""
    u = rng.uniform(0.0, 2.0, pop.dimension)
    x = pop.positions[i]
    return x + u * (pop.positions[y] - x)


def _candidate_de_rand_1(pop, i, config, rng):
    mutant = mutate_de_rand_1(pop, i, config.f, rng)
    return crossover_binary(pop.positions[i], mutant, config.cr, rng)


def _candidate_de_best_2(pop, i, config, rng):
    mutant = mutate_de_best_2(pop, i, config.f, rng)
    return crossover_binary(pop.positions[i], mutant, config.cr, rng)


def _candidate_wsa(pop, i, config, rng):
    # WSA mutates only; the raw move is the candidate.
    guide = nearest_better(pop, i, rng)
    return mutate_wsa(pop, i, guide, rng)


_CANDIDATE_FACTORIES = {
    DE_RAND_1: _candidate_de_rand_1,
    DE_BEST_2: _candidate_de_best_2,
    WSA: _candidate_wsa,
}


def run_baseline(config: BaselineConfig, spec: ObjectiveSpec, seed: int) -> RunRecord:
    """One full independent run with the same loop contract as the main
    optimizer: in-place survivor updates, greedy selection, exact budget."""
    rng = make_rng(seed)
    size = config.population_size(spec.dimension)
    if size < _MIN_POPULATION[config.algorithm]:
        raise ConfigurationError(
            f"{config.algorithm} needs np >= {_MIN_POPULATION[config.algorithm]}"
        )
    budget = config.budget(spec.dimension)
    if budget < size:
        raise ConfigurationError("budget too small to evaluate the initial population")
    make_candidate = _CANDIDATE_FACTORIES[config.algorithm]
    pop = uniform_init(spec.bounds, size, rng)
    counter = EvaluationCounter(spec, rng)
    positions, fitness = pop.positions, pop.fitness
    for i in range(size):
        fitness[i] = counter(positions[i]).value
    best = float(fitness.min())
    trace = [(counter.count, best)]
    while counter.count < budget:
        for i in range(size):
            if counter.count >= budget:
                break
            candidate = clamp_to_bounds(make_candidate(pop, i, config, rng), spec.bounds)
            value = counter(candidate).value
            if value <= fitness[i]:
                positions[i] = candidate
                fitness[i] = value
        pop.generation += 1
        best = float(fitness.min())
        trace.append((counter.count, best))
    error = best - spec.optimum_value
    return RunRecord(
        algorithm=config.algorithm,
        function=spec.id,
        dimension=spec.dimension,
        seed=seed,
        best_fitness=best,
        final_error=error,
        success=error <= spec.vtr,
        evaluations_used=counter.count,
        best_so_far_trace=trace,
    )
