"""Differential evolution steered by each member's nearest better neighbor.

Candidates add a scaled random difference vector and a pull toward the
closest member of strictly better fitness, pass through one of three
crossover operators chosen at random, and replace their parent whenever
they are at least as good.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .benchmarks import EvaluationCounter, ObjectiveSpec
from .core import (
    BudgetExhaustedError,
    ConfigurationError,
    DimensionError,
    Individual,
    Population,
    ProtocolError,
    RngStream,
    clamp_to_bounds,
    make_rng,
    nearest_better,
    random_index_excluding,
    uniform_init,
)
from .records import RunRecord

ALGORITHM = "nbde"

CROSSOVER_BINARY = "binary"
CROSSOVER_EXPONENTIAL = "exponential"
CROSSOVER_NONE = "none"

# Giving the pass-through operator real weight measurably collapses
# multimodal escape (trapped coordinates on separable functions), so the
# default splits evenly between the two recombining operators.
DEFAULT_CROSSOVER_MIX = (0.5, 0.5, 0.0)

DEFAULT_BUDGET_PER_DIMENSION = 10_000


@dataclass(frozen=True)
class NbdeConfig:
    """Control parameters.

    ``crossover_mix`` weights the (binary, exponential, none) operators;
    ``max_evaluations`` left unset resolves to 10000 per problem dimension.
    """

    np: int = 40
    cr_low: float = 0.4
    cr_high: float = 0.9
    crossover_mix: tuple[float, float, float] = DEFAULT_CROSSOVER_MIX
    max_evaluations: int | None = None

    def __post_init__(self):
        if self.np < 4:
            raise ConfigurationError("np must be at least 4")
        if not (0.0 <= self.cr_low <= self.cr_high <= 1.0):
            raise ConfigurationError("need 0 <= cr_low <= cr_high <= 1")
        mix = self.crossover_mix
        if len(mix) != 3 or any(w < 0 for w in mix):
            raise ConfigurationError("crossover_mix must be three nonnegative weights")
        if not math.isclose(sum(mix), 1.0, abs_tol=1e-12):
            raise ConfigurationError("crossover_mix weights must sum to 1")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigurationError("max_evaluations must be positive")

    def budget(self, dimension: int) -> int:
        if self.max_evaluations is not None:
            return self.max_evaluations
        return DEFAULT_BUDGET_PER_DIMENSION * dimension


@dataclass
class GenerationState:
    """Loop state between generations of one run."""

    population: Population
    best_index: int
    evaluations_used: int


def mutate_nbde(pop: Population, i: int, y: int, rng: RngStream) -> np.ndarray:
    """A scaled random difference plus a pull toward the nearest-better guide.

    v = x_i + a * (x_r1 - x_r2) + b * (y - x_i), where r1, r2 are distinct
    indices drawn outside {i, y} and a, b are single uniform [0, 1) scalars
    each scaling its whole difference vector.  The random difference keeps
    the population from contracting onto itself; the guide term supplies
    the local descent direction.  The result is not clamped.
    """
    if pop.size < 4:
        raise ConfigurationError("the hybrid mutation needs at least 4 members")
    r1 = random_index_excluding(pop.size, (i, y), rng)
    r2 = random_index_excluding(pop.size, (i, y, r1), rng)
    x = pop.positions[i]
    a = rng.random()
    b = rng.random()
    return x + a * (pop.positions[r1] - pop.positions[r2]) + b * (pop.positions[y] - x)


def crossover_binary(parent: np.ndarray, mutant: np.ndarray, cr: float, rng: RngStream) -> np.ndarray:
    """Coordinate-wise takeover: mutant[j] survives where a uniform draw <= cr.

    No coordinate is forced over, so the output can equal the parent.
    """
    if parent.shape != mutant.shape:
        raise DimensionError("parent and mutant must have equal length")
    take = rng.random(parent.size) <= cr
    return np.where(take, mutant, parent)


def crossover_exponential(parent: np.ndarray, mutant: np.ndarray, cr: float, rng: RngStream) -> np.ndarray:
    """Contiguous window of mutant coordinates, wrapping past the last one.

    The window starts at a uniform coordinate and its length is 1 + L where
    L counts how many of ``dimension`` fresh uniform draws fall at or below
    cr, capped at the dimension.
    """
    if parent.shape != mutant.shape:
        raise DimensionError("parent and mutant must have equal length")
    d = parent.size
    start = int(rng.integers(d))
    length = min(int((rng.random(d) <= cr).sum()) + 1, d)
    out = parent.copy()
    end = start + length
    out[start:end] = mutant[start:end]
    if end > d:
        out[: end - d] = mutant[: end - d]
    return out


def choose_crossover(mix, rng: RngStream) -> str:
    """Operator tag drawn with probability equal to its weight."""
    u = rng.random()
    if u < mix[0]:
        return CROSSOVER_BINARY
    if u < mix[0] + mix[1]:
        return CROSSOVER_EXPONENTIAL
    return CROSSOVER_NONE


def select(parent: Individual, candidate: Individual) -> Individual:
    """Greedy survivor choice; candidates matching the parent's fitness win."""
    if parent.fitness is None or candidate.fitness is None:
        raise ProtocolError("selection needs evaluated individuals")
    return candidate if candidate.fitness <= parent.fitness else parent


def step(state: GenerationState, config: NbdeConfig, spec: ObjectiveSpec, rng: RngStream) -> GenerationState:
    """Advance one generation, spending at most the remaining budget.

    Members are processed in order and replaced in place, so later members
    see earlier survivors of the same pass.  Candidate production stops the
    moment the budget is spent, leaving remaining members untouched.
    """
    budget = config.budget(spec.dimension)
    if state.evaluations_used >= budget:
        raise BudgetExhaustedError("the evaluation budget is already spent")
    pop = state.population.copy()
    positions, fitness = pop.positions, pop.fitness
    counter = EvaluationCounter(spec, rng, start=state.evaluations_used)
    mix = config.crossover_mix
    cr_low, cr_span = config.cr_low, config.cr_high - config.cr_low
    for i in range(pop.size):
        if counter.count >= budget:
            break
        cr = cr_low + cr_span * rng.random()  # fresh uniform CR per member
        guide = nearest_better(pop, i, rng)
        mutant = mutate_nbde(pop, i, guide, rng)
        operator = choose_crossover(mix, rng)
        if operator == CROSSOVER_BINARY:
            candidate = crossover_binary(positions[i], mutant, cr, rng)
        elif operator == CROSSOVER_EXPONENTIAL:
            candidate = crossover_exponential(positions[i], mutant, cr, rng)
        else:
            candidate = mutant
        candidate = clamp_to_bounds(candidate, spec.bounds)
        value = counter(candidate).value
        if value <= fitness[i]:
            positions[i] = candidate
            fitness[i] = value
    pop.generation += 1
    return GenerationState(pop, int(np.argmin(fitness)), counter.count)


def run(config: NbdeConfig, spec: ObjectiveSpec, seed: int) -> RunRecord:
    """One full independent run from a 64-bit seed."""
    rng = make_rng(seed)
    budget = config.budget(spec.dimension)
    if budget < config.np:
        raise ConfigurationError("budget too small to evaluate the initial population")
    pop = uniform_init(spec.bounds, config.np, rng)
    counter = EvaluationCounter(spec, rng)
    for i in range(pop.size):
        pop.fitness[i] = counter(pop.positions[i]).value
    state = GenerationState(pop, pop.best_index(), counter.count)
    best = float(state.population.fitness[state.best_index])
    trace = [(state.evaluations_used, best)]
    while state.evaluations_used < budget:
        state = step(state, config, spec, rng)
        best = float(state.population.fitness[state.best_index])
        trace.append((state.evaluations_used, best))
    error = best - spec.optimum_value
    return RunRecord(
        algorithm=ALGORITHM,
        function=spec.id,
        dimension=spec.dimension,
        seed=seed,
        best_fitness=best,
        final_error=error,
        success=error <= spec.vtr,
        evaluations_used=state.evaluations_used,
        best_so_far_trace=trace,
    )
