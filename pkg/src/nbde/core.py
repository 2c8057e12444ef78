"""Population model, box bounds, seeded randomness, and the nearest-better
neighbor search shared by all optimizers in this package."""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass

import numpy as np

# A deterministic pseudorandom stream; equal seeds give bit-identical draws.
RngStream = np.random.Generator


class ConfigurationError(ValueError):
    """An algorithm or experiment configuration is invalid."""


class BoundsError(ConfigurationError):
    """A search box is malformed (mismatched lengths or empty interval)."""


class DimensionError(ValueError):
    """A vector's length does not match the problem dimension."""


class DomainError(ValueError):
    """A point lies outside the search box it was evaluated against."""


class ProtocolError(RuntimeError):
    """An operation was used out of order, e.g. reading an unset fitness."""


class BudgetExhaustedError(RuntimeError):
    """A run was stepped after its evaluation budget was already spent."""


def make_rng(seed: int) -> RngStream:
    """Seeded generator for everything random in a run (64-bit seed)."""
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class Bounds:
    """Axis-aligned search box; every lower bound strictly below its upper."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise BoundsError("lower and upper must be 1-d vectors of equal length")
        if lower.size == 0:
            raise BoundsError("bounds must have at least one dimension")
        if not np.all(lower < upper):
            raise BoundsError("every lower bound must lie strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low: float, high: float, dimension: int) -> "Bounds":
        """Hypercube [low, high]^dimension."""
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    def contains(self, position: np.ndarray) -> bool:
        return bool(np.all(position >= self.lower) and np.all(position <= self.upper))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bounds):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)


@dataclass
class Individual:
    """A position vector plus its recorded objective value.

    ``fitness`` is None until the point has been evaluated.  Once set it is
    never recomputed, so survivors of a noisy objective keep the value they
    were admitted with.
    """

    position: np.ndarray
    fitness: float | None = None

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None


class Population:
    """An ordered group of search points with their recorded fitness.

    Positions are stored as one (size, dimension) array and fitness as a
    float vector using NaN for the not-yet-evaluated state; ``member`` and
    ``members`` expose the Individual view.
    """

    def __init__(self, positions, fitness=None, generation: int = 0):
        self.positions = np.array(positions, dtype=float)
        if self.positions.ndim != 2:
            raise DimensionError("positions must be a (size, dimension) array")
        if fitness is None:
            self.fitness = np.full(len(self.positions), np.nan)
        else:
            self.fitness = np.array(fitness, dtype=float)
            if self.fitness.shape != (len(self.positions),):
                raise DimensionError("fitness must hold one value per member")
        self.generation = int(generation)

    @classmethod
    def from_members(cls, members: list[Individual], generation: int = 0) -> "Population":
        if not members:
            raise ConfigurationError("a population needs at least one member")
        dimension = members[0].position.size
        if any(m.position.size != dimension for m in members):
            raise DimensionError("all members must share one dimension")
        positions = np.stack([np.asarray(m.position, dtype=float) for m in members])
        fitness = np.array([np.nan if m.fitness is None else m.fitness for m in members])
        return cls(positions, fitness, generation)

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def member(self, i: int) -> Individual:
        value = self.fitness[i]
        return Individual(self.positions[i].copy(), None if np.isnan(value) else float(value))

    @property
    def members(self) -> list[Individual]:
        return [self.member(i) for i in range(self.size)]

    def all_evaluated(self) -> bool:
        return not np.isnan(self.fitness).any()

    def best_index(self) -> int:
        """Index of the minimum-fitness member; ties go to the lowest index."""
        if not self.all_evaluated():
            raise ProtocolError("best_index requires a fully evaluated population")
        return int(np.argmin(self.fitness))

    def copy(self) -> "Population":
        return Population(self.positions, self.fitness, self.generation)


def uniform_init(bounds: Bounds, size: int, rng: RngStream) -> Population:
    """Fresh generation-0 population drawn coordinate-wise uniformly in the box."""
    if size < 4:
        raise ConfigurationError("population size must be at least 4")
    positions = rng.uniform(bounds.lower, bounds.upper, size=(size, bounds.dimension))
    return Population(positions)


def clamp_to_bounds(position: np.ndarray, bounds: Bounds) -> np.ndarray:
    """Coordinate-wise projection onto the box; feasible input comes back unchanged."""
    position = np.asarray(position, dtype=float)
    if position.shape != (bounds.dimension,):
        raise DimensionError("position length does not match the bounds dimension")
    return np.clip(position, bounds.lower, bounds.upper)


def euclidean_distance(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError("vectors must have equal length")
    return float(np.linalg.norm(a - b))


def nearest_better(pop: Population, i: int, rng: RngStream) -> int:
    """Index of the closest member with strictly better fitness than member i.

    Distance ties resolve to the lowest index.  When member i is a best
    member (no strictly better fitness exists) a uniformly random other
    index is returned instead.
    """
    if pop.size < 2:
        raise ConfigurationError("nearest_better needs at least two members")
    fitness = pop.fitness
    if np.isnan(fitness).any():
        raise ProtocolError("nearest_better requires a fully evaluated population")
    diff = pop.positions - pop.positions[i]
    d2 = np.einsum("ij,ij->i", diff, diff)
    d2[fitness >= fitness[i]] = np.inf  # keep strictly better members only; drops i too
    j = int(np.argmin(d2))
    if np.isinf(d2[j]):
        return random_index_excluding(pop.size, (i,), rng)
    return j


def random_index_excluding(size: int, excluded, rng: RngStream) -> int:
    """Uniform index in [0, size) avoiding ``excluded``, using a single draw."""
    banned = sorted(set(excluded))
    free = size - len(banned)
    if free < 1:
        raise ConfigurationError("no admissible index to draw from")
    k = int(rng.random() * free)
    for e in banned:
        if k >= e:
            k += 1
    return k


def distinct_indices(size: int, count: int, excluded, rng: RngStream) -> list[int]:
    """``count`` mutually distinct indices in [0, size) avoiding ``excluded``."""
    banned = sorted(set(excluded))
    if size - len(banned) < count:
        raise ConfigurationError(
            f"cannot draw {count} distinct indices from {size} with {len(banned)} excluded"
        )
    picks = []
    for _ in range(count):
        k = int(rng.random() * (size - len(banned)))
        for e in banned:
            if k >= e:
                k += 1
        picks.append(k)
        insort(banned, k)
    return picks
