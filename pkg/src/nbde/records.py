"""Outcome of one independent optimization run."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunRecord:
    """Everything one run produced.

    ``final_error`` is best_fitness minus the function's reference optimum;
    ``success`` means that error reached the function's value-to-reach.
    ``best_so_far_trace`` holds one (evaluation_index, best_fitness) pair
    after initialization and one per generation, non-increasing in fitness.
    """

    algorithm: str
    function: str
    dimension: int
    seed: int
    best_fitness: float
    final_error: float
    success: bool
    evaluations_used: int
    best_so_far_trace: list[tuple[int, float]] = field(default_factory=list, repr=False)
