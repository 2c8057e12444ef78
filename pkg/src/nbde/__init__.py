"""Differential evolution with a nearest-better guidance vector, classic DE
baselines, the nine-function benchmark suite, and a reproducible harness."""

from .baselines import ALGORITHMS as BASELINE_ALGORITHMS
from .baselines import BaselineConfig, default_population_size, run_baseline
from .benchmarks import (
    FUNCTION_IDS,
    Evaluation,
    EvaluationCounter,
    ObjectiveSpec,
    evaluate,
    get_spec,
    make_suite,
)
from .core import (
    Bounds,
    BoundsError,
    BudgetExhaustedError,
    ConfigurationError,
    DimensionError,
    DomainError,
    Individual,
    Population,
    ProtocolError,
    RngStream,
    clamp_to_bounds,
    euclidean_distance,
    make_rng,
    nearest_better,
    uniform_init,
)
from .harness import (
    EmptyCellError,
    ExperimentPlan,
    RecordsParseError,
    SummaryCell,
    SummaryTable,
    competition_rank,
    derive_seed,
    emit,
    parse_records_csv,
    parse_summary_csv,
    records_to_csv,
    run_experiment,
    success_rate,
    summarize,
)
from .optimizer import GenerationState, NbdeConfig
from .optimizer import run as run_nbde
from .optimizer import step
from .records import RunRecord

__version__ = "0.1.0"

__all__ = [
    "BASELINE_ALGORITHMS",
    "BaselineConfig",
    "Bounds",
    "BoundsError",
    "BudgetExhaustedError",
    "ConfigurationError",
    "DimensionError",
    "DomainError",
    "EmptyCellError",
    "Evaluation",
    "EvaluationCounter",
    "ExperimentPlan",
    "FUNCTION_IDS",
    "GenerationState",
    "Individual",
    "NbdeConfig",
    "ObjectiveSpec",
    "Population",
    "ProtocolError",
    "RecordsParseError",
    "RngStream",
    "RunRecord",
    "SummaryCell",
    "SummaryTable",
    "clamp_to_bounds",
    "competition_rank",
    "default_population_size",
    "derive_seed",
    "emit",
    "euclidean_distance",
    "evaluate",
    "get_spec",
    "make_rng",
    "make_suite",
    "nearest_better",
    "parse_records_csv",
    "parse_summary_csv",
    "records_to_csv",
    "run_baseline",
    "run_experiment",
    "run_nbde",
    "step",
    "success_rate",
    "summarize",
    "uniform_init",
]
