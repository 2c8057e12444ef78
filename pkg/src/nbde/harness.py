"""Experiment orchestration and statistics: seeded run grids, success rates,
competition ranking, and table emission."""

from __future__ import annotations

import dataclasses
import hashlib
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import baselines, optimizer
from .baselines import BaselineConfig, run_baseline
from .benchmarks import FUNCTION_IDS, make_suite
from .core import ConfigurationError
from .optimizer import NbdeConfig
from .records import RunRecord

logger = logging.getLogger(__name__)

AlgorithmConfig = NbdeConfig | BaselineConfig

RECORDS_HEADER = "algorithm,function,dim,seed,best_fitness,final_error,success,evaluations"
SUMMARY_HEADER = "function,dim,algorithm,mean,std,sr,rank"


class EmptyCellError(ValueError):
    """Statistics were requested for a cell with no runs."""


class RecordsParseError(ValueError):
    """A saved records or summary file is malformed."""


def algorithm_tag(config: AlgorithmConfig) -> str:
    return optimizer.ALGORITHM if isinstance(config, NbdeConfig) else config.algorithm


@dataclass(frozen=True)
class ExperimentPlan:
    """A full grid of (algorithm, function, dimension) cells.

    Every run's seed derives from ``base_seed`` and its cell coordinates,
    so results do not depend on execution order or worker count.
    """

    algorithms: tuple[AlgorithmConfig, ...]
    functions: tuple[str, ...] = FUNCTION_IDS
    dimensions: tuple[int, ...] = (10, 30, 50)
    runs_per_cell: int = 50
    budget_multiplier: int = 10_000
    base_seed: int = 0
    vtr_override: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "dimensions", tuple(self.dimensions))
        if not self.algorithms:
            raise ConfigurationError("a plan needs at least one algorithm")
        unknown = [f for f in self.functions if f not in FUNCTION_IDS]
        if unknown:
            raise ConfigurationError(f"unknown function ids: {unknown}")
        if self.runs_per_cell < 1:
            raise ConfigurationError("runs_per_cell must be positive")
        if self.budget_multiplier < 1:
            raise ConfigurationError("budget_multiplier must be positive")


def derive_seed(base_seed: int, algorithm: str, function: str, dimension: int, run_index: int) -> int:
    """Stable 64-bit per-run seed; independent of scheduling and platform."""
    key = f"{base_seed}|{algorithm}|{function}|{dimension}|{run_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _resolve_config(config: AlgorithmConfig, dimension: int, budget_multiplier: int) -> AlgorithmConfig:
    """Pin population size and absolute budget for one cell."""
    budget = config.max_evaluations
    if budget is None:
        budget = budget_multiplier * dimension
    if isinstance(config, NbdeConfig):
        resolved = dataclasses.replace(config, max_evaluations=budget)
        size = resolved.np
    else:
        resolved = dataclasses.replace(
            config, np=config.population_size(dimension), max_evaluations=budget
        )
        size = resolved.np
    if budget < size:
        raise ConfigurationError(f"budget {budget} cannot cover the initial {size} evaluations")
    return resolved


def _build_tasks(plan: ExperimentPlan):
    tasks = []
    failures = []
    for dimension in plan.dimensions:
        try:
            suite = {s.id: s for s in make_suite(dimension)}
        except ConfigurationError as exc:
            for config in plan.algorithms:
                for function in plan.functions:
                    failures.append(((algorithm_tag(config), function, dimension), str(exc)))
            continue
        for config in plan.algorithms:
            tag = algorithm_tag(config)
            for function in plan.functions:
                spec = suite[function]
                if plan.vtr_override is not None:
                    spec = dataclasses.replace(spec, vtr=plan.vtr_override)
                try:
                    resolved = _resolve_config(config, dimension, plan.budget_multiplier)
                except ConfigurationError as exc:
                    failures.append(((tag, function, dimension), str(exc)))
                    continue
                for run_index in range(plan.runs_per_cell):
                    seed = derive_seed(plan.base_seed, tag, function, dimension, run_index)
                    tasks.append((resolved, spec, seed))
    return tasks, failures


def _execute_task(task) -> RunRecord:
    config, spec, seed = task
    if isinstance(config, NbdeConfig):
        return optimizer.run(config, spec, seed)
    return baselines.run_baseline(config, spec, seed)


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> list[RunRecord]:
    """All runs of the plan, in deterministic cell-then-run order.

    Invalid cells are logged and skipped; the rest proceed.  Serial and
    parallel execution produce identical record lists.
    """
    tasks, failures = _build_tasks(plan)
    for cell, message in failures:
        logger.warning("skipping cell %s: %s", cell, message)
    if workers <= 1:
        return [_execute_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_execute_task, tasks))


def success_rate(records: list[RunRecord]) -> float:
    """Fraction of runs in one cell that reached the value-to-reach."""
    if not records:
        raise EmptyCellError("success_rate needs at least one run")
    return sum(1 for r in records if r.success) / len(records)


def competition_rank(srs: list[tuple[str, float]]) -> list[tuple[str, int]]:
    """Rank by success rate, descending: 1 + the count of strictly better
    entries, so ties share a rank and the next rank is skipped."""
    return [
        (algorithm, 1 + sum(1 for _, other in srs if other > sr))
        for algorithm, sr in srs
    ]


@dataclass(frozen=True)
class SummaryCell:
    mean: float
    std: float
    sr: float
    rank: int


@dataclass
class SummaryTable:
    """Per-cell statistics plus per-dimension total ranks.

    ``cells`` is keyed by (function, dimension, algorithm); missing keys are
    gaps, never fabricated values.  ``std`` is the population (divide-by-N)
    standard deviation of best fitness over the cell's runs.
    """

    algorithms: list[str]
    functions: list[str]
    dimensions: list[int]
    cells: dict[tuple[str, int, str], SummaryCell]
    total_ranks: dict[tuple[int, str], int]


def summarize(records: list[RunRecord]) -> SummaryTable:
    """Mean/std of best fitness, success rate, and competition ranks."""
    groups: dict[tuple[str, int, str], list[RunRecord]] = {}
    algorithms: list[str] = []
    for record in records:
        key = (record.function, record.dimension, record.algorithm)
        groups.setdefault(key, []).append(record)
        if record.algorithm not in algorithms:
            algorithms.append(record.algorithm)
    functions = sorted({key[0] for key in groups})
    dimensions = sorted({key[1] for key in groups})
    cells: dict[tuple[str, int, str], SummaryCell] = {}
    for function in functions:
        for dimension in dimensions:
            present = [a for a in algorithms if (function, dimension, a) in groups]
            srs = [
                (a, success_rate(groups[(function, dimension, a)])) for a in present
            ]
            ranks = dict(competition_rank(srs))
            for algorithm, sr in srs:
                values = [r.best_fitness for r in groups[(function, dimension, algorithm)]]
                cells[(function, dimension, algorithm)] = SummaryCell(
                    mean=float(np.mean(values)),
                    std=float(np.std(values)),
                    sr=sr,
                    rank=ranks[algorithm],
                )
    total_ranks: dict[tuple[int, str], int] = {}
    for dimension in dimensions:
        for algorithm in algorithms:
            ranked = [
                cells[(f, dimension, algorithm)].rank
                for f in functions
                if (f, dimension, algorithm) in cells
            ]
            if ranked:
                total_ranks[(dimension, algorithm)] = sum(ranked)
    return SummaryTable(algorithms, functions, dimensions, cells, total_ranks)


def emit(table: SummaryTable, format: str = "csv") -> str:
    """Render a summary as CSV rows or as per-dimension markdown tables.

    Means and standard deviations print in scientific notation with two
    significant digits; success rates with two decimals.
    """
    if format == "csv":
        return _emit_csv(table)
    if format in ("markdown", "md"):
        return _emit_markdown(table)
    raise ConfigurationError(f"unknown emit format {format!r}")


def _emit_csv(table: SummaryTable) -> str:
    lines = [SUMMARY_HEADER]
    for function in table.functions:
        for dimension in table.dimensions:
            for algorithm in table.algorithms:
                cell = table.cells.get((function, dimension, algorithm))
                if cell is None:
                    continue
                lines.append(
                    f"{function},{dimension},{algorithm},"
                    f"{cell.mean:.1E},{cell.std:.1E},{cell.sr:.2f},{cell.rank}"
                )
    return "\n".join(lines) + "\n"


def _markdown_row(cells: list[str]) -> str:
    return "| " + " | ".join(cells) + " |"


def _emit_markdown(table: SummaryTable) -> str:
    if not table.cells:
        header = SUMMARY_HEADER.split(",")
        return _markdown_row(header) + "\n" + _markdown_row(["---"] * len(header)) + "\n"
    blocks = []
    for dimension in table.dimensions:
        algorithms = [
            a
            for a in table.algorithms
            if any((f, dimension, a) in table.cells for f in table.functions)
        ]
        header = _markdown_row(["Fun"] + algorithms)
        divider = _markdown_row(["---"] * (len(algorithms) + 1))

        sr_rows = [f"### D={dimension} success rate (SR/rank)", "", header, divider]
        for function in table.functions:
            row = [function]
            for algorithm in algorithms:
                cell = table.cells.get((function, dimension, algorithm))
                row.append("n/a" if cell is None else f"{cell.sr:.2f}/{cell.rank}")
            sr_rows.append(_markdown_row(row))
        totals = [
            "n/a" if (dimension, a) not in table.total_ranks else str(table.total_ranks[(dimension, a)])
            for a in algorithms
        ]
        sr_rows.append(_markdown_row(["Total rank"] + totals))

        quality_rows = [f"### D={dimension} solution quality (mean/std)", "", header, divider]
        for function in table.functions:
            row = [function]
            for algorithm in algorithms:
                cell = table.cells.get((function, dimension, algorithm))
                row.append("n/a" if cell is None else f"{cell.mean:.1E}/{cell.std:.1E}")
            quality_rows.append(_markdown_row(row))

        blocks.append("\n".join(sr_rows))
        blocks.append("\n".join(quality_rows))
    return "\n\n".join(blocks) + "\n"


def parse_summary_csv(text: str) -> SummaryTable:
    """Rebuild a SummaryTable from emitted CSV (values at printed precision)."""
    lines = text.splitlines()
    if not lines or lines[0] != SUMMARY_HEADER:
        raise RecordsParseError("line 1: missing or malformed summary header")
    algorithms: list[str] = []
    functions: list[str] = []
    dimensions: list[int] = []
    cells: dict[tuple[str, int, str], SummaryCell] = {}
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 7:
            raise RecordsParseError(f"line {number}: expected 7 fields, got {len(parts)}")
        try:
            function, dim_text, algorithm = parts[0], parts[1], parts[2]
            dimension = int(dim_text)
            cell = SummaryCell(
                mean=float(parts[3]), std=float(parts[4]), sr=float(parts[5]), rank=int(parts[6])
            )
        except ValueError as exc:
            raise RecordsParseError(f"line {number}: {exc}") from None
        cells[(function, dimension, algorithm)] = cell
        if algorithm not in algorithms:
            algorithms.append(algorithm)
        if function not in functions:
            functions.append(function)
        if dimension not in dimensions:
            dimensions.append(dimension)
    total_ranks: dict[tuple[int, str], int] = {}
    for dimension in dimensions:
        for algorithm in algorithms:
            ranked = [
                cells[(f, dimension, algorithm)].rank
                for f in functions
                if (f, dimension, algorithm) in cells
            ]
            if ranked:
                total_ranks[(dimension, algorithm)] = sum(ranked)
    return SummaryTable(algorithms, sorted(functions), sorted(dimensions), cells, total_ranks)


def records_to_csv(records: list[RunRecord]) -> str:
    """Full-precision per-run rows; traces are not included."""
    lines = [RECORDS_HEADER]
    for r in records:
        lines.append(
            f"{r.algorithm},{r.function},{r.dimension},{r.seed},"
            f"{r.best_fitness!r},{r.final_error!r},{int(r.success)},{r.evaluations_used}"
        )
    return "\n".join(lines) + "\n"


def parse_records_csv(text: str) -> list[RunRecord]:
    """Inverse of records_to_csv; raises RecordsParseError naming the line."""
    lines = text.splitlines()
    if not lines or lines[0] != RECORDS_HEADER:
        raise RecordsParseError("line 1: missing or malformed records header")
    records = []
    for number, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 8:
            raise RecordsParseError(f"line {number}: expected 8 fields, got {len(parts)}")
        try:
            if parts[6] not in ("0", "1"):
                raise ValueError(f"success must be 0 or 1, got {parts[6]!r}")
            records.append(
                RunRecord(
                    algorithm=parts[0],
                    function=parts[1],
                    dimension=int(parts[2]),
                    seed=int(parts[3]),
                    best_fitness=float(parts[4]),
                    final_error=float(parts[5]),
                    success=parts[6] == "1",
                    evaluations_used=int(parts[7]),
                )
            )
        except ValueError as exc:
            raise RecordsParseError(f"line {number}: {exc}") from None
    return records
