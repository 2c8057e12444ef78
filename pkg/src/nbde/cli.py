"""Command-line frontend: single runs, experiment grids, and table rendering."""

from __future__ import annotations

import argparse
import dataclasses
import os
import re
import sys
import tempfile
from pathlib import Path

from .baselines import ALGORITHMS as BASELINE_ALGORITHMS
from .baselines import BaselineConfig, run_baseline
from .benchmarks import FUNCTION_IDS, get_spec
from .core import ConfigurationError
from .harness import (
    ExperimentPlan,
    RecordsParseError,
    emit,
    parse_records_csv,
    records_to_csv,
    run_experiment,
    summarize,
)
from .optimizer import DEFAULT_CROSSOVER_MIX, NbdeConfig, run

ALL_ALGORITHMS = ("nbde",) + BASELINE_ALGORITHMS

_FUNCTION_RANGE = re.compile(r"^F(\d)\.\.F(\d)$")


def _parse_functions(text: str, parser: argparse.ArgumentParser) -> tuple[str, ...]:
    match = _FUNCTION_RANGE.match(text)
    if match:
        low, high = int(match.group(1)), int(match.group(2))
        ids = tuple(f"F{k}" for k in range(low, high + 1))
    else:
        ids = tuple(part.strip() for part in text.split(",") if part.strip())
    if not ids:
        parser.error("no functions given")
    for fid in ids:
        if fid not in FUNCTION_IDS:
            parser.error(f"unknown function {fid!r}; choose from {', '.join(FUNCTION_IDS)}")
    return ids


def _parse_dims(text: str, parser: argparse.ArgumentParser) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        parser.error(f"bad dimension list {text!r}")
    if not dims or any(d < 2 for d in dims):
        parser.error("dimensions must be integers >= 2")
    return dims


def _parse_algs(text: str, parser: argparse.ArgumentParser) -> tuple[str, ...]:
    tags = tuple(part.strip() for part in text.split(",") if part.strip())
    if not tags:
        parser.error("no algorithms given")
    for tag in tags:
        if tag not in ALL_ALGORITHMS:
            parser.error(f"unknown algorithm {tag!r}; choose from {', '.join(ALL_ALGORITHMS)}")
    return tags


def _parse_mix(text: str, parser: argparse.ArgumentParser) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        parser.error("--mix needs three comma-separated weights (binary,exponential,none)")
    try:
        weights = tuple(float(p) for p in parts)
    except ValueError:
        parser.error(f"bad --mix value {text!r}")
    return weights


def _make_config(algorithm: str, args, parser: argparse.ArgumentParser):
    try:
        if algorithm == "nbde":
            return NbdeConfig(
                np=args.np if args.np is not None else 40,
                cr_low=args.cr_low if args.cr_low is not None else 0.4,
                cr_high=args.cr_high if args.cr_high is not None else 0.9,
                crossover_mix=args.mix if args.mix is not None else DEFAULT_CROSSOVER_MIX,
                max_evaluations=args.budget,
            )
        return BaselineConfig(algorithm, np=args.np, max_evaluations=args.budget)
    except ConfigurationError as exc:
        parser.error(str(exc))


def _config_echo(config) -> str:
    if isinstance(config, NbdeConfig):
        mix = "/".join(f"{w:.6g}" for w in config.crossover_mix)
        return (
            f"np={config.np} cr_low={config.cr_low} cr_high={config.cr_high} mix={mix}"
        )
    return f"np={config.np if config.np is not None else 'auto'} f={config.f} cr={config.cr}"


def _write_atomic(path: Path, text: str) -> None:
    # Write-then-rename so readers never observe a partial file.
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _prepare_out_dir(path: Path) -> None:
    path.mkdir(parents=True, exist_ok=True)
    fd, probe = tempfile.mkstemp(dir=path, suffix=".probe")
    os.close(fd)
    os.unlink(probe)


def _write_trace(directory: Path, record) -> Path:
    name = f"trace_{record.algorithm}_{record.function}_D{record.dimension}_seed{record.seed}.csv"
    lines = ["evaluation_index,best_fitness"]
    lines.extend(f"{index},{value!r}" for index, value in record.best_so_far_trace)
    path = directory / name
    _write_atomic(path, "\n".join(lines) + "\n")
    return path


def _validate_shared_flags(args, parser) -> None:
    if args.seed < 0:
        parser.error("--seed must be non-negative")
    if args.budget_mult < 1:
        parser.error("--budget-mult must be positive")
    if args.budget is not None and args.budget < 1:
        parser.error("--budget must be positive")
    if args.vtr_override is not None and args.vtr_override <= 0:
        parser.error("--vtr-override must be positive")


def _cmd_solve(args, parser) -> int:
    _validate_shared_flags(args, parser)
    functions = _parse_functions(args.function, parser)
    if len(functions) != 1:
        parser.error("solve takes exactly one --function")
    function = functions[0]
    if args.alg not in ALL_ALGORITHMS:
        parser.error(f"unknown algorithm {args.alg!r}")
    if args.dim < 2:
        parser.error("--dim must be >= 2")
    spec = get_spec(function, args.dim)
    if args.vtr_override is not None:
        spec = dataclasses.replace(spec, vtr=args.vtr_override)
    if args.budget is None:
        args.budget = args.budget_mult * args.dim
    config = _make_config(args.alg, args, parser)
    print(
        f"config: algorithm={args.alg} function={function} dim={args.dim} "
        f"seed={args.seed} budget={args.budget} vtr={spec.vtr!r} {_config_echo(config)}"
    )
    if args.alg == "nbde":
        record = run(config, spec, args.seed)
    else:
        record = run_baseline(config, spec, args.seed)
    print(f"best_fitness={record.best_fitness!r}")
    print(f"final_error={record.final_error!r}")
    print(f"evaluations={record.evaluations_used}")
    print(f"success={'true' if record.success else 'false'}")
    if args.trace:
        out = Path(args.out)
        try:
            _prepare_out_dir(out)
            path = _write_trace(out, record)
        except OSError as exc:
            print(f"error: cannot write trace: {exc}", file=sys.stderr)
            return 1
        print(f"trace={path}")
    return 0


def _cmd_bench(args, parser) -> int:
    _validate_shared_flags(args, parser)
    functions = _parse_functions(args.functions, parser)
    dims = _parse_dims(args.dims, parser)
    algorithms = _parse_algs(args.algs, parser)
    if args.runs < 1:
        parser.error("--runs must be positive")
    if args.parallel < 1:
        parser.error("--parallel must be positive")
    out = Path(args.out)
    try:
        _prepare_out_dir(out)
    except OSError as exc:
        print(f"error: output directory not writable: {exc}", file=sys.stderr)
        return 1
    configs = tuple(_make_config(tag, args, parser) for tag in algorithms)
    try:
        plan = ExperimentPlan(
            algorithms=configs,
            functions=functions,
            dimensions=dims,
            runs_per_cell=args.runs,
            budget_multiplier=args.budget_mult,
            base_seed=args.seed,
            vtr_override=args.vtr_override,
        )
    except ConfigurationError as exc:
        parser.error(str(exc))
    print(
        f"plan: algs={','.join(algorithms)} functions={','.join(functions)} "
        f"dims={','.join(str(d) for d in dims)} runs={args.runs} "
        f"budget={'auto' if args.budget is None else args.budget} "
        f"budget_mult={args.budget_mult} base_seed={args.seed} parallel={args.parallel}"
    )
    records = run_experiment(plan, workers=args.parallel)
    _write_atomic(out / "records.csv", records_to_csv(records))
    print(f"wrote {out / 'records.csv'}")
    table = summarize(records)
    if args.format in (None, "csv"):
        _write_atomic(out / "summary.csv", emit(table, "csv"))
        print(f"wrote {out / 'summary.csv'}")
    if args.format in (None, "md"):
        _write_atomic(out / "summary.md", emit(table, "markdown"))
        print(f"wrote {out / 'summary.md'}")
    if args.trace:
        trace_dir = out / "traces"
        for record in records:
            _write_trace(trace_dir, record)
        print(f"wrote {len(records)} trace files to {trace_dir}")
    for dimension in table.dimensions:
        for algorithm in table.algorithms:
            rank = table.total_ranks.get((dimension, algorithm))
            if rank is not None:
                print(f"total-rank dim={dimension} alg={algorithm} rank={rank}")
    return 0


def _cmd_table(args, parser) -> int:
    path = Path(args.records)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read records: {exc}", file=sys.stderr)
        return 1
    try:
        records = parse_records_csv(text)
    except RecordsParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit(summarize(records), "markdown"))
    return 0


def _add_nbde_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--np", type=int, default=None, help="population size override")
    sub.add_argument("--cr-low", dest="cr_low", type=float, default=None)
    sub.add_argument("--cr-high", dest="cr_high", type=float, default=None)
    sub.add_argument(
        "--mix",
        type=str,
        default=None,
        help="crossover weights binary,exponential,none (default 0.5,0.5,0)",
    )
    sub.add_argument("--budget", type=int, default=None, help="absolute evaluation budget")
    sub.add_argument(
        "--budget-mult",
        dest="budget_mult",
        type=int,
        default=10_000,
        help="evaluations per problem dimension when --budget is not given",
    )
    sub.add_argument("--vtr-override", dest="vtr_override", type=float, default=None)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbde",
        description="Nearest-better differential evolution, baselines, and benchmark tables.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="run one optimization and print a report")
    solve.add_argument("--function", required=True, help="benchmark id, e.g. F7")
    solve.add_argument("--dim", type=int, default=10)
    solve.add_argument("--alg", default="nbde", help=f"one of {', '.join(ALL_ALGORITHMS)}")
    solve.add_argument("--seed", type=int, default=0)
    _add_nbde_flags(solve)
    solve.add_argument("--trace", action="store_true", help="write the best-so-far trace CSV")
    solve.add_argument("--out", default=".", help="directory for trace output")
    solve.set_defaults(handler=_cmd_solve)

    bench = subparsers.add_parser("bench", help="run an experiment grid and write tables")
    bench.add_argument("--functions", default="F1..F9", help="comma list or range like F1..F9")
    bench.add_argument("--dims", default="10", help="comma list of dimensions")
    bench.add_argument("--algs", default=",".join(ALL_ALGORITHMS))
    bench.add_argument("--runs", type=int, default=50, help="independent runs per cell")
    bench.add_argument("--seed", type=int, default=0, help="base seed for the whole grid")
    _add_nbde_flags(bench)
    bench.add_argument("--out", default=".", help="output directory")
    bench.add_argument("--format", choices=("csv", "md"), default=None, help="write only one summary format")
    bench.add_argument("--parallel", type=int, default=1, help="worker processes")
    bench.add_argument("--trace", action="store_true", help="write per-run trace CSVs")
    bench.set_defaults(handler=_cmd_bench)

    table = subparsers.add_parser("table", help="re-render a saved records.csv as markdown")
    table.add_argument("records", help="path to a records.csv written by bench")
    table.set_defaults(handler=_cmd_table)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    # Normalize the parsed-but-composite flags before dispatch.
    if getattr(args, "mix", None) is not None and isinstance(args.mix, str):
        args.mix = _parse_mix(args.mix, parser)
    return args.handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
