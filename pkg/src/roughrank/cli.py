"""Command-line entry point: ``roughrank <command> [options]``.

Exit codes: 0 success, 2 usage/config error, 3 data error, 4 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import io
import os
import sys
from pathlib import Path

from . import __version__
from .benchmark import BENCHMARK_METHODS
from .datasets import age_lems_table, toy_stroke_table
from .errors import RoughRankError, SchemaError
from .impact import SCALES, rank_attributes
from .pipeline import run_benchmark
from .report import RankingReport, atomic_write, csv_text
from .roughset import approximations, gamma, indiscernibility
from .sampling import ExperimentConfig, evaluate_features, fraction_sweep, parse_grid
from .table import DecisionTable, Schema, default_schema, load_csv, load_table, save_table

SEED_ENV = "ROUGHRANK_SEED"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies use SUPPRESS so they never overwrite a value given
    # before the subcommand name
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=d(None),
                   help=f"master seed (default: ${SEED_ENV} or 0)")
    g.add_argument("--jobs", type=int, default=d(1), help="parallel experiment workers")
    g.add_argument("--format", choices=("csv", "json"), default=d("csv"))
    g.add_argument("--out-dir", type=Path, default=d(Path(".")))
    return p


def _table_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("table", type=Path, help="table file from `ingest` (.npz) or a raw CSV")
    p.add_argument("--schema", type=Path, default=None,
                   help="schema for a raw CSV input (default: built-in stroke schema)")


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--experiments", type=int, default=100)
    p.add_argument("--train-fraction", type=float, default=0.70)
    p.add_argument("--minority-label", type=int, choices=(0, 1), default=1)
    p.add_argument("--fraction", type=float, default=1.0, help="dataset fraction per experiment")
    p.add_argument("--one-hot", action="store_true",
                   help="one-of-K encode each attribute before training")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="roughrank", description=__doc__.splitlines()[0],
                     parents=[_common(False)])
    common = _common(True)
    parser.add_argument("--version", action="version", version=f"roughrank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="CSV + schema -> decision table")
    p.add_argument("csv", type=Path)
    p.add_argument("schema", type=Path)
    p.add_argument("-o", "--out", type=Path, default=None,
                   help="output table path (default: <out-dir>/table.npz)")
    p.add_argument("--dry-run", action="store_true", help="validate without writing")

    p = sub.add_parser("rank", parents=[common], help="impact-factor ranking")
    _table_args(p)
    p.add_argument("--trace", action="store_true", help="attach per-class score traces")
    p.add_argument("--target-label", type=int, choices=(0, 1), default=1)
    p.add_argument("--scale", choices=tuple(SCALES), default="percent")

    for name, text in (("evaluate", "per-feature classification study"),
                       ("benchmark", "correlate every ranking method with accuracy"),
                       ("fractions", "dataset-fraction sensitivity sweep")):
        p = sub.add_parser(name, parents=[common], help=text)
        _table_args(p)
        _experiment_args(p)
        if name == "fractions":
            p.add_argument("--grid", default="0.1:1.0:10",
                           help="start:stop:count or comma list (default 0.1:1.0:10)")
        if name == "benchmark":
            p.add_argument("--target-label", type=int, choices=(0, 1), default=1)

    sub.add_parser("demo", parents=[common], help="walk through the built-in seven-row tables")
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SchemaError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _load(args) -> DecisionTable:
    path = args.table
    if path.suffix == ".npz":
        return load_table(path)
    schema = Schema.from_file(args.schema) if args.schema else default_schema()
    return load_csv(path, schema)


def _dataset_info(table: DecisionTable) -> dict:
    return {"rows": table.n_rows, "attributes": list(table.attributes),
            "decision": table.decision_name, "sha256": table.fingerprint()}


def _config(args, command: str) -> ExperimentConfig:
    try:
        return ExperimentConfig(seed=_seed(args), n_experiments=args.experiments,
                                train_fraction=args.train_fraction,
                                minority_label=args.minority_label,
                                dataset_fraction=args.fraction, one_hot=args.one_hot)
    except ValueError as exc:
        raise SchemaError(f"{command}: {exc}") from None


def _emit(args, name: str, header, rows, report: RankingReport) -> Path:
    return atomic_write(args.out_dir / name, csv_text(header, rows, report.config_hash))


def cmd_ingest(args) -> int:
    schema = Schema.from_file(args.schema)
    table = load_csv(args.csv, schema)
    print(f"{table.n_rows} rows, {len(table.attributes)} attributes")
    if not args.dry_run:
        out = args.out or args.out_dir / "table.npz"
        buf = io.BytesIO()
        save_table(table, buf)
        atomic_write(out, buf.getvalue())
        print(f"wrote {out}")
    return 0


def cmd_rank(args) -> int:
    table = _load(args)
    scores = rank_attributes(table, args.target_label, args.scale, trace=args.trace)
    report = RankingReport(
        _dataset_info(table),
        {"command": "rank", "target_label": args.target_label, "scale": args.scale},
        ranking=[{"attribute": s.attribute, "impact_factor": s.value,
                  "normalized": s.normalized, "rank": k} for k, s in enumerate(scores, 1)],
        traces=[s.trace.to_dict() for s in scores] if args.trace else None,
    )
    if args.format == "json":
        atomic_write(args.out_dir / "ranking.json", report.to_json())
    else:
        _emit(args, "ranking.csv", ("attribute", "impact_factor", "rank"),
              [(s.attribute, s.value, k) for k, s in enumerate(scores, 1)], report)
        if args.trace:
            atomic_write(args.out_dir / "ranking_trace.json", report.to_json())
    for k, s in enumerate(scores, 1):
        print(f"{k:>3}  {s.attribute:<24} {s.value:.6g}")
    return 0


def _metrics_block(metrics) -> dict:
    return {a: {"precision": m.precision, "recall": m.recall, "f_score": m.f_score,
                "accuracy": m.accuracy, "accuracy_quartiles": list(m.quartiles("accuracy"))}
            for a, m in metrics.items()}


def _write_metrics(args, metrics, report: RankingReport) -> None:
    _emit(args, "metrics.csv", ("attribute", "precision", "recall", "f_score", "accuracy"),
          [(a, m.precision, m.recall, m.f_score, m.accuracy) for a, m in metrics.items()],
          report)
    _emit(args, "boxplot.csv", ("attribute", "experiment_index", "accuracy"),
          [(a, i, c.accuracy) for a, m in metrics.items() for i, c in enumerate(m.counts)],
          report)


def cmd_evaluate(args) -> int:
    table = _load(args)
    cfg = _config(args, "evaluate")
    metrics = evaluate_features(table, cfg, jobs=args.jobs)
    report = RankingReport(_dataset_info(table), {"command": "evaluate", **cfg.to_dict()},
                           metrics=_metrics_block(metrics))
    if args.format == "json":
        atomic_write(args.out_dir / "evaluate.json", report.to_json())
    else:
        _write_metrics(args, metrics, report)
    for a, m in metrics.items():
        print(f"{a:<24} accuracy={m.accuracy:.3f} f_score={m.f_score:.3f}")
    return 0


def cmd_benchmark(args) -> int:
    table = _load(args)
    cfg = _config(args, "benchmark")
    res = run_benchmark(table, cfg, args.target_label, jobs=args.jobs)
    scores = {a: {m: res.methods[m].raw_map()[a] for m in BENCHMARK_METHODS}
              for a in table.attributes}
    report = RankingReport(
        _dataset_info(table),
        {"command": "benchmark", "target_label": args.target_label, **cfg.to_dict()},
        scores=scores, metrics=_metrics_block(res.metrics),
        correlations=[{"method": c.method, "pearson_r": c.pearson_r,
                       "points": [list(p) for p in c.points]} for c in res.correlations],
    )
    if args.format == "json":
        atomic_write(args.out_dir / "benchmark.json", report.to_json())
    else:
        _emit(args, "benchmark.csv", ("method", "pearson_r"),
              [(c.method, c.pearson_r) for c in res.correlations], report)
        for c in res.correlations:
            _emit(args, f"scatter_{c.method}.csv",
                  ("attribute", "accuracy", "normalized_score"), c.points, report)
    for c in res.correlations:
        print(f"{c.method:<14} r = {c.pearson_r:+.3f}")
    return 0


def cmd_fractions(args) -> int:
    table = _load(args)
    cfg = _config(args, "fractions")
    try:
        grid = parse_grid(args.grid)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    sweep = fraction_sweep(table, cfg, grid, jobs=args.jobs)
    block = [{"fraction": f, "mean": s.mean, "quartiles": list(s.quartiles()),
              "n_undefined": s.n_undefined, "correlations": list(s.correlations)}
             for f, s in sweep.items()]
    report = RankingReport(_dataset_info(table),
                           {"command": "fractions", "grid": grid, **cfg.to_dict()},
                           fraction_sweep=block)
    if args.format == "json":
        atomic_write(args.out_dir / "fractions.json", report.to_json())
    else:
        _emit(args, "fractions.csv", ("fraction", "experiment_index", "pearson_r"),
              [(f, i, r) for f, s in sweep.items() for i, r in enumerate(s.correlations)],
              report)
        _emit(args, "fractions_summary.csv",
              ("fraction", "mean", "min", "q1", "median", "q3", "max", "n_undefined"),
              [(f, s.mean, *s.quartiles(), s.n_undefined) for f, s in sweep.items()], report)
    for f, s in sweep.items():
        print(f"fraction {f:.2f}: mean r = {s.mean:+.3f}")
    return 0


def _fmt_classes(part) -> str:
    return ", ".join("{" + ",".join(str(i + 1) for i in c) + "}" for c in part.classes)


def cmd_demo(args) -> int:
    t1 = age_lems_table()
    print("Information table (7 rows: Age, LEMS)")
    print("  U/IND({Age, LEMS}) =", _fmt_classes(indiscernibility(t1, ["Age", "LEMS"])))
    print("  U/IND({Age})       =", _fmt_classes(indiscernibility(t1, ["Age"])))

    t2 = toy_stroke_table()
    positives = [i for i, d in enumerate(t2.decision) if d == 1]
    print("\nDecision table (7 rows: age, heart disease -> stroke)")
    print("  stroke-positive rows:", "{" + ",".join(str(i + 1) for i in positives) + "}")
    scores = {s.attribute: s for s in rank_attributes(t2, trace=True)}
    for attr in t2.attributes:
        part = indiscernibility(t2, [attr])
        reg = approximations(part, positives)
        s = scores[attr]
        print(f"\n  {attr}: classes {_fmt_classes(part)}")
        print(f"    lower approx = {list(i + 1 for i in reg.lower)}, "
              f"upper approx = {list(i + 1 for i in reg.upper)}")
        for c in s.trace.classes:
            print(f"    class of size {c.size}: {c.positives} positive -> "
                  f"{c.positives}*{c.positives}/{c.size} = {c.contribution}")
        ret = s.trace.retention
        print(f"    retention index = {ret} ({float(ret):.4f})")
        print(f"    impact factor   = 100*{ret}/{t2.n_rows} = {s.exact} ({s.value:.4f})")
        print(f"    gamma           = {gamma(t2, [attr])}")
    return 0


COMMANDS = {"ingest": cmd_ingest, "rank": cmd_rank, "evaluate": cmd_evaluate,
            "benchmark": cmd_benchmark, "fractions": cmd_fractions, "demo": cmd_demo}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except RoughRankError as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"roughrank: error: {msg}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        print(f"roughrank: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
