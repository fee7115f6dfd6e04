"""Command-line driver: synthesize data, compute metrics, run the selectors
with repeats, evaluate the fronts and rank algorithms.

Exit codes: 0 success, 2 usage / malformed input table, 3 I/O or unreadable
dataset, 4 the selection algorithm failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from suitemin.boxlsq import SolverError
from suitemin.data_io import (
    DatasetParseError,
    DatasetValidationError,
    SynthConfig,
    effectiveness_matrix,
    load_dataset,
    save_dataset,
    synth_dataset,
)
from suitemin.doless import DolessConfig, EmptySelectionError, doless_run
from suitemin.nsga2 import NSGA2Config, pairwise_nsga2
from suitemin.objectives import GOALS, EffectivenessMatrix, Selection
from suitemin.stats import evaluate_front, mutation_score, normalized_tet, rank_table, write_rank_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_ALGORITHM = 4

OUTPUT_DIR_ENV = "SUITEMIN_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "suitemin-out"
ALGORITHMS = ("doless", "nsga2-pairwise")
RESULT_COLUMNS = [
    "repeat",
    "algorithm",
    "selection_bits",
    "tet",
    "ms",
    "obj_time",
    "obj_disc",
    "obj_inf",
    "obj_inst",
    "obj_minmax",
    "wallclock_s",
]


class UsageError(Exception):
    pass


class InputError(Exception):
    """Unreadable or invalid dataset / output location."""


class AlgorithmError(Exception):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _default_out_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _load(path):
    try:
        return load_dataset(path)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    except (DatasetParseError, DatasetValidationError) as exc:
        raise InputError(f"invalid dataset: {exc}") from exc


# --- repeats ---------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    dataset_path: str
    algorithm: str
    repeats: int = 20
    seed: int = 0
    output_dir: Path | None = None
    workers: int = 1
    pop_size: int | None = None
    best_count: int | None = None
    opponents: int | None = None
    regularization: float | None = None
    nsga_pop: int | None = None
    generations: int | None = None
    crossover: float | None = None
    mutation: float | None = None

    def doless_config(self, seed: int) -> DolessConfig:
        base = DolessConfig()
        return DolessConfig(
            pop_size=self.pop_size or base.pop_size,
            best_count=self.best_count,
            n_opponents=self.opponents or base.n_opponents,
            regularization=self.regularization,
            seed=seed,
        )

    def nsga_config(self, seed: int) -> NSGA2Config:
        base = NSGA2Config()
        return NSGA2Config(
            pop_size=self.nsga_pop or base.pop_size,
            generations=base.generations if self.generations is None else self.generations,
            crossover_prob=base.crossover_prob if self.crossover is None else self.crossover,
            mutation_prob=self.mutation,
            seed=seed,
        )


@dataclass
class RepeatResult:
    repeat: int
    front: list[Selection]
    wallclock: float
    note: str = ""


def _run_once(cfg: RunConfig, m: EffectivenessMatrix, kills: np.ndarray, times: np.ndarray, repeat: int):
    seed = cfg.seed + repeat
    start = time.perf_counter()
    try:
        if cfg.algorithm == "doless":
            front = doless_run(m, cfg.doless_config(seed)).front
            note = ""
        else:
            res = pairwise_nsga2(m, cfg.nsga_config(seed), kills=kills)
            front = res.front
            note = "+".join(GOALS[g] for g in res.best_subset)
    except (EmptySelectionError, SolverError) as exc:
        raise AlgorithmError(f"repeat {repeat}: {exc}") from exc
    elapsed = time.perf_counter() - start
    if not front:
        raise AlgorithmError(f"repeat {repeat}: {cfg.algorithm} returned an empty front")
    evaluate_front(front, kills, times)
    return RepeatResult(repeat, front, elapsed, note)


def run_repeats(cfg: RunConfig, m: EffectivenessMatrix, kills, times) -> list[RepeatResult]:
    """Run ``cfg.repeats`` independent repeats; repeat i uses seed ``cfg.seed + i``."""
    if cfg.workers <= 1:
        return [_run_once(cfg, m, kills, times, i) for i in range(cfg.repeats)]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(_run_once, cfg, m, kills, times, i) for i in range(cfg.repeats)]
        return [f.result() for f in futures]


def results_csv(algorithm: str, results: Sequence[RepeatResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for r in results:
        for sel in r.front:
            writer.writerow(
                [r.repeat, algorithm, sel.bits(), _fmt(sel.tet), _fmt(sel.ms)]
                + [_fmt(v) for v in sel.objectives]
                + [f"{r.wallclock:.6f}"]
            )
    return buf.getvalue()


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _select(cfg: RunConfig) -> tuple[Path, list[RepeatResult]]:
    d = _load(cfg.dataset_path)
    m = effectiveness_matrix(d)
    results = run_repeats(cfg, m, d.kill_matrix, d.times)
    out_dir = cfg.output_dir or _default_out_dir()
    path = out_dir / f"results_{cfg.algorithm}.csv"
    _write(path, results_csv(cfg.algorithm, results))
    timing = {
        "algorithm": cfg.algorithm,
        "dataset": str(cfg.dataset_path),
        "seed": cfg.seed,
        "repeats": cfg.repeats,
        "wallclock_s": [r.wallclock for r in results],
        "total_s": sum(r.wallclock for r in results),
        "notes": [r.note for r in results],
    }
    _write(out_dir / f"timing_{cfg.algorithm}.json", json.dumps(timing, indent=1, sort_keys=True) + "\n")
    return path, results


# --- results tables --------------------------------------------------------


def read_results(path) -> list[dict]:
    """Parse a results CSV; raises UsageError on a malformed table."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read results file {path}: {exc.strerror or exc}") from exc
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise UsageError(f"{path}: no result rows")
    missing = [c for c in RESULT_COLUMNS if c not in rows[0]]
    if missing:
        raise UsageError(f"{path}: missing columns {missing}")
    parsed = []
    for i, row in enumerate(rows, start=2):
        try:
            rec = {"repeat": int(row["repeat"]), "algorithm": row["algorithm"], "selection_bits": row["selection_bits"]}
            for key in RESULT_COLUMNS[3:]:
                rec[key] = float(row[key])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}, line {i}: {exc}") from exc
        if not rec["algorithm"] or set(rec["selection_bits"]) - {"0", "1"}:
            raise UsageError(f"{path}, line {i}: bad algorithm name or selection bits")
        parsed.append(rec)
    return parsed


def _per_repeat(rows: list[dict], label: str | None) -> dict[str, dict[int, list[dict]]]:
    out: dict[str, dict[int, list[dict]]] = {}
    for row in rows:
        name = label or row["algorithm"]
        out.setdefault(name, {}).setdefault(row["repeat"], []).append(row)
    return out


def best_member(tets: Sequence[float], mss: Sequence[float]) -> int:
    """Index of the member with the highest MS, ties broken by lowest TET."""
    return min(range(len(tets)), key=lambda i: (-mss[i], tets[i], i))


# --- commands --------------------------------------------------------------


def cmd_synth(args) -> int:
    cfg = SynthConfig(
        n_tests=args.tests,
        n_signals=args.signals,
        n_mutants=args.mutants,
        trace_len=args.trace_len,
        dt=args.dt,
        pulse_rate=args.pulse_rate,
        oscillation_rate=args.oscillation_rate,
        blowup_rate=args.blowup_rate,
        kill_prob=args.kill_prob,
        noise=args.noise,
        seed=args.seed,
        name=args.name,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    d = synth_dataset(cfg)
    try:
        save_dataset(d, args.out)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    print(f"wrote {args.out}: {d.n_tests} tests, {d.n_signals} signals, {d.n_mutants} mutants")
    return EXIT_OK


def cmd_metrics(args) -> int:
    d = _load(args.dataset)
    m = effectiveness_matrix(d)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["test_id", "execution_time", *(f"share_{g}" for g in GOALS)])
    for k, t in enumerate(d.tests):
        writer.writerow([t.id, _fmt(t.execution_time), *(_fmt(v) for v in m.a[:, k])])
    if args.out:
        _write(Path(args.out), buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    for g, flag in zip(GOALS, m.degenerate):
        if flag:
            print(f"warning: {g} is zero for every test (degenerate goal)", file=sys.stderr)
    return EXIT_OK


def _run_config(args, algorithm: str | None = None) -> RunConfig:
    return RunConfig(
        dataset_path=args.dataset,
        algorithm=algorithm or args.algorithm,
        repeats=args.repeats,
        seed=args.seed,
        output_dir=Path(args.out_dir) if args.out_dir else None,
        workers=getattr(args, "workers", 1),
        pop_size=args.pop_size,
        best_count=args.best_count,
        opponents=args.opponents,
        regularization=args.regularization,
        nsga_pop=args.nsga_pop,
        generations=args.generations,
        crossover=args.crossover,
        mutation=args.mutation,
    )


def cmd_select(args) -> int:
    cfg = _run_config(args)
    path, results = _select(cfg)
    rows = sum(len(r.front) for r in results)
    total = sum(r.wallclock for r in results)
    print(f"wrote {path}: {cfg.repeats} repeats, {rows} front rows, total wall-clock {total:.3f} s")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    d = _load(args.dataset)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["algorithm", "repeat", "front_size", "median_tet", "median_ms", "best_tet", "best_ms"])
    for path in args.results:
        for name, repeats in _per_repeat(read_results(path), None).items():
            for rep, rows in sorted(repeats.items()):
                tets, mss = [], []
                for row in rows:
                    bits = row["selection_bits"]
                    if len(bits) != d.n_tests:
                        raise UsageError(f"{path}: selection of {len(bits)} tests, dataset has {d.n_tests}")
                    include = np.frombuffer(bits.encode(), dtype=np.uint8) == ord("1")
                    tets.append(normalized_tet(d.times, include))
                    mss.append(mutation_score(d.kill_matrix, include))
                b = best_member(tets, mss)
                writer.writerow(
                    [name, rep, len(rows), _fmt(np.median(tets)), _fmt(np.median(mss)), _fmt(tets[b]), _fmt(mss[b])]
                )
    if args.out:
        _write(Path(args.out), buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_rank(args) -> int:
    if args.labels and len(args.labels) != len(args.results):
        raise UsageError("--labels needs one label per results file")
    merged: dict[str, dict[int, list[dict]]] = {}
    for i, path in enumerate(args.results):
        label = args.labels[i] if args.labels else None
        for name, repeats in _per_repeat(read_results(path), label).items():
            if name in merged:
                raise UsageError(f"algorithm {name!r} appears in more than one file; pass --labels")
            merged[name] = repeats
    # one observation per repeat: the median over that repeat's front
    observations = {
        measure: {
            name: [float(np.median([r[measure] for r in rows])) for _, rows in sorted(reps.items())]
            for name, reps in merged.items()
        }
        for measure in ("tet", "ms")
    }
    rows = rank_table(observations)
    buf = io.StringIO()
    write_rank_csv(rows, buf)
    if args.out:
        _write(Path(args.out), buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    for measure in ("tet", "ms"):
        winners = [r["algorithm"] for r in rows if r["measure"] == measure and r["rank"] == 1]
        print(f"{measure}: rank-1 {', '.join(winners)}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    totals = {}
    for algorithm in ALGORITHMS:
        cfg = _run_config(args, algorithm)
        _, results = _select(cfg)
        totals[algorithm] = sum(r.wallclock for r in results)
    ratio = totals["nsga2-pairwise"] / totals["doless"]
    report = {
        "dataset": str(args.dataset),
        "repeats": args.repeats,
        "seed": args.seed,
        "total_doless_s": totals["doless"],
        "total_nsga2_pairwise_s": totals["nsga2-pairwise"],
        "speedup": ratio,
    }
    out_dir = Path(args.out_dir) if args.out_dir else _default_out_dir()
    _write(out_dir / "bench.json", json.dumps(report, indent=1, sort_keys=True) + "\n")
    print(f"total_doless_s {totals['doless']!r}")
    print(f"total_nsga2_pairwise_s {totals['nsga2-pairwise']!r}")
    print(f"speedup {ratio!r}")
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def _add_selector_flags(p: argparse.ArgumentParser, repeats_default: int) -> None:
    p.add_argument("--dataset", required=True, help="dataset directory or dataset.json")
    p.add_argument("--repeats", type=_positive_int, default=repeats_default)
    p.add_argument("--seed", type=int, default=0, help="repeat i uses seed + i")
    p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./{DEFAULT_OUTPUT_DIR})")
    g = p.add_argument_group("DoLesS overrides")
    g.add_argument("--pop-size", type=_positive_int, help="goal population size (default 10000)")
    g.add_argument("--best-count", type=_positive_int, help="goals kept after scoring (default sqrt(pop))")
    g.add_argument("--opponents", type=_positive_int, help="opponent sample size for scoring (default 100)")
    g.add_argument("--regularization", type=_positive_float, help="ridge weight (default 1/n_tests^2)")
    g = p.add_argument_group("NSGA-II overrides")
    g.add_argument("--nsga-pop", type=_positive_int, help="population size (default 100)")
    g.add_argument("--generations", type=int, help="generations (default 250)")
    g.add_argument("--crossover", type=_probability, help="single-point crossover probability (default 0.8)")
    g.add_argument("--mutation", type=_probability, help="bit-flip probability (default 1/n_tests)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="suitemin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic dataset bundle")
    p.add_argument("--out", required=True, help="bundle directory to create")
    p.add_argument("--tests", type=int, default=150)
    p.add_argument("--signals", type=int, default=7)
    p.add_argument("--mutants", type=int, default=6)
    p.add_argument("--trace-len", type=int, default=101)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument("--pulse-rate", type=float, default=0.3)
    p.add_argument("--oscillation-rate", type=float, default=0.3)
    p.add_argument("--blowup-rate", type=float, default=0.3)
    p.add_argument("--kill-prob", type=float, default=0.2)
    p.add_argument("--noise", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="synthetic")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("metrics", help="dump the per-test effectiveness table")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("select", help="run a selector with repeats and write a results CSV")
    p.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    p.add_argument("--workers", type=_positive_int, default=1, help="parallel repeat workers (default serial)")
    _add_selector_flags(p, repeats_default=20)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("evaluate", help="per-repeat TET/MS summaries of results CSVs")
    p.add_argument("--dataset", required=True)
    p.add_argument("results", nargs="+")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("rank", help="Scott-Knott rank algorithms on TET (lower) and MS (higher)")
    p.add_argument("results", nargs="+")
    p.add_argument("--labels", nargs="+", help="algorithm name to use for each results file")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("bench", help="time both selectors with matched repeats")
    _add_selector_flags(p, repeats_default=5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"suitemin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"suitemin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AlgorithmError as exc:
        print(f"suitemin {args.command}: algorithm failed: {exc}", file=sys.stderr)
        return EXIT_ALGORITHM


if __name__ == "__main__":
    sys.exit(main())
