"""Dataset bundles on disk and a synthetic CPS test-suite generator.

A bundle is a directory holding ``dataset.json`` plus one CSV per test case
(``signal_1..signal_N`` columns, one row per simulation step)::

    {"name": ..., "dt": 0.05, "signals": 7,
     "tests": [{"id": "t000", "execution_time": 1.3, "trace_file": "traces/t000.csv"}, ...],
     "kill_matrix": [[0, 1, ...], ...],   # one row per mutant
     "provenance": {...}}
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from suitemin.objectives import EffectivenessMatrix, build_matrix
from suitemin.signals import SignalTrace, per_test_scores

MANIFEST = "dataset.json"
MIN_TESTS = 6


class DatasetParseError(ValueError):
    """The manifest or a trace file is not well-formed."""


class DatasetValidationError(ValueError):
    """The dataset parsed but breaks an invariant."""


@dataclass
class SimulationCase:
    id: str
    execution_time: float
    outputs: np.ndarray  # (samples, signals)

    def traces(self, dt: float) -> list[SignalTrace]:
        return [SignalTrace(self.outputs[:, j], dt) for j in range(self.outputs.shape[1])]


@dataclass
class Dataset:
    name: str
    dt: float
    tests: list[SimulationCase]
    kill_matrix: np.ndarray  # (mutants, tests), 0/1
    provenance: dict = field(default_factory=dict)

    @property
    def n_tests(self) -> int:
        return len(self.tests)

    @property
    def n_signals(self) -> int:
        return self.tests[0].outputs.shape[1]

    @property
    def n_mutants(self) -> int:
        return self.kill_matrix.shape[0]

    @property
    def times(self) -> np.ndarray:
        return np.array([t.execution_time for t in self.tests])

    def validate(self) -> "Dataset":
        if not (isinstance(self.dt, (int, float)) and math.isfinite(self.dt) and self.dt > 0):
            raise DatasetValidationError(f"dt: must be a positive number, got {self.dt!r}")
        if len(self.tests) < MIN_TESTS:
            raise DatasetValidationError(f"tests: need more than 5 test cases, got {len(self.tests)}")
        ids = [t.id for t in self.tests]
        if len(set(ids)) != len(ids):
            raise DatasetValidationError("tests: duplicate test ids")
        shape = None
        for t in self.tests:
            if not (math.isfinite(t.execution_time) and t.execution_time > 0):
                raise DatasetValidationError(f"tests[{t.id}].execution_time: must be positive")
            out = np.asarray(t.outputs)
            if out.ndim != 2 or out.shape[0] == 0 or out.shape[1] == 0:
                raise DatasetValidationError(f"tests[{t.id}].outputs: need a (samples, signals) table")
            if not np.all(np.isfinite(out)):
                raise DatasetValidationError(f"tests[{t.id}].outputs: non-finite sample")
            if shape is None:
                shape = out.shape
            elif out.shape != shape:
                raise DatasetValidationError(
                    f"tests[{t.id}].outputs: shape {out.shape} differs from {shape} of the first test"
                )
        k = np.asarray(self.kill_matrix)
        if k.ndim != 2 or k.shape[1] != len(self.tests):
            raise DatasetValidationError(
                f"kill_matrix: expected (mutants, {len(self.tests)}) matrix, got shape {k.shape}"
            )
        if k.size and not np.isin(k, (0, 1)).all():
            raise DatasetValidationError("kill_matrix: entries must be 0 or 1")
        return self


def effectiveness_matrix(d: Dataset) -> EffectivenessMatrix:
    """Effectiveness matrix of a dataset's suite (time + four signal metrics)."""
    scores = per_test_scores([t.traces(d.dt) for t in d.tests])
    return build_matrix(scores, d.times)


# --- manifest format -------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _trace_csv(outputs: np.ndarray) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"signal_{j + 1}" for j in range(outputs.shape[1])])
    for row in outputs:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def save_dataset(d: Dataset, path) -> Path:
    """Write ``d`` as a bundle directory; returns the manifest path.

    Output is canonical: sorted JSON keys and 17-significant-digit floats,
    so saving the same dataset twice gives byte-identical files.
    """
    root = Path(path)
    try:
        (root / "traces").mkdir(parents=True, exist_ok=True)
        tests = []
        for t in d.tests:
            rel = f"traces/{t.id}.csv"
            (root / rel).write_text(_trace_csv(np.asarray(t.outputs)), encoding="utf-8")
            tests.append({"id": t.id, "execution_time": float(t.execution_time), "trace_file": rel})
        manifest = {
            "name": d.name,
            "dt": float(d.dt),
            "signals": int(d.n_signals),
            "tests": tests,
            "kill_matrix": np.asarray(d.kill_matrix, dtype=int).tolist(),
            "provenance": d.provenance,
        }
        text = json.dumps(manifest, sort_keys=True, indent=1) + "\n"
        (root / MANIFEST).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write dataset to {root}: {exc.strerror or exc}") from exc
    return root / MANIFEST


def _read_trace(path: Path, n_signals: int) -> np.ndarray:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read trace file {path}: {exc.strerror or exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise DatasetParseError(f"{path}: empty trace file")
    header = rows[0]
    expected = [f"signal_{j + 1}" for j in range(n_signals)]
    if header != expected:
        raise DatasetParseError(f"{path}: header {header} does not match {n_signals} signals")
    try:
        values = np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=np.float64)
    except ValueError as exc:
        raise DatasetParseError(f"{path}: {exc}") from exc
    if values.ndim != 2 or values.shape[1] != n_signals:
        raise DatasetParseError(f"{path}: ragged rows")
    return values


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise DatasetParseError(f"{where}: missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise DatasetParseError(f"{where}.{key}: wrong type {type(value).__name__}")
    return value


def load_dataset(path) -> Dataset:
    """Load and validate a bundle (directory or its ``dataset.json``)."""
    path = Path(path)
    manifest_path = path / MANIFEST if path.is_dir() else path
    root = manifest_path.parent
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read dataset manifest {manifest_path}: {exc.strerror or exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(f"{manifest_path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise DatasetParseError(f"{manifest_path}: top level must be an object")

    name = _require(raw, "name", str, "manifest")
    dt = _require(raw, "dt", (int, float), "manifest")
    n_signals = _require(raw, "signals", int, "manifest")
    entries = _require(raw, "tests", list, "manifest")
    kills = _require(raw, "kill_matrix", list, "manifest")
    provenance = raw.get("provenance", {})

    tests = []
    for i, entry in enumerate(entries):
        where = f"tests[{i}]"
        if not isinstance(entry, dict):
            raise DatasetParseError(f"{where}: must be an object")
        tid = _require(entry, "id", str, where)
        etime = _require(entry, "execution_time", (int, float), where)
        trace_file = _require(entry, "trace_file", str, where)
        tests.append(SimulationCase(tid, float(etime), _read_trace(root / trace_file, n_signals)))

    width = len(tests)
    for i, row in enumerate(kills):
        if not isinstance(row, list):
            raise DatasetParseError(f"kill_matrix[{i}]: mutant row must be a list")
        if len(row) != width:
            raise DatasetValidationError(f"kill_matrix[{i}]: mutant row has {len(row)} entries, expected {width}")
    kill_matrix = np.array(kills, dtype=int).reshape(len(kills), width)
    return Dataset(name, float(dt), tests, kill_matrix, provenance).validate()


# --- synthetic generator ---------------------------------------------------


@dataclass(frozen=True)
class SynthConfig:
    n_tests: int = 150
    n_signals: int = 7
    n_mutants: int = 6
    trace_len: int = 101
    dt: float = 0.05
    pulse_rate: float = 0.3
    oscillation_rate: float = 0.3
    blowup_rate: float = 0.3
    kill_prob: float = 0.2
    noise: float = 0.01
    seed: int = 0
    name: str = "synthetic"

    def validate(self) -> "SynthConfig":
        if self.n_tests < MIN_TESTS:
            raise ValueError(f"n_tests must exceed 5, got {self.n_tests}")
        if self.n_signals < 1 or self.n_mutants < 1:
            raise ValueError("n_signals and n_mutants must be positive")
        if self.trace_len < 8:
            raise ValueError("trace_len must be at least 8")
        if not self.dt > 0 or not self.noise >= 0:
            raise ValueError("dt must be positive and noise non-negative")
        for label in ("pulse_rate", "oscillation_rate", "blowup_rate", "kill_prob"):
            value = getattr(self, label)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{label} must be in [0, 1], got {value}")
        return self


def _baseline(rng, length: int, dt: float, noise: float) -> np.ndarray:
    t = np.arange(length) * dt
    level = rng.uniform(-1.0, 1.0)
    tau = rng.uniform(0.1, 1.0)
    walk = np.cumsum(rng.normal(0.0, noise, length))
    return level * (1.0 - np.exp(-t / tau)) + walk


def inject_pulse(sig: np.ndarray, rng, noise: float) -> None:
    """Short spike of one or two samples, at least 10x the noise level."""
    pos = int(rng.integers(3, sig.size - 4))
    width = int(rng.integers(1, 3))
    amp = max(10.0 * noise, rng.uniform(0.5, 3.0)) * rng.choice([-1.0, 1.0])
    sig[pos : pos + width] += amp


def inject_oscillation(sig: np.ndarray, rng) -> None:
    length = int(rng.integers(min(10, sig.size // 2), min(30, sig.size - 2) + 1))
    start = int(rng.integers(0, sig.size - length + 1))
    amp = rng.uniform(0.2, 1.0)
    sig[start : start + length] += amp * (-1.0) ** np.arange(length)


def inject_blowup(sig: np.ndarray, rng, dt: float) -> None:
    start = int(rng.integers(sig.size // 2, sig.size - 3))
    steps = np.arange(sig.size - start) * dt
    final = rng.uniform(2.0, 10.0)
    rate = rng.uniform(1.0, 4.0) / max(steps[-1], dt)
    sig[start:] += rng.choice([-1.0, 1.0]) * final * np.expm1(rate * steps) / np.expm1(rate * steps[-1])


def synth_dataset(c: SynthConfig) -> Dataset:
    """Seeded synthetic suite with planted anti-patterns and a kill matrix.

    Each mutant is killed by a random subset of the tests that carry at
    least one injected anti-pattern; the subset is never empty and never
    the whole suite. With no carriers the kill matrix is all zero and a
    warning is issued.
    """
    c.validate()
    rng = np.random.default_rng(c.seed)
    tests = []
    carrier = np.zeros(c.n_tests, dtype=bool)
    width = len(str(c.n_tests - 1))
    for k in range(c.n_tests):
        out = np.column_stack([_baseline(rng, c.trace_len, c.dt, c.noise) for _ in range(c.n_signals)])
        if rng.random() < c.pulse_rate:
            inject_pulse(out[:, rng.integers(c.n_signals)], rng, c.noise)
            carrier[k] = True
        if rng.random() < c.oscillation_rate:
            inject_oscillation(out[:, rng.integers(c.n_signals)], rng)
            carrier[k] = True
        if rng.random() < c.blowup_rate:
            inject_blowup(out[:, rng.integers(c.n_signals)], rng, c.dt)
            carrier[k] = True
        etime = float(np.exp(rng.uniform(np.log(0.5), np.log(10.0))))
        tests.append(SimulationCase(f"t{k:0{width}d}", etime, out))

    kills = np.zeros((c.n_mutants, c.n_tests), dtype=int)
    idx = np.flatnonzero(carrier)
    if idx.size == 0:
        warnings.warn("synthetic dataset has no anti-pattern carriers: no test kills any mutant", stacklevel=2)
    else:
        for mu in range(c.n_mutants):
            hit = idx[rng.random(idx.size) < c.kill_prob]
            if hit.size == 0:
                hit = rng.choice(idx, size=1)
            if hit.size == c.n_tests:
                hit = np.delete(hit, rng.integers(hit.size))
            kills[mu, hit] = 1

    provenance = {"generator": "suitemin.synth", "config": {**c.__dict__}}
    return Dataset(c.name, c.dt, tests, kills, provenance).validate()
