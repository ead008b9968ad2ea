"""Benchmark harness comparing the four variants over seeded test functions.

``run_bench`` drives every requested (method, batch width) cell over a
common set of seeded functions, scores each run against a grid-search
oracle, and aggregates success rates, trial counts, and wall times into a
:class:`BenchReport`.  ``emit_report`` renders a report as CSV, JSON, or a
plain text table; JSON output round-trips through :func:`parse_report`.

Trial counts include every objective evaluation a run consumes, the
initial points as well as the iterated ones.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .curve import CurveSpec
from .executor import BatchExecutor
from .objective import (
    Objective,
    OracleResult,
    generate_grishagin,
    grid_oracle,
    load_oracle,
    save_oracle,
)
from .solver import (
    CharacteristicForm,
    ConfigError,
    MethodConfig,
    RunReport,
    SolverError,
    TrialBudgetExceeded,
    Variant,
    solve,
)

TRIALS_NOTE = "trial counts include the initial evaluations"

#: Families used for baseline speedups: each parallel method is compared
#: against its sequential counterpart run at p = 1.
SEQUENTIAL_BASELINE = {Variant.PLT: Variant.IALT, Variant.PIA: Variant.IA}


@dataclass(frozen=True)
class BenchConfig:
    """Full experiment description; defaults mirror the reference protocol."""

    seeds: tuple[int, ...] = tuple(range(1, 101))
    methods: tuple[Variant, ...] = (Variant.IA, Variant.PIA, Variant.IALT, Variant.PLT)
    p_values: tuple[int, ...] = (1, 2, 3, 4)
    r: float = 2.9
    xi: float = 1e-6
    epsilon: float = 0.001
    depth: int = 12
    initial_internal_points: tuple[float, ...] = (0.2, 0.4, 0.6, 0.9)
    oracle_resolution: int = 1000
    success_tolerance: float = 0.01
    artificial_delay: float = 0.0
    characteristic_form: CharacteristicForm = CharacteristicForm.PROOF_FORM
    workers: int | None = None
    cache_dir: Path | None = None
    max_trials: int = 1_000_000

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "methods", tuple(Variant(str(m.value if isinstance(m, Variant) else m).upper()) for m in self.methods))
        object.__setattr__(self, "p_values", tuple(int(p) for p in self.p_values))
        if self.cache_dir is not None:
            object.__setattr__(self, "cache_dir", Path(self.cache_dir))
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds must be distinct")
        if not self.methods:
            raise ConfigError("at least one method is required")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("methods must be distinct")
        if not self.p_values:
            raise ConfigError("at least one batch width is required")
        if any(p < 1 for p in self.p_values) or len(set(self.p_values)) != len(self.p_values):
            raise ConfigError("batch widths must be distinct integers >= 1")
        if not self.success_tolerance > 0:
            raise ConfigError("success_tolerance must be > 0")
        if self.oracle_resolution < 2:
            raise ConfigError("oracle_resolution must be >= 2")
        if self.artificial_delay < 0:
            raise ConfigError("artificial_delay must be nonnegative")
        if self.workers is not None and self.workers < 1:
            raise ConfigError("workers must be >= 1 when given")

    def cells(self) -> list[tuple[Variant, int]]:
        """Ordered (method, p) grid: sequential methods run only at p = 1."""
        out: list[tuple[Variant, int]] = []
        for m in self.methods:
            widths = sorted(self.p_values) if m.parallel_capable else [1]
            out.extend((m, p) for p in widths)
        return out

    def method_config(self, variant: Variant, p: int) -> MethodConfig:
        return MethodConfig(
            variant=variant,
            r=self.r,
            xi=self.xi,
            epsilon=self.epsilon,
            p=p,
            initial_internal_points=self.initial_internal_points,
            characteristic_form=self.characteristic_form,
            max_trials=self.max_trials,
        )

    def workers_for(self, p: int) -> int:
        """Worker threads per run: match p only when evaluations cost time."""
        if self.workers is not None:
            return self.workers
        return p if self.artificial_delay > 0 else 1


@dataclass(frozen=True)
class BenchRow:
    """Aggregate results of one (method, p) cell over the whole seed set."""

    method: str
    p: int
    seeds: int
    success_percent: float
    avg_trials: float
    total_trials: int
    avg_time_millis: float
    speedup_trials: float | None
    speedup_time: float | None

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "p": self.p,
            "seeds": self.seeds,
            "success_percent": self.success_percent,
            "avg_trials": self.avg_trials,
            "total_trials": self.total_trials,
            "avg_time_millis": self.avg_time_millis,
            "speedup_trials": self.speedup_trials,
            "speedup_time": self.speedup_time,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BenchRow":
        return cls(**doc)


@dataclass(frozen=True)
class CrossFamilyRow:
    """PIA-over-PLT ratios at a common batch width p."""

    p: int
    trials_ratio: float
    time_ratio: float

    def to_json(self) -> dict:
        return {"p": self.p, "trials_ratio": self.trials_ratio, "time_ratio": self.time_ratio}

    @classmethod
    def from_json(cls, doc: dict) -> "CrossFamilyRow":
        return cls(**doc)


@dataclass(frozen=True)
class BenchReport:
    """Aggregated benchmark outcome; serializes losslessly to JSON."""

    seeds: tuple[int, ...]
    rows: tuple[BenchRow, ...]
    cross_family: tuple[CrossFamilyRow, ...] = ()
    note: str = TRIALS_NOTE

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cross_family", tuple(self.cross_family))

    def row(self, method: Variant | str, p: int) -> BenchRow:
        key = method.value if isinstance(method, Variant) else str(method).upper()
        for r in self.rows:
            if r.method == key and r.p == p:
                return r
        raise KeyError(f"no cell ({key}, p={p}) in report")

    def to_json(self) -> dict:
        return {
            "seeds": list(self.seeds),
            "note": self.note,
            "rows": [r.to_json() for r in self.rows],
            "cross_family": [c.to_json() for c in self.cross_family],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BenchReport":
        return cls(
            seeds=tuple(doc["seeds"]),
            rows=tuple(BenchRow.from_json(r) for r in doc["rows"]),
            cross_family=tuple(CrossFamilyRow.from_json(c) for c in doc["cross_family"]),
            note=doc.get("note", TRIALS_NOTE),
        )


def is_success(report: RunReport, oracle: OracleResult, tolerance: float) -> bool:
    """A run succeeds if it locates the oracle minimizer or matches its value.

    Location means some trial point lies within ``tolerance`` of the oracle
    minimizer coordinate-wise; value means the best trial is within
    ``tolerance`` of the oracle minimum.
    """
    if report.best_value <= oracle.min_value + tolerance:
        return True
    if report.final_state is None:
        return False
    target = np.asarray(oracle.minimizer, dtype=float)
    pts = np.array([t.y for t in report.final_state.trials])
    return bool(np.max(np.abs(pts - target), axis=1).min() <= tolerance)


def oracle_for_seed(fn, spec: CurveSpec, cfg: BenchConfig) -> OracleResult:
    """Grid oracle for one function, read through the on-disk cache if set."""
    if cfg.cache_dir is None:
        return grid_oracle(Objective(fn, spec), cfg.oracle_resolution)
    cfg.cache_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.cache_dir / f"oracle-seed{fn.seed}-res{cfg.oracle_resolution}.json"
    if path.exists():
        return load_oracle(path)
    result = grid_oracle(Objective(fn, spec), cfg.oracle_resolution)
    save_oracle(result, path, seed=fn.seed)
    return result


@dataclass
class _CellAccumulator:
    successes: int = 0
    total_trials: int = 0
    total_millis: float = 0.0
    runs: int = 0

    def add(self, trials: int, millis: float, success: bool) -> None:
        self.runs += 1
        self.total_trials += trials
        self.total_millis += millis
        self.successes += success


def run_single(cfg: BenchConfig, seed: int, variant: Variant, p: int, oracle: OracleResult | None = None) -> RunReport:
    """One scored run of ``variant`` at width ``p`` on the seeded function."""
    fn = generate_grishagin(seed)
    spec = CurveSpec.unit(2, cfg.depth)
    if oracle is None:
        oracle = oracle_for_seed(fn, spec, cfg)
    obj = Objective(fn, spec, artificial_delay=cfg.artificial_delay, name=f"grishagin-{seed}")
    mcfg = cfg.method_config(variant, p)
    mcfg.validate_against(spec)
    with BatchExecutor(workers=cfg.workers_for(p)) as ex:
        report = solve(obj, mcfg, executor=ex)
    report.seed = seed
    report.success = is_success(report, oracle, cfg.success_tolerance)
    return report


def run_bench(cfg: BenchConfig, progress=None) -> BenchReport:
    """Run every (method, p) cell over every seed and aggregate the results.

    A run that exhausts its trial budget or aborts inside the solver is
    recorded as a failure for its cell (with the trials it consumed) and
    the sweep continues.  ``progress``, if given, is called with
    ``(seed, done, total)`` after each seed finishes.
    """
    cells = cfg.cells()
    acc = {cell: _CellAccumulator() for cell in cells}
    spec = CurveSpec.unit(2, cfg.depth)
    for done, seed in enumerate(cfg.seeds, start=1):
        fn = generate_grishagin(seed)
        oracle = oracle_for_seed(fn, spec, cfg)
        for variant, p in cells:
            obj = Objective(fn, spec, artificial_delay=cfg.artificial_delay, name=f"grishagin-{seed}")
            mcfg = cfg.method_config(variant, p)
            start = time.perf_counter()
            try:
                with BatchExecutor(workers=cfg.workers_for(p)) as ex:
                    report = solve(obj, mcfg, executor=ex)
                acc[(variant, p)].add(
                    report.trials, report.wall_millis, is_success(report, oracle, cfg.success_tolerance)
                )
            except TrialBudgetExceeded as exc:
                millis = (time.perf_counter() - start) * 1e3
                acc[(variant, p)].add(exc.trials_used, millis, False)
            except SolverError:
                millis = (time.perf_counter() - start) * 1e3
                acc[(variant, p)].add(obj.eval_count, millis, False)
        if progress is not None:
            progress(seed, done, len(cfg.seeds))
    return _build_report(cfg, acc)


def _build_report(cfg: BenchConfig, acc: dict[tuple[Variant, int], _CellAccumulator]) -> BenchReport:
    n = len(cfg.seeds)
    averages = {cell: a.total_trials / n for cell, a in acc.items()}
    times = {cell: a.total_millis / n for cell, a in acc.items()}

    def baseline(variant: Variant) -> tuple[Variant, int] | None:
        counterpart = SEQUENTIAL_BASELINE.get(variant)
        if counterpart is not None and (counterpart, 1) in acc:
            return (counterpart, 1)
        if (variant, 1) in acc:
            return (variant, 1)
        return None

    rows = []
    for (variant, p), a in acc.items():
        speed_trials = speed_time = None
        base = baseline(variant)
        if variant.parallel_capable and base is not None and base != (variant, p):
            if averages[(variant, p)] > 0:
                speed_trials = averages[base] / averages[(variant, p)]
            if times[(variant, p)] > 0:
                speed_time = times[base] / times[(variant, p)]
        rows.append(
            BenchRow(
                method=variant.value,
                p=p,
                seeds=n,
                success_percent=100.0 * a.successes / n,
                avg_trials=averages[(variant, p)],
                total_trials=a.total_trials,
                avg_time_millis=times[(variant, p)],
                speedup_trials=speed_trials,
                speedup_time=speed_time,
            )
        )

    cross = []
    for p in sorted(cfg.p_values):
        pia, plt = (Variant.PIA, p), (Variant.PLT, p)
        if pia in acc and plt in acc and averages[plt] > 0 and times[plt] > 0:
            cross.append(
                CrossFamilyRow(
                    p=p,
                    trials_ratio=averages[pia] / averages[plt],
                    time_ratio=times[pia] / times[plt],
                )
            )
    return BenchReport(seeds=cfg.seeds, rows=tuple(rows), cross_family=tuple(cross))


def emit_report(rep: BenchReport, format: str = "table") -> str:
    """Render a report as ``csv``, ``json``, or a plain text ``table``."""
    if format == "json":
        return json.dumps(rep.to_json(), indent=2)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["method", "p", "seeds", "success_percent", "avg_trials",
             "total_trials", "avg_time_millis", "speedup_trials", "speedup_time"]
        )
        for r in rep.rows:
            writer.writerow(
                [r.method, r.p, r.seeds, f"{r.success_percent:.2f}", f"{r.avg_trials:.2f}",
                 r.total_trials,
                 f"{r.avg_time_millis:.3f}",
                 "" if r.speedup_trials is None else f"{r.speedup_trials:.4f}",
                 "" if r.speedup_time is None else f"{r.speedup_time:.4f}"]
            )
        return buf.getvalue()
    if format == "table":
        return _text_table(rep)
    raise ConfigError(f"unknown report format {format!r}; expected csv, json, or table")


def parse_report(text: str) -> BenchReport:
    """Inverse of ``emit_report(rep, \"json\")``."""
    return BenchReport.from_json(json.loads(text))


def _text_table(rep: BenchReport) -> str:
    headers = ["Method", "Processors", "%", "Trials", "Time (ms)",
               "Speed up (trials)", "Speed up (time)"]
    body = []
    for r in rep.rows:
        body.append([
            r.method,
            str(r.p),
            f"{r.success_percent:.0f}",
            f"{r.avg_trials:.2f}",
            f"{r.avg_time_millis:.2f}",
            "-" if r.speedup_trials is None else f"{r.speedup_trials:.2f}",
            "-" if r.speedup_time is None else f"{r.speedup_time:.2f}",
        ])
    widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
              for i, h in enumerate(headers)]
    lines = [f"# seeds = {len(rep.seeds)}; {rep.note}"]
    lines.append("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)))
    if rep.cross_family:
        lines.append("")
        lines.append("PIA vs PLT (same p)")
        lines.append("  ".join(["p".ljust(4), "trials ratio".ljust(14), "time ratio"]))
        for c in rep.cross_family:
            lines.append("  ".join([str(c.p).ljust(4), f"{c.trials_ratio:.2f}".ljust(14), f"{c.time_ratio:.2f}"]))
    return "\n".join(lines) + "\n"
