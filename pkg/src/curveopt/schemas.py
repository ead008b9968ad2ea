"""Request/response models for the HTTP service and the CLI client.

These are plain pydantic models mirroring the dataclasses in
:mod:`curveopt.bench` and :mod:`curveopt.solver`; conversion helpers keep
the wire format in one place so the CLI and the FastAPI routes cannot
drift apart.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import BaseModel, Field, field_validator

from .bench import BenchConfig, BenchReport
from .solver import CharacteristicForm, ConfigError, RunReport, Variant

METHOD_NAMES = [v.value for v in Variant]


def parse_seed_spec(text: str) -> tuple[int, ...]:
    """Parse a seed list such as ``"7"``, ``"1,2,9"``, or ``"1..100"``."""
    seeds: list[int] = []
    for token in str(text).split(","):
        token = token.strip()
        if not token:
            continue
        if ".." in token:
            lo_s, _, hi_s = token.partition("..")
            try:
                lo, hi = int(lo_s), int(hi_s)
            except ValueError as exc:
                raise ConfigError(f"bad seed range {token!r}") from exc
            if hi < lo:
                raise ConfigError(f"empty seed range {token!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            try:
                seeds.append(int(token))
            except ValueError as exc:
                raise ConfigError(f"bad seed {token!r}") from exc
    if not seeds:
        raise ConfigError(f"no seeds in {text!r}")
    return tuple(seeds)


def _variant(name: str) -> Variant:
    try:
        return Variant(str(name).upper())
    except ValueError as exc:
        raise ConfigError(f"unknown method {name!r}; expected one of {METHOD_NAMES}") from exc


class CurveRequest(BaseModel):
    """Locate the curve point for a reduced coordinate."""

    dim: int = Field(default=2, ge=1)
    depth: int = Field(default=12, ge=1)
    x: float = Field(ge=0.0, le=1.0)


class CurveResponse(BaseModel):
    dim: int
    depth: int
    x: float
    cell: int
    point: list[float]


class SolveSettings(BaseModel):
    """Method parameters shared by single runs and benchmark sweeps."""

    r: float = 2.9
    xi: float = 1e-6
    epsilon: float = 0.001
    depth: int = Field(default=12, ge=1)
    initial_internal_points: list[float] = [0.2, 0.4, 0.6, 0.9]
    characteristic_form: CharacteristicForm = CharacteristicForm.PROOF_FORM
    delay_ms: float = Field(default=0.0, ge=0.0)
    workers: int | None = Field(default=None, ge=1)
    oracle_resolution: int = Field(default=1000, ge=2)
    success_tolerance: float = Field(default=0.01, gt=0.0)
    cache_dir: str | None = None
    max_trials: int = Field(default=1_000_000, ge=8)


class SolveRequest(SolveSettings):
    """One seeded run of a single method."""

    seed: int
    method: str = "PLT"
    p: int = Field(default=1, ge=1)

    @field_validator("method")
    @classmethod
    def _check_method(cls, v: str) -> str:
        return _variant(v).value

    def bench_config(self) -> BenchConfig:
        return BenchConfig(
            seeds=(self.seed,),
            methods=(_variant(self.method),),
            p_values=(self.p,),
            r=self.r,
            xi=self.xi,
            epsilon=self.epsilon,
            depth=self.depth,
            initial_internal_points=tuple(self.initial_internal_points),
            oracle_resolution=self.oracle_resolution,
            success_tolerance=self.success_tolerance,
            artificial_delay=self.delay_ms / 1e3,
            characteristic_form=self.characteristic_form,
            workers=self.workers,
            cache_dir=Path(self.cache_dir) if self.cache_dir else None,
            max_trials=self.max_trials,
        )


class RunReportModel(BaseModel):
    """Wire form of a single run's outcome."""

    variant: str
    seed: int | None
    r: float
    xi: float
    epsilon: float
    p: int
    depth: int
    trials: int
    iterations: int
    best_value: float
    best_point: list[float]
    success: bool | None
    wall_millis: float
    escapes_clamped: int

    @classmethod
    def from_report(cls, report: RunReport) -> "RunReportModel":
        return cls(**report.to_json())


class BenchRequest(SolveSettings):
    """A full sweep over seeds, methods, and batch widths."""

    seeds: str = "1..100"
    methods: list[str] = ["IA", "PIA", "IALT", "PLT"]
    p: list[int] = [1, 2, 3, 4]

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, v: list[str]) -> list[str]:
        return [_variant(m).value for m in v]

    def bench_config(self) -> BenchConfig:
        return BenchConfig(
            seeds=parse_seed_spec(self.seeds),
            methods=tuple(_variant(m) for m in self.methods),
            p_values=tuple(self.p),
            r=self.r,
            xi=self.xi,
            epsilon=self.epsilon,
            depth=self.depth,
            initial_internal_points=tuple(self.initial_internal_points),
            oracle_resolution=self.oracle_resolution,
            success_tolerance=self.success_tolerance,
            artificial_delay=self.delay_ms / 1e3,
            characteristic_form=self.characteristic_form,
            workers=self.workers,
            cache_dir=Path(self.cache_dir) if self.cache_dir else None,
            max_trials=self.max_trials,
        )


class BenchRowModel(BaseModel):
    method: str
    p: int
    seeds: int
    success_percent: float
    avg_trials: float
    total_trials: int
    avg_time_millis: float
    speedup_trials: float | None
    speedup_time: float | None


class CrossFamilyModel(BaseModel):
    p: int
    trials_ratio: float
    time_ratio: float


class BenchResponse(BaseModel):
    seeds: list[int]
    note: str
    rows: list[BenchRowModel]
    cross_family: list[CrossFamilyModel]

    @classmethod
    def from_report(cls, report: BenchReport) -> "BenchResponse":
        return cls(**report.to_json())

    def to_report(self) -> BenchReport:
        return BenchReport.from_json(self.model_dump())
