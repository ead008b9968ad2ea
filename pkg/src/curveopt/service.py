"""HTTP front end exposing the curve, solver, and benchmark operations.

The route bodies delegate to plain handler functions (``handle_*``) that
raise :class:`~curveopt.solver.ConfigError` on bad parameters; the CLI
calls the same handlers in-process, so both entry points share one code
path and one wire format.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .bench import run_bench, run_single
from .curve import CurveSpec, cell_of, map_unit
from .solver import ConfigError
from .schemas import (
    BenchRequest,
    BenchResponse,
    CurveRequest,
    CurveResponse,
    RunReportModel,
    SolveRequest,
)


def handle_curve(req: CurveRequest) -> CurveResponse:
    """Map a reduced coordinate to its cell index and space coordinates."""
    spec = CurveSpec.unit(req.dim, req.depth)
    cell = cell_of(req.x, spec)
    point = map_unit(cell, spec)
    return CurveResponse(
        dim=req.dim, depth=req.depth, x=req.x, cell=cell, point=[float(v) for v in point]
    )


def handle_solve(req: SolveRequest) -> RunReportModel:
    """Run one seeded minimization and score it against the grid oracle."""
    cfg = req.bench_config()
    report = run_single(cfg, req.seed, cfg.methods[0], req.p)
    return RunReportModel.from_report(report)


def handle_bench(req: BenchRequest) -> BenchResponse:
    """Run a full benchmark sweep and return the aggregated report."""
    return BenchResponse.from_report(run_bench(req.bench_config()))


app = FastAPI(title="curveopt", version=__version__)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/curve", response_model=CurveResponse)
def curve(req: CurveRequest) -> CurveResponse:
    try:
        return handle_curve(req)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/solve", response_model=RunReportModel)
def solve_route(req: SolveRequest) -> RunReportModel:
    try:
        return handle_solve(req)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/bench", response_model=BenchResponse)
def bench_route(req: BenchRequest) -> BenchResponse:
    try:
        return handle_bench(req)
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
