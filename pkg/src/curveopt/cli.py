"""Command-line client for the curve, solve, and bench operations.

The subcommands are thin wrappers over the same in-process handlers the
HTTP service uses; ``serve`` starts the HTTP service itself.  Exit code
0 means the command completed; 2 means the parameters were rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import ValidationError

from .bench import emit_report, run_bench
from .schemas import BenchRequest, CurveRequest, SolveRequest
from .service import handle_curve, handle_solve
from .solver import ConfigError


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _add_method_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--r", type=float, default=2.9, help="reliability multiplier (> 1)")
    sub.add_argument("--eps", type=float, default=0.001, help="stopping accuracy on interval length")
    sub.add_argument("--xi", type=float, default=1e-6, help="positive floor under the interval estimates")
    sub.add_argument("--depth", type=int, default=12, help="curve subdivision depth")
    sub.add_argument("--delay-ms", type=float, default=0.0, help="artificial per-evaluation delay in milliseconds")
    sub.add_argument("--points", type=_floats, default=[0.2, 0.4, 0.6, 0.9], metavar="X1,X2,...",
                     help="internal starting coordinates in (0,1)")
    sub.add_argument("--form", default="proof_form", choices=["proof_form", "paper_step3"],
                     help="characteristic form")
    sub.add_argument("--workers", type=int, default=None, help="evaluation threads per run (default: auto)")
    sub.add_argument("--resolution", type=int, default=1000, help="oracle grid resolution per axis")
    sub.add_argument("--tolerance", type=float, default=0.01, help="success tolerance against the oracle")
    sub.add_argument("--cache-dir", default=None, help="directory for oracle fixture caching")
    sub.add_argument("--max-trials", type=int, default=1_000_000, help="abort budget per run")


def _settings_kwargs(args: argparse.Namespace) -> dict:
    return {
        "r": args.r,
        "xi": args.xi,
        "epsilon": args.eps,
        "depth": args.depth,
        "initial_internal_points": args.points,
        "characteristic_form": args.form,
        "delay_ms": args.delay_ms,
        "workers": args.workers,
        "oracle_resolution": args.resolution,
        "success_tolerance": args.tolerance,
        "cache_dir": args.cache_dir,
        "max_trials": args.max_trials,
    }


def cmd_curve(args: argparse.Namespace) -> int:
    resp = handle_curve(CurveRequest(dim=args.dim, depth=args.depth, x=args.x))
    print(resp.cell)
    for v in resp.point:
        print(f"{v:.17g}")
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    req = SolveRequest(seed=args.seed, method=args.method, p=args.p, **_settings_kwargs(args))
    report = handle_solve(req)
    print(json.dumps(report.model_dump(), indent=2))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    req = BenchRequest(seeds=args.seeds, methods=args.methods.split(","), p=args.p,
                       **_settings_kwargs(args))
    progress = None
    if args.progress:
        def progress(seed, done, total):
            print(f"[{done}/{total}] seed {seed}", file=sys.stderr)
    rep = run_bench(req.bench_config(), progress=progress)
    text = emit_report(rep, args.format)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("curveopt.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveopt",
                                     description="Space-filling-curve global minimization toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    curve = commands.add_parser("curve", help="map a reduced coordinate to its space point")
    curve.add_argument("--dim", type=int, default=2, help="space dimension")
    curve.add_argument("--depth", type=int, default=12, help="curve subdivision depth")
    curve.add_argument("--x", type=float, required=True, help="reduced coordinate in [0,1]")
    curve.set_defaults(func=cmd_curve)

    solve = commands.add_parser("solve", help="run one seeded minimization")
    solve.add_argument("--seed", type=int, required=True, help="test-function seed")
    solve.add_argument("--method", default="plt", help="ia | pia | ialt | plt")
    solve.add_argument("--p", type=int, default=1, help="trials per iteration")
    _add_method_options(solve)
    solve.set_defaults(func=cmd_solve)

    bench = commands.add_parser("bench", help="sweep methods over seeded functions")
    bench.add_argument("--seeds", default="1..100", help='seed list, e.g. "1..100" or "3,7,9"')
    bench.add_argument("--methods", default="ia,pia,ialt,plt", help="comma-separated method names")
    bench.add_argument("--p", type=_ints, default=[1, 2, 3, 4], metavar="P1,P2,...",
                       help="batch widths for the parallel methods")
    _add_method_options(bench)
    bench.add_argument("--out", default=None, help="write the report here instead of stdout")
    bench.add_argument("--format", default="table", choices=["csv", "json", "table"],
                       help="report rendering")
    bench.add_argument("--progress", action="store_true", help="print per-seed progress to stderr")
    bench.set_defaults(func=cmd_bench)

    serve = commands.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
