"""Barrier-synchronized batch evaluation of reduced-objective points.

Each iteration of a parallel run hands the executor a batch of ``p``
distinct coordinates; the executor evaluates them with up to ``workers``
threads, waits for the whole batch (the barrier), and returns the trials
normalized to ascending coordinate order.  Because the objective is pure
and the order is normalized, solver trajectories are bit-identical for
any worker count; only the measured wall time changes.

``p`` is an algorithmic parameter (how many points the method places per
iteration) while ``workers`` is a resource parameter; they are
deliberately independent so a p=4 run can be replayed on one thread.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .objective import Objective, Trial


class EvaluationError(RuntimeError):
    """A batch failed; ``point`` identifies the offending coordinate."""

    def __init__(self, point: float, cause: BaseException):
        super().__init__(f"evaluation failed at x = {point}: {cause}")
        self.point = point


@dataclass(frozen=True)
class BatchRequest:
    points: tuple[float, ...]
    iteration: int

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(float(x) for x in self.points))
        if not self.points:
            raise ValueError("a batch must contain at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError("batch points must be pairwise distinct")


@dataclass(frozen=True)
class BatchResult:
    trials: tuple[Trial, ...]  # ascending x
    wall_duration: float  # seconds for the whole batch


class BatchExecutor:
    """Thread-backed evaluator with one synchronization point per batch."""

    def __init__(self, workers: int = 1):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        self.workers = workers
        self._pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def evaluate_batch(self, req: BatchRequest, obj: Objective) -> BatchResult:
        start = time.perf_counter()
        if self._pool is None or len(req.points) == 1:
            trials = []
            for x in req.points:
                try:
                    trials.append(obj.reduced_eval(x))
                except Exception as exc:
                    raise EvaluationError(x, exc) from exc
        else:
            futures = [(x, self._pool.submit(obj.reduced_eval, x)) for x in req.points]
            trials = []
            for x, fut in futures:
                try:
                    trials.append(fut.result())
                except Exception as exc:
                    raise EvaluationError(x, exc) from exc
        trials.sort(key=lambda t: t.x)
        return BatchResult(tuple(trials), time.perf_counter() - start)

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)

    def __enter__(self) -> "BatchExecutor":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
