"""Objective functions: evaluation counting, curve reduction, test classes.

An :class:`Objective` wraps a plain callable ``phi(y) -> float`` over the
search box of a :class:`~curveopt.curve.CurveSpec` and adds the bookkeeping
the solver relies on: a thread-safe evaluation counter, an optional
artificial per-evaluation delay (to make wall-clock speedups measurable on
cheap analytic functions), and the reduced one-dimensional form
``f(x) = phi(y(x))``.

The module also ships the classical two-dimensional multiextremal test
class of Grishagin (trigonometric double sums with random coefficients in
[-1, 1]) and a brute-force grid oracle used as ground truth when scoring
benchmark runs.
"""

from __future__ import annotations

import itertools
import json
import math
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .curve import CurveSpec, map_to_domain

_IDX = np.arange(1, 8)  # harmonic indices i, j = 1..7


@dataclass(frozen=True)
class Trial:
    """One completed evaluation: curve parameter, its image, and the value."""

    x: float
    y: np.ndarray
    z: float

    def __eq__(self, other):
        if not isinstance(other, Trial):
            return NotImplemented
        return self.x == other.x and self.z == other.z and np.array_equal(self.y, other.y)


@dataclass(frozen=True, eq=False)
class GrishaginFunction:
    """One member of the 7x7 trigonometric test class on [0,1]^2.

    The value is the *negated* amplitude of two trigonometric double
    sums, ``-sqrt(S1^2 + S2^2)``, so every function in the class is
    non-positive and its global minimum sits at the point of largest
    combined amplitude.  Coefficients are drawn uniformly from [-1, 1]
    by numpy's default PCG64 generator keyed on ``seed``; the draw
    order is pinned as four row-major 7x7 blocks a, b, c, d, so the
    same seed always regenerates the same function.
    """

    seed: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (7, 7):
                raise ValueError(f"coefficient block {name} must be 7x7")
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def value(self, x1: float, x2: float) -> float:
        """Evaluate at (x1, x2); both coordinates must lie in [0, 1]."""
        if not (0.0 <= x1 <= 1.0 and 0.0 <= x2 <= 1.0):
            raise ValueError(f"point ({x1}, {x2}) outside [0,1]^2")
        s1 = np.sin(np.pi * _IDX * x1)
        c1 = np.cos(np.pi * _IDX * x1)
        s2 = np.sin(np.pi * _IDX * x2)
        c2 = np.cos(np.pi * _IDX * x2)
        part1 = s1 @ self.a @ s2 + c1 @ self.b @ c2
        part2 = s1 @ self.c @ s2 - c1 @ self.d @ c2
        return -math.hypot(part1, part2)

    def __call__(self, y: Sequence[float]) -> float:
        return self.value(float(y[0]), float(y[1]))

    def grid_values(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor grid ``axes[0] x axes[1]``, shape (n1, n2)."""
        x1, x2 = axes
        s1 = np.sin(np.pi * np.outer(_IDX, x1))
        c1 = np.cos(np.pi * np.outer(_IDX, x1))
        s2 = np.sin(np.pi * np.outer(_IDX, x2))
        c2 = np.cos(np.pi * np.outer(_IDX, x2))
        part1 = s1.T @ self.a @ s2 + c1.T @ self.b @ c2
        part2 = s1.T @ self.c @ s2 - c1.T @ self.d @ c2
        return -np.hypot(part1, part2)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "c": self.c.tolist(),
            "d": self.d.tolist(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GrishaginFunction":
        return cls(doc["seed"], doc["a"], doc["b"], doc["c"], doc["d"])


def generate_grishagin(seed: int) -> GrishaginFunction:
    """Draw the four 7x7 coefficient blocks for ``seed`` (PCG64, order a,b,c,d)."""
    rng = np.random.default_rng(seed)
    blocks = [rng.uniform(-1.0, 1.0, size=(7, 7)) for _ in range(4)]
    return GrishaginFunction(seed, *blocks)


class Objective:
    """A counted, optionally delayed objective over a curve-equipped box."""

    def __init__(
        self,
        func: Callable[[np.ndarray], float],
        spec: CurveSpec,
        artificial_delay: float = 0.0,
        name: str = "",
    ):
        if artificial_delay < 0:
            raise ValueError("artificial_delay must be nonnegative")
        self.func = func
        self.spec = spec
        self.artificial_delay = artificial_delay
        self.name = name
        self._count = 0
        self._lock = threading.Lock()

    @property
    def eval_count(self) -> int:
        return self._count

    def peek(self, y: np.ndarray) -> float:
        """Evaluate without counting or delay (oracle/diagnostic use only)."""
        return float(self.func(y))

    def evaluate(self, y: np.ndarray) -> float:
        """Counted evaluation of the underlying function at ``y``."""
        z = float(self.func(y))
        if self.artificial_delay > 0:
            time.sleep(self.artificial_delay)
        with self._lock:
            self._count += 1
        return z

    def reduced_eval(self, x: float) -> Trial:
        """Counted evaluation of the reduced form ``f(x) = phi(y(x))``."""
        y = map_to_domain(x, self.spec)
        return Trial(float(x), y, self.evaluate(y))


def grishagin_objective(
    fn: GrishaginFunction, depth: int = 12, artificial_delay: float = 0.0
) -> Objective:
    """Wrap a test function as a counted objective over the unit square."""
    spec = CurveSpec.unit(2, depth)
    return Objective(fn, spec, artificial_delay, name=f"grishagin-{fn.seed}")


@dataclass(frozen=True)
class OracleResult:
    """Ground-truth minimum found by exhaustive grid search."""

    min_value: float
    minimizer: tuple[float, ...]
    resolution: int

    def to_json(self) -> dict:
        return {
            "min_value": self.min_value,
            "minimizer": list(self.minimizer),
            "resolution": self.resolution,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "OracleResult":
        return cls(doc["min_value"], tuple(doc["minimizer"]), doc["resolution"])


def grid_oracle(obj: Objective, resolution: int) -> OracleResult:
    """Minimum of the objective over the uniform boundary-inclusive grid.

    Uses the function's vectorized ``grid_values`` hook when available,
    otherwise falls back to point-wise evaluation.  Never touches the
    solver-facing evaluation counter.
    """
    if resolution < 2:
        raise ValueError("grid resolution must be >= 2")
    spec = obj.spec
    axes = [
        np.linspace(lo, hi, resolution)
        for lo, hi in zip(spec.lower, spec.upper)
    ]
    hook = getattr(obj.func, "grid_values", None)
    if hook is not None and spec.dim == 2:
        values = np.asarray(hook(axes))
        flat = int(np.argmin(values))
        idx = np.unravel_index(flat, values.shape)
        best = float(values[idx])
    else:
        best = math.inf
        idx = (0,) * spec.dim
        for multi in itertools.product(range(resolution), repeat=spec.dim):
            y = np.array([axes[a][i] for a, i in enumerate(multi)])
            z = obj.peek(y)
            if z < best:
                best, idx = z, multi
    minimizer = tuple(float(axes[a][i]) for a, i in enumerate(idx))
    return OracleResult(best, minimizer, resolution)


def save_function(fn: GrishaginFunction, path: Path) -> None:
    Path(path).write_text(json.dumps(fn.to_json()))


def load_function(path: Path) -> GrishaginFunction:
    return GrishaginFunction.from_json(json.loads(Path(path).read_text()))


def save_oracle(result: OracleResult, path: Path, seed: int | None = None) -> None:
    doc = result.to_json()
    if seed is not None:
        doc["seed"] = seed
    Path(path).write_text(json.dumps(doc))


def load_oracle(path: Path) -> OracleResult:
    return OracleResult.from_json(json.loads(Path(path).read_text()))
