"""Characteristic interval-selection methods for the reduced objective.

Implements four variants of the information-statistical global search over
``f(x) = phi(y(x))`` on [0,1]:

* ``IA``    sequential, adaptive *global* Hoelder-constant estimate;
* ``PIA``   the same estimate, evaluating ``p`` points per iteration;
* ``IALT``  sequential, per-interval *local* tuning of the estimates;
* ``PLT``   local tuning combined with ``p``-wide parallel iterations.

Every iteration estimates interval Hoelder constants ``mu_j``, scores each
interval with a characteristic ``R(j)``, picks the ``p`` highest-scoring
intervals, places one new point in each, and stops once a selected
interval is shorter than ``epsilon`` (measured as length**(1/N)).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curve import CurveSpec
from .executor import BatchExecutor, BatchRequest
from .objective import Objective, Trial


class ConfigError(ValueError):
    """Invalid method or benchmark configuration."""


class SolverError(RuntimeError):
    """Internal invariant violation during a run."""


class TrialBudgetExceeded(SolverError):
    """Run aborted after hitting the trial cap before the stopping rule."""

    def __init__(self, message: str, trials_used: int):
        super().__init__(message)
        self.trials_used = trials_used


class Variant(str, Enum):
    IA = "IA"
    PIA = "PIA"
    IALT = "IALT"
    PLT = "PLT"

    @property
    def uses_local_tuning(self) -> bool:
        return self in (Variant.IALT, Variant.PLT)

    @property
    def parallel_capable(self) -> bool:
        return self in (Variant.PIA, Variant.PLT)


class CharacteristicForm(str, Enum):
    """Weight on the endpoint-sum term of the interval characteristic.

    ``paper_step3`` subtracts ``(z_j + z_{j-1})`` once; ``proof_form``
    subtracts it twice, which is the classical information characteristic
    and the form the convergence analysis relies on.  Both keep the same
    argmax under a constant shift of the objective.
    """

    PAPER_STEP3 = "paper_step3"
    PROOF_FORM = "proof_form"

    @property
    def endpoint_weight(self) -> float:
        return 1.0 if self is CharacteristicForm.PAPER_STEP3 else 2.0


@dataclass(frozen=True)
class MethodConfig:
    """Run parameters shared by all four variants.

    ``r`` is the reliability multiplier on the Hoelder estimates (> 1,
    larger is more cautious), ``xi`` the positive floor under every
    estimate, ``epsilon`` the stopping accuracy on interval length to the
    power 1/N, and ``p`` the number of trials evaluated per iteration
    (sequential variants require ``p = 1``).
    """

    variant: Variant
    r: float = 2.9
    xi: float = 1e-6
    epsilon: float = 0.001
    p: int = 1
    initial_internal_points: tuple[float, ...] = (0.2, 0.4, 0.6, 0.9)
    characteristic_form: CharacteristicForm = CharacteristicForm.PROOF_FORM
    stop_before_evaluate: bool = False
    max_trials: int = 1_000_000

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(str(self.variant.value if isinstance(self.variant, Variant) else self.variant).upper()))
        object.__setattr__(self, "characteristic_form", CharacteristicForm(self.characteristic_form))
        object.__setattr__(self, "initial_internal_points", tuple(float(v) for v in self.initial_internal_points))
        if not self.r > 1.0:
            raise ConfigError(f"reliability parameter r must be > 1, got {self.r}")
        if not self.xi > 0.0:
            raise ConfigError(f"estimate floor xi must be > 0, got {self.xi}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"search accuracy epsilon must lie in (0,1), got {self.epsilon}")
        if self.p < 1:
            raise ConfigError(f"batch width p must be >= 1, got {self.p}")
        if not self.variant.parallel_capable and self.p != 1:
            raise ConfigError(f"{self.variant.value} is sequential and requires p = 1")
        pts = self.initial_internal_points
        if not pts:
            raise ConfigError("at least one internal starting point is required")
        if any(not 0.0 < v < 1.0 for v in pts):
            raise ConfigError("internal starting points must lie strictly inside (0,1)")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ConfigError("internal starting points must be strictly increasing")
        # after initialization there are len(pts)+1 intervals
        if self.p > len(pts) + 1:
            raise ConfigError(
                f"p = {self.p} exceeds the {len(pts) + 1} intervals available after initialization"
            )
        if self.max_trials < len(pts) + 2:
            raise ConfigError("max_trials too small to hold the initial trials")

    def validate_against(self, spec: CurveSpec) -> None:
        """Check that the stopping accuracy is resolvable at the curve depth."""
        floor = 2.0 ** (-spec.depth) / (4.0 * math.sqrt(spec.dim))
        if self.epsilon < floor:
            raise ConfigError(
                f"epsilon = {self.epsilon} is below the depth-{spec.depth} "
                f"resolution limit {floor:.3e}; increase epsilon or depth"
            )


class SolverState:
    """Ordered trial record plus the per-interval quantities of one iteration.

    ``xs``/``zs`` mirror the sorted trial list as arrays; ``mu`` and
    ``characteristics`` hold the estimates computed for the intervals of
    the most recent iteration (interval ``j`` spans ``xs[j]..xs[j+1]``).
    """

    def __init__(self, trials: list[Trial]):
        trials = sorted(trials, key=lambda t: t.x)
        xs = np.array([t.x for t in trials])
        if len(xs) < 2 or np.any(np.diff(xs) <= 0):
            raise SolverError("initial trials must have distinct, ordered coordinates")
        self.trials = trials
        self.xs = xs
        self.zs = np.array([t.z for t in trials])
        self.mu: np.ndarray | None = None
        self.characteristics: np.ndarray | None = None
        self.iteration = 1
        self.best = min(trials, key=lambda t: t.z)
        self.stopped = False
        self.escapes_clamped = 0

    @property
    def interval_count(self) -> int:
        return len(self.xs) - 1

    def insert(self, trial: Trial) -> None:
        i = int(np.searchsorted(self.xs, trial.x))
        if i < len(self.xs) and self.xs[i] == trial.x:
            raise SolverError(f"duplicate trial coordinate {trial.x}")
        self.xs = np.insert(self.xs, i, trial.x)
        self.zs = np.insert(self.zs, i, trial.z)
        self.trials.insert(i, trial)
        if trial.z < self.best.z:
            self.best = trial


def initialize(obj: Objective, cfg: MethodConfig) -> SolverState:
    """Evaluate the endpoints and the configured internal points."""
    cfg.validate_against(obj.spec)
    points = (0.0, *cfg.initial_internal_points, 1.0)
    return SolverState([obj.reduced_eval(x) for x in points])


def _interval_quotients(state: SolverState, dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    dx = np.diff(state.xs)
    if np.any(dx <= 0):
        raise SolverError("zero-length interval: ordering invariant violated")
    delta = dx ** (1.0 / dim)
    quot = np.abs(np.diff(state.zs)) / delta
    return dx, delta, quot


def estimate_global_mu(state: SolverState, dim: int) -> float:
    """Largest interval difference quotient |dz| / dx**(1/N) seen so far."""
    _, _, quot = _interval_quotients(state, dim)
    return float(quot.max())


def estimate_local_mu(state: SolverState, dim: int, xi: float) -> np.ndarray:
    """Per-interval Hoelder estimates blending local and global information.

    For each interval the local part is the largest difference quotient
    among the interval and its immediate neighbours; the global part
    scales the overall largest quotient by the interval's relative size.
    The returned estimate is the max of both parts and the floor ``xi``.
    """
    dx, delta, quot = _interval_quotients(state, dim)
    lam = quot.copy()
    if len(quot) > 1:
        np.maximum(lam[1:], quot[:-1], out=lam[1:])
        np.maximum(lam[:-1], quot[1:], out=lam[:-1])
    mu_global = quot.max()
    gamma = mu_global * delta / (dx.max() ** (1.0 / dim))
    return np.maximum(np.maximum(lam, gamma), xi)


def characteristics(
    state: SolverState,
    mu: np.ndarray,
    r: float,
    dim: int,
    form: CharacteristicForm = CharacteristicForm.PROOF_FORM,
) -> np.ndarray:
    """Interval scores R(j); the interval most likely to hold the minimum wins."""
    _, delta, _ = _interval_quotients(state, dim)
    dz = np.diff(state.zs)
    scaled = r * mu * delta
    return scaled + dz * dz / scaled - form.endpoint_weight * (state.zs[1:] + state.zs[:-1])


def select_intervals(rvals: np.ndarray, p: int) -> list[int]:
    """Indices of the ``p`` largest characteristics, ties to the lower index."""
    if p > len(rvals):
        raise ConfigError(f"cannot select p = {p} of {len(rvals)} intervals")
    order = np.argsort(-np.asarray(rvals), kind="stable")
    return [int(i) for i in order[:p]]


def next_point(state: SolverState, t: int, r: float, dim: int) -> float:
    """New trial coordinate inside interval ``t``, biased toward the lower z end.

    Falls back to the midpoint (counted in ``state.escapes_clamped``) if
    floating-point extremes push the raw point onto or past a boundary.
    """
    x_lo, x_hi = float(state.xs[t]), float(state.xs[t + 1])
    z_lo, z_hi = float(state.zs[t]), float(state.zs[t + 1])
    mu_t = float(state.mu[t])
    if mu_t <= 0:
        raise SolverError(f"nonpositive estimate mu = {mu_t} for interval {t}")
    dz = z_hi - z_lo
    offset = (abs(dz) / mu_t) ** dim / (2.0 * r)
    x = 0.5 * (x_lo + x_hi) - (offset if dz > 0 else -offset if dz < 0 else 0.0)
    if not x_lo < x < x_hi:
        state.escapes_clamped += 1
        x = 0.5 * (x_lo + x_hi)
        if not x_lo < x < x_hi:
            raise SolverError(f"interval ({x_lo}, {x_hi}) too narrow to split")
    return x


def should_stop(state: SolverState, selected: list[int], epsilon: float, dim: int) -> bool:
    """True once the shortest selected interval is below the accuracy."""
    dx = np.diff(state.xs)
    shortest = min(float(dx[t]) ** (1.0 / dim) for t in selected)
    return shortest <= epsilon


def _estimates_for(state: SolverState, cfg: MethodConfig, dim: int) -> np.ndarray:
    if cfg.variant.uses_local_tuning:
        return estimate_local_mu(state, dim, cfg.xi)
    mu = max(estimate_global_mu(state, dim), cfg.xi)
    return np.full(state.interval_count, mu)


def iterate(state: SolverState, obj: Objective, cfg: MethodConfig, executor: BatchExecutor) -> SolverState:
    """One full iteration: estimate, score, select, place, evaluate, merge.

    By default the batch is evaluated and merged before the stopping rule
    is applied to the selected intervals (literal step ordering, so trial
    counts include the final batch).  With ``cfg.stop_before_evaluate``
    the rule is checked first and the final batch is skipped.
    """
    if state.stopped:
        raise SolverError("iterate called on a stopped state")
    dim = obj.spec.dim
    state.mu = _estimates_for(state, cfg, dim)
    state.characteristics = characteristics(state, state.mu, cfg.r, dim, cfg.characteristic_form)
    selected = select_intervals(state.characteristics, cfg.p)
    hit = should_stop(state, selected, cfg.epsilon, dim)
    if cfg.stop_before_evaluate and hit:
        state.stopped = True
        return state
    points = [next_point(state, t, cfg.r, dim) for t in selected]
    batch = executor.evaluate_batch(BatchRequest(tuple(points), state.iteration + 1), obj)
    for trial in batch.trials:
        state.insert(trial)
    state.iteration += 1
    if hit:
        state.stopped = True
    return state


@dataclass
class RunReport:
    """Outcome of one solve; ``to_json`` emits the wire schema."""

    variant: Variant
    r: float
    xi: float
    epsilon: float
    p: int
    depth: int
    trials: int
    iterations: int
    best_value: float
    best_point: tuple[float, ...]
    best_x: float
    wall_millis: float
    escapes_clamped: int
    seed: int | None = None
    success: bool | None = None
    final_state: SolverState | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        return {
            "variant": self.variant.value,
            "seed": self.seed,
            "r": self.r,
            "xi": self.xi,
            "epsilon": self.epsilon,
            "p": self.p,
            "depth": self.depth,
            "trials": self.trials,
            "iterations": self.iterations,
            "best_value": self.best_value,
            "best_point": list(self.best_point),
            "success": self.success,
            "wall_millis": self.wall_millis,
            "escapes_clamped": self.escapes_clamped,
        }


def solve(obj: Objective, cfg: MethodConfig, executor: BatchExecutor | None = None) -> RunReport:
    """Run a variant to its stopping rule and report the best trial found.

    Aborts with :class:`TrialBudgetExceeded` if ``cfg.max_trials`` is hit
    first.  The returned report carries the final state; its interval
    estimates are refreshed after the last merge so diagnostics such as
    :func:`convergence_witness` can run on it directly.
    """
    start = time.perf_counter()
    own_executor = executor is None
    if own_executor:
        executor = BatchExecutor(workers=1)
    try:
        state = initialize(obj, cfg)
        while not state.stopped:
            if len(state.trials) + cfg.p > cfg.max_trials:
                raise TrialBudgetExceeded(
                    f"stopping rule not reached within {cfg.max_trials} trials "
                    f"({cfg.variant.value}, epsilon={cfg.epsilon})",
                    trials_used=len(state.trials),
                )
            iterate(state, obj, cfg, executor)
    finally:
        if own_executor:
            executor.close()
    dim = obj.spec.dim
    state.mu = _estimates_for(state, cfg, dim)
    state.characteristics = characteristics(state, state.mu, cfg.r, dim, cfg.characteristic_form)
    wall = (time.perf_counter() - start) * 1e3
    return RunReport(
        variant=cfg.variant,
        r=cfg.r,
        xi=cfg.xi,
        epsilon=cfg.epsilon,
        p=cfg.p,
        depth=obj.spec.depth,
        trials=len(state.trials),
        iterations=state.iteration,
        best_value=float(state.best.z),
        best_point=tuple(float(v) for v in state.best.y),
        best_x=float(state.best.x),
        wall_millis=wall,
        escapes_clamped=state.escapes_clamped,
        final_state=state,
    )


@dataclass(frozen=True)
class ConvergenceWitness:
    """Checkable sufficient condition for convergence onto a given point.

    ``endpoint_quotient`` is the steeper of the two difference quotients
    from the interval endpoints down to the optimum value and
    ``interval_quotient`` the quotient across the whole interval; the
    condition holds when the scaled estimate ``lhs = r * mu_j`` reaches
    ``rhs``.  ``degenerate`` flags a negative square-root argument (the
    root term is then dropped), ``at_node`` that the point is already a
    trial coordinate.
    """

    interval_index: int
    endpoint_quotient: float
    interval_quotient: float
    lhs: float
    rhs: float
    satisfied: bool
    degenerate: bool = False
    at_node: bool = False


def convergence_witness(
    state: SolverState, x_star: float, f_star: float, dim: int, r: float
) -> ConvergenceWitness:
    """Evaluate the convergence condition on the interval containing ``x_star``."""
    if not 0.0 <= x_star <= 1.0:
        raise ValueError(f"x_star = {x_star} outside [0, 1]")
    if state.mu is None or len(state.mu) != state.interval_count:
        raise SolverError("interval estimates are stale; recompute mu first")
    xs, zs = state.xs, state.zs
    i = int(np.searchsorted(xs, x_star))
    if i < len(xs) and xs[i] == x_star:
        j = max(0, i - 1)
        return ConvergenceWitness(
            interval_index=j,
            endpoint_quotient=0.0,
            interval_quotient=0.0,
            lhs=r * float(state.mu[j]),
            rhs=0.0,
            satisfied=True,
            at_node=True,
        )
    j = i - 1
    inv = -1.0 / dim
    k_left = (float(zs[j]) - f_star) * (x_star - float(xs[j])) ** inv
    k_right = (float(zs[j + 1]) - f_star) * (float(xs[j + 1]) - x_star) ** inv
    k = max(k_left, k_right)
    m = abs(float(zs[j]) - float(zs[j + 1])) * (float(xs[j + 1]) - float(xs[j])) ** inv
    lhs = r * float(state.mu[j])
    base = 2.0 ** (1.0 - 1.0 / dim) * k
    disc = 4.0 ** (1.0 - 1.0 / dim) * k * k - m * m
    if disc >= 0:
        rhs = base + math.sqrt(disc)
        degenerate = False
    else:
        rhs = base
        degenerate = True
    return ConvergenceWitness(
        interval_index=j,
        endpoint_quotient=k,
        interval_quotient=m,
        lhs=lhs,
        rhs=rhs,
        satisfied=lhs >= rhs,
        degenerate=degenerate,
    )
