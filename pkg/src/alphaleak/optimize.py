"""Maximizers over probability simplices and over channels.

The workhorse is exponentiated-gradient (mirror) ascent with central
finite-difference gradients, restarted from the barycenter plus random
interior points.  Mirror steps keep iterates strictly interior, which matters
because some objectives (log-type gains) are non-smooth or undefined at exact
zeros.  Channel objectives are treated as a product of row simplices and
optimized by block-coordinate sweeps.

Reported optima are achieved values, i.e. certified lower bounds on the
supremum; there is no global-optimality claim for non-concave objectives.
A brute-force lattice oracle (`grid_oracle`) is provided for low dimensions
and is used as the independent reference in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import CostGuardError, InputValidationError, OptimizerError

_FD_STEP = 1e-7
_STALL_PATIENCE = 60
_MAX_GRID_POINTS = 2_000_000
_INTERIOR_FLOOR = 1e-12

__all__ = [
    "OptimizerConfig",
    "SimplexObjective",
    "OptReport",
    "maximize_on_simplex",
    "grid_oracle",
    "maximize_over_channel",
]


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 16
    max_iterations: int = 2000
    step_size: float = 0.5
    convergence_tol: float = 1e-9
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise InputValidationError("optimizer: restarts must be >= 1")
        if self.max_iterations < 1:
            raise InputValidationError("optimizer: max_iterations must be >= 1")
        if not self.step_size > 0:
            raise InputValidationError("optimizer: step_size must be positive")
        if not self.convergence_tol > 0:
            raise InputValidationError("optimizer: convergence_tol must be positive")


@dataclass(frozen=True)
class SimplexObjective:
    """Deterministic objective on the probability simplex of given dimension.

    ``evaluate`` maps one point (1-d array) to a float.  ``evaluate_batch``,
    when provided, maps an (N, dimension) array of points to N values and is
    used to vectorize finite differences and the grid oracle.
    ``lipschitz_bound`` is an optional declared Lipschitz constant on the
    simplex, consumed only by accuracy tests.
    """

    dimension: int
    evaluate: Callable[[np.ndarray], float]
    evaluate_batch: Callable[[np.ndarray], np.ndarray] | None = None
    lipschitz_bound: float | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise InputValidationError("objective dimension must be >= 1")


@dataclass(frozen=True)
class OptReport:
    best_point: np.ndarray = field(repr=False)
    best_value: float
    iterations_used: int
    converged: bool


def _value_at(obj: SimplexObjective, x: np.ndarray) -> float:
    v = float(obj.evaluate(x))
    if math.isnan(v):
        raise OptimizerError("objective returned NaN", point=x.copy())
    return v


def _fd_gradient(obj: SimplexObjective, x: np.ndarray) -> np.ndarray:
    """Central difference gradient with probes clipped into [0, 1]."""
    d = x.size
    hi = np.minimum(x + _FD_STEP, 1.0)
    lo = np.maximum(x - _FD_STEP, 0.0)
    span = hi - lo
    probes = np.repeat(x[None, :], 2 * d, axis=0)
    probes[np.arange(d), np.arange(d)] = hi
    probes[d + np.arange(d), np.arange(d)] = lo
    if obj.evaluate_batch is not None:
        vals = np.asarray(obj.evaluate_batch(probes), dtype=np.float64)
        if np.any(np.isnan(vals)):
            bad = int(np.flatnonzero(np.isnan(vals))[0])
            raise OptimizerError("objective returned NaN", point=probes[bad].copy())
    else:
        vals = np.array([_value_at(obj, row) for row in probes])
    with np.errstate(divide="ignore", invalid="ignore"):
        grad = np.where(span > 0, (vals[:d] - vals[d:]) / span, 0.0)
    return np.nan_to_num(grad, nan=0.0, posinf=0.0, neginf=0.0)


def _ascend(obj: SimplexObjective, start: np.ndarray, cfg: OptimizerConfig):
    """One mirror-ascent run; returns (best point, best value, iters, converged)."""
    x = np.clip(np.asarray(start, dtype=np.float64), _INTERIOR_FLOOR, None)
    x = x / x.sum()
    best_x = x.copy()
    best_v = _value_at(obj, x)
    stall = 0
    for t in range(1, cfg.max_iterations + 1):
        g = _fd_gradient(obj, x)
        eta = cfg.step_size / math.sqrt(t)
        z = eta * g
        x = x * np.exp(z - z.max())
        total = x.sum()
        if not np.isfinite(total) or total <= 0:
            return best_x, best_v, t, False
        x = np.clip(x / total, _INTERIOR_FLOOR, None)
        x = x / x.sum()
        v = _value_at(obj, x)
        if v > best_v + cfg.convergence_tol:
            best_v, best_x = v, x.copy()
            stall = 0
        else:
            if v > best_v:
                best_v, best_x = v, x.copy()
            stall += 1
            if stall >= _STALL_PATIENCE:
                return best_x, best_v, t, True
    return best_x, best_v, cfg.max_iterations, False


def _as_start(point, dim: int) -> np.ndarray:
    arr = np.asarray(point, dtype=np.float64).reshape(-1)
    if arr.size != dim:
        raise InputValidationError(f"start point has dimension {arr.size}, expected {dim}")
    return arr


def maximize_on_simplex(
    obj: SimplexObjective,
    cfg: OptimizerConfig | None = None,
    extra_starts=(),
) -> OptReport:
    """Best value found by mirror ascent from the barycenter, ``cfg.restarts``
    random interior points, and any ``extra_starts``.

    Restarts are independent; the winner is the first start attaining the
    maximal value, so identical configs with identical seeds produce identical
    reports.
    """
    cfg = cfg or OptimizerConfig()
    dim = obj.dimension
    if dim == 1:
        point = np.ones(1)
        return OptReport(point, _value_at(obj, point), 1, True)
    rng = np.random.default_rng(cfg.rng_seed)
    starts = [np.full(dim, 1.0 / dim)]
    starts += [rng.dirichlet(np.ones(dim)) for _ in range(cfg.restarts)]
    starts += [_as_start(s, dim) for s in extra_starts]

    best = None
    iterations = 0
    for start in starts:
        x, v, it, conv = _ascend(obj, start, cfg)
        iterations += it
        if best is None or v > best[1]:
            best = (x, v, conv)
    x, _, conv = best
    return OptReport(x, _value_at(obj, x), iterations, conv)


def _build_lattice(dim: int, denom: int) -> np.ndarray:
    if dim == 1:
        return np.array([[denom]], dtype=np.int64)
    if dim == 2:
        k = np.arange(denom + 1, dtype=np.int64)
        return np.column_stack([k, denom - k])
    blocks = []
    for k in range(denom + 1):
        sub = _build_lattice(dim - 1, denom - k)
        first = np.full((sub.shape[0], 1), k, dtype=np.int64)
        blocks.append(np.hstack([first, sub]))
    return np.vstack(blocks)


@lru_cache(maxsize=8)
def _lattice(dim: int, denom: int) -> np.ndarray:
    """Integer compositions of ``denom`` into ``dim`` parts, shape (N, dim)."""
    out = _build_lattice(dim, denom)
    out.flags.writeable = False
    return out


def grid_oracle(obj: SimplexObjective, resolution: float) -> OptReport:
    """Exhaustive maximum over simplex points whose coordinates are multiples
    of ``resolution``.  Deliberately brute force: this is the independent
    reference the ascent routines are checked against.
    """
    if obj.dimension > 4:
        raise CostGuardError("grid_oracle is limited to dimension <= 4")
    if not 0 < resolution <= 1:
        raise InputValidationError("resolution must be in (0, 1]")
    denom = max(1, round(1.0 / resolution))
    n_points = math.comb(denom + obj.dimension - 1, obj.dimension - 1)
    if n_points > _MAX_GRID_POINTS:
        raise CostGuardError(
            f"grid of {n_points} points exceeds the {_MAX_GRID_POINTS} cap; "
            "coarsen the resolution"
        )
    points = _lattice(obj.dimension, denom).astype(np.float64) / denom
    if obj.evaluate_batch is not None:
        values = np.asarray(obj.evaluate_batch(points), dtype=np.float64)
    else:
        values = np.array([_value_at(obj, row) for row in points])
    if np.any(np.isnan(values)):
        bad = int(np.flatnonzero(np.isnan(values))[0])
        raise OptimizerError("objective returned NaN", point=points[bad].copy())
    idx = int(np.argmax(np.where(np.isnan(values), -np.inf, values)))
    return OptReport(points[idx].copy(), float(values[idx]), n_points, True)


def maximize_over_channel(
    input_size: int,
    output_size: int,
    obj: Callable[[np.ndarray], float],
    cfg: OptimizerConfig | None = None,
) -> OptReport:
    """Block-coordinate ascent over row-stochastic (input_size x output_size)
    matrices: rows are cycled and each row is improved by mirror ascent with
    the other rows held fixed.

    ``obj`` receives the full matrix and returns a float.
    """
    cfg = cfg or OptimizerConfig()
    if input_size < 1 or output_size < 1:
        raise InputValidationError("channel sizes must be >= 1")
    if output_size == 1:
        point = np.ones((input_size, 1))
        return OptReport(point, float(obj(point)), 1, True)

    rng = np.random.default_rng(cfg.rng_seed)
    assign = np.zeros((input_size, output_size))
    assign[np.arange(input_size), np.arange(input_size) % output_size] = 1.0
    starts = [
        0.9 * assign + 0.1 / output_size,
        np.full((input_size, output_size), 1.0 / output_size),
    ]
    starts += [rng.dirichlet(np.ones(output_size), size=input_size) for _ in range(cfg.restarts)]

    row_cfg = OptimizerConfig(
        restarts=1,
        max_iterations=max(50, cfg.max_iterations // 8),
        step_size=cfg.step_size,
        convergence_tol=cfg.convergence_tol,
        rng_seed=cfg.rng_seed,
    )

    def check(v: float, point: np.ndarray) -> float:
        if math.isnan(v):
            raise OptimizerError("objective returned NaN", point=point.copy())
        return v

    best_rows, best_v = None, -math.inf
    iterations = 0
    converged = False
    for rows0 in starts:
        rows = np.array(rows0, dtype=np.float64)
        current = check(float(obj(rows)), rows)
        settled = False
        for _ in range(8):
            improved = False
            for i in range(input_size):
                def row_objective(r, i=i, rows=rows):
                    trial = rows.copy()
                    trial[i] = r
                    return check(float(obj(trial)), trial)

                sub = SimplexObjective(output_size, row_objective)
                x, v, it, _ = _ascend(sub, rows[i], row_cfg)
                iterations += it
                if v > current + cfg.convergence_tol:
                    rows[i] = x
                    current = v
                    improved = True
            if not improved:
                settled = True
                break
        if current > best_v:
            best_v, best_rows, converged = current, rows.copy(), settled
    return OptReport(best_rows, check(float(obj(best_rows)), best_rows), iterations, converged)
