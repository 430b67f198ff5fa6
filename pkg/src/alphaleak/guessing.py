"""Gain functions and the adversary's maximal expected guessing gain.

A gain function g maps a guess probability in [0, 1] to a reward.  The
quantity computed here is

    V_g(p) = sup over guess pmfs q of  E_{U ~ p}[ g(q(U)) ],

the best score an adversary can attain against a known distribution p.  For
each built-in gain the supremum has a closed form:

    identity g(t) = t           V = max_u p(u)
    square   g(t) = t^2         V = max_u p(u)        (convex, vertex optimum)
    hit at c g(t) = 1{t = c}    V = sum of the floor(1/c) largest masses
    power-a  g(t) = a/(a-1) t^((a-1)/a)
                                V = a/(a-1) * (sum_u p(u)^a)^(1/a),
                                maximizer q(u) proportional to p(u)^a
    log      g(t) = log2 t      V = -H(p) bits, maximizer q = p

Ties in any argmax are broken by lowest alphabet index; deterministic
maximizers are part of the test contract.  Gains without a closed form fall
back to the numerical simplex maximizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InputValidationError
from .optimize import OptimizerConfig, SimplexObjective, maximize_on_simplex
from .prob import SUPPORT_EPS, Pmf

INDICATOR_TOL = 1e-12
SUP_SCAN_RESOLUTION = 1e-4

__all__ = [
    "GainSpec",
    "GainValue",
    "Envelope",
    "identity_gain",
    "square_gain",
    "indicator_gain",
    "power_gain",
    "log_gain",
    "builtin_gains",
    "gain_from_selector",
    "max_expected_gain",
    "expected_gain_objective",
    "concave_envelope",
    "estimate_supremum",
    "check_regularity",
]


@dataclass(frozen=True)
class GainSpec:
    """A gain function plus what the solvers need to know about it.

    ``regular`` records whether g(0) = 0, g is continuous at 0, and
    0 < sup g < infinity -- the conditions under which the guessing-ratio
    characterization of the order-infinity divergence applies.  ``supremum``
    is sup over [0, 1] (exact for built-ins).  ``exact_solver``, when present,
    returns the closed-form maximal expected gain; otherwise the numeric
    simplex maximizer is used.
    """

    name: str
    evaluate_array: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    regular: bool
    supremum: float
    exact_solver: Callable[[Pmf], "GainValue"] | None = field(default=None, repr=False)
    special_points: tuple[float, ...] = ()
    lipschitz_bound: float | None = None

    def evaluate(self, t: float) -> float:
        return float(self.evaluate_array(np.asarray([t], dtype=np.float64))[0])

    @property
    def has_exact_solver(self) -> bool:
        return self.exact_solver is not None


@dataclass(frozen=True)
class GainValue:
    value: float
    maximizer: Pmf


def _top_indices(mass: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest masses, ties broken by lowest index."""
    order = np.argsort(-mass, kind="stable")
    return order[:k]


def _solve_max_mass(p: Pmf) -> GainValue:
    i = int(np.argmax(p.mass))
    return GainValue(float(p.mass[i]), Pmf.point_mass(p.alphabet, p.alphabet.labels[i]))


def identity_gain() -> GainSpec:
    return GainSpec(
        name="identity",
        evaluate_array=lambda t: np.asarray(t, dtype=np.float64),
        regular=True,
        supremum=1.0,
        exact_solver=_solve_max_mass,
        lipschitz_bound=1.0,
    )


def square_gain() -> GainSpec:
    return GainSpec(
        name="square",
        evaluate_array=lambda t: np.asarray(t, dtype=np.float64) ** 2,
        regular=True,
        supremum=1.0,
        exact_solver=_solve_max_mass,
        lipschitz_bound=2.0,
    )


def indicator_gain(c: float = 0.5) -> GainSpec:
    """Reward 1 exactly when the guess probability equals c (within 1e-12)."""
    if not 0.0 < c <= 1.0:
        raise InputValidationError(f"indicator gain requires c in (0, 1], got {c}")

    def _eval(t):
        return (np.abs(np.asarray(t, dtype=np.float64) - c) <= INDICATOR_TOL).astype(np.float64)

    def _solve(p: Pmf) -> GainValue:
        n = len(p.alphabet)
        k = min(int(math.floor(1.0 / c + 1e-9)), n)
        if k == n and abs(n * c - 1.0) > 1e-12:
            k -= 1
        if k == 0:
            return GainValue(0.0, Pmf.point_mass(p.alphabet, p.alphabet.labels[0]))
        chosen = _top_indices(p.mass, k)
        mass = np.zeros(n)
        mass[chosen] = c
        leftover = 1.0 - k * c
        if leftover > 1e-12:
            rest = np.setdiff1d(np.arange(n), chosen)
            mass[rest[0]] = leftover
        else:
            mass[chosen[0]] += leftover
        return GainValue(float(p.mass[chosen].sum()), Pmf(p.alphabet, mass))

    return GainSpec(
        name=f"indicator:{c:g}",
        evaluate_array=_eval,
        regular=True,
        supremum=1.0,
        exact_solver=_solve,
        special_points=(c,),
    )


def power_gain(alpha: float) -> GainSpec:
    """g(t) = a/(a-1) * t^((a-1)/a); its maximal expected gain is a/(a-1)
    times the a-norm of the distribution, attained at q(u) ~ p(u)^a."""
    if not (alpha > 1.0 and math.isfinite(alpha)):
        raise InputValidationError(f"power gain requires alpha in (1, inf), got {alpha}")
    scale = alpha / (alpha - 1.0)
    expo = (alpha - 1.0) / alpha

    def _eval(t):
        return scale * np.asarray(t, dtype=np.float64) ** expo

    def _solve(p: Pmf) -> GainValue:
        idx = p.support_indices()
        logs = alpha * np.log2(p.mass[idx])
        m = float(logs.max())
        log_norm = m + math.log2(float(np.sum(np.exp2(logs - m))))
        value = scale * 2.0 ** (log_norm / alpha)
        mass = np.zeros(len(p.alphabet))
        mass[idx] = np.exp2(logs - log_norm)
        return GainValue(value, Pmf(p.alphabet, mass))

    return GainSpec(
        name=f"alpha-loss:{alpha:g}",
        evaluate_array=_eval,
        regular=True,
        supremum=scale,
        exact_solver=_solve,
    )


def log_gain() -> GainSpec:
    """g(t) = log2 t.  Non-positive, so outside the regular class, yet its
    maximal expected gain is exactly -H(p) bits with maximizer q = p
    (zero-mass symbols are ignored by the 0 log 0 convention)."""

    def _eval(t):
        arr = np.asarray(t, dtype=np.float64)
        with np.errstate(divide="ignore"):
            return np.log2(arr)

    def _solve(p: Pmf) -> GainValue:
        idx = p.support_indices()
        pp = p.mass[idx]
        return GainValue(float(np.sum(pp * np.log2(pp))), p)

    return GainSpec(
        name="log",
        evaluate_array=_eval,
        regular=False,
        supremum=0.0,
        exact_solver=_solve,
    )


def builtin_gains(alpha_list=(2.0,)) -> list[GainSpec]:
    """Identity, square, hit-at-1/2, one power gain per requested alpha, log."""
    gains = [identity_gain(), square_gain(), indicator_gain(0.5)]
    gains += [power_gain(float(a)) for a in alpha_list]
    gains.append(log_gain())
    return gains


def gain_from_selector(selector: str) -> GainSpec:
    """Parse CLI selector strings: identity | square | indicator:<c> |
    alpha-loss:<alpha> | log."""
    s = selector.strip().lower()
    if s == "identity":
        return identity_gain()
    if s == "square":
        return square_gain()
    if s == "log":
        return log_gain()
    if s.startswith("indicator"):
        _, _, arg = s.partition(":")
        return indicator_gain(float(arg) if arg else 0.5)
    if s.startswith("alpha-loss:"):
        return power_gain(float(s.split(":", 1)[1]))
    raise InputValidationError(f"unknown gain selector {selector!r}")


def expected_gain_objective(p: Pmf, g: GainSpec) -> SimplexObjective:
    """q |-> E_{U~p}[g(q(U))] as a simplex objective (for the numeric solver
    and the grid oracle).  Only the support of p contributes, so -inf gain
    values never multiply zero masses."""
    idx = p.support_indices()
    weights = p.mass[idx]

    def _single(q: np.ndarray) -> float:
        return float(weights @ g.evaluate_array(q[idx]))

    def _batch(points: np.ndarray) -> np.ndarray:
        return g.evaluate_array(points[:, idx]) @ weights

    return SimplexObjective(
        dimension=len(p.alphabet),
        evaluate=_single,
        evaluate_batch=_batch,
        lipschitz_bound=g.lipschitz_bound,
    )


def _numeric_extra_starts(dim: int) -> list[np.ndarray]:
    """Vertices and all two-coordinate 50/50 points: the known optima of the
    built-in gains sit there, which rescues ascent on flat (indicator-like)
    objectives."""
    starts = [np.eye(dim)[i] for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            x = np.zeros(dim)
            x[i] = x[j] = 0.5
            starts.append(x)
    return starts


def max_expected_gain(p: Pmf, g: GainSpec, cfg: OptimizerConfig | None = None) -> GainValue:
    """Maximal expected gain of ``g`` against ``p``.

    Uses the closed form when the gain carries one, otherwise the simplex
    maximizer (whose result is a certified lower bound).
    """
    if g.exact_solver is not None:
        return g.exact_solver(p)
    objective = expected_gain_objective(p, g)
    report = maximize_on_simplex(
        objective,
        cfg,
        extra_starts=_numeric_extra_starts(len(p.alphabet)),
    )
    # snap near-zero coordinates before reporting; keep the raw point when
    # snapping would lose value (e.g. for gains that reward interior mass)
    snapped = np.where(report.best_point < SUPPORT_EPS, 0.0, report.best_point)
    snapped = snapped / snapped.sum()
    snapped_value = float(objective.evaluate(snapped))
    if snapped_value >= report.best_value:
        return GainValue(snapped_value, Pmf(p.alphabet, snapped))
    raw = report.best_point / report.best_point.sum()
    return GainValue(report.best_value, Pmf(p.alphabet, raw))


@dataclass(frozen=True)
class Envelope:
    """Piecewise-linear upper concave envelope, tabulated on hull vertices."""

    xs: np.ndarray = field(repr=False)
    ys: np.ndarray = field(repr=False)

    def __call__(self, t):
        return np.interp(t, self.xs, self.ys)


def concave_envelope(g: GainSpec, resolution: float = 1e-3) -> Envelope:
    """Upper concave envelope of g on [0, 1], computed as the upper convex
    hull of the sampled graph and linearly interpolated.

    For gains with g(0) = 0 that are continuous at 0 the envelope also
    vanishes and stays continuous at 0; with the default resolution that is
    visible as envelope(0) = 0 on the grid.
    """
    if not 0 < resolution <= 0.5:
        raise InputValidationError("envelope resolution must be in (0, 0.5]")
    denom = max(2, round(1.0 / resolution))
    xs = np.arange(denom + 1, dtype=np.float64) / denom
    for s in g.special_points:
        if 0.0 <= s <= 1.0:
            xs = np.append(xs, s)
    xs = np.unique(xs)
    ys = np.asarray(g.evaluate_array(xs), dtype=np.float64)
    if not np.all(np.isfinite(ys)):
        raise InputValidationError(f"gain {g.name!r} is not bounded on the envelope grid")

    hull_x: list[float] = []
    hull_y: list[float] = []
    for x, y in zip(xs, ys):
        while len(hull_x) >= 2:
            cross = (hull_x[-1] - hull_x[-2]) * (y - hull_y[-2]) - (
                hull_y[-1] - hull_y[-2]
            ) * (x - hull_x[-2])
            if cross >= 0:
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(float(x))
        hull_y.append(float(y))
    return Envelope(np.asarray(hull_x), np.asarray(hull_y))


def estimate_supremum(g: GainSpec, resolution: float = SUP_SCAN_RESOLUTION) -> float:
    """sup over [0,1] of g on a scan grid plus endpoints plus declared special
    points.  Built-ins carry exact suprema; this is for user-supplied gains."""
    denom = max(2, round(1.0 / resolution))
    grid = np.arange(denom + 1, dtype=np.float64) / denom
    pts = np.unique(np.concatenate([grid, np.asarray(g.special_points, dtype=np.float64)]))
    pts = pts[(pts >= 0.0) & (pts <= 1.0)]
    return float(np.max(g.evaluate_array(pts)))


def check_regularity(g: GainSpec) -> None:
    """Numerically verify the conditions recorded in ``GainSpec.regular``:
    g(0) = 0, g(t) -> 0 along t = 10^-k, and 0 < sup g < infinity."""
    if abs(g.evaluate(0.0)) > 1e-9:
        raise InputValidationError(f"gain {g.name!r}: g(0) = {g.evaluate(0.0)}, expected 0")
    tail = g.evaluate_array(10.0 ** -np.arange(6, 13, dtype=np.float64))
    if not np.all(np.isfinite(tail)) or abs(float(tail[-1])) > 1e-3:
        raise InputValidationError(f"gain {g.name!r} does not vanish continuously at 0")
    sup = estimate_supremum(g)
    if not (0.0 < sup < math.inf) or not math.isfinite(g.supremum):
        raise InputValidationError(f"gain {g.name!r} needs a finite positive supremum")
