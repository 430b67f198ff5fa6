"""Renyi divergence family and Sibson mutual information, in bits.

For order ``a`` in (0,1) or (1,inf) the divergence between pmfs p, q is

    D_a(p||q) = log2( sum_x p(x)^a q(x)^(1-a) ) / (a - 1),

extended continuously to the Kullback-Leibler divergence at a = 1 and to

    D_inf(p||q) = max_{x: p(x) > 0} log2( p(x) / q(x) )

at a = inf.  Sums are evaluated in the log domain so large orders neither
underflow nor overflow.  ``float("inf")`` is a first-class return value
(disjoint supports mean infinite divergence, which is a meaningful report,
not an error).

All logarithms are base 2 and a result of these functions is always either a
finite number of bits or ``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AlphabetMismatchError, InputValidationError
from .prob import SUPPORT_EPS, Channel, Pmf, joint_from_prior_channel

ORDER_ONE_GUARD = 1e-6

__all__ = [
    "Order",
    "renyi_divergence",
    "kl_divergence",
    "shannon_entropy",
    "entropy_bits",
    "sibson_mi",
    "mutual_information",
    "limit_check_alpha_to_infinity",
]


@dataclass(frozen=True)
class Order:
    """Divergence order: a finite alpha, exactly 1, or infinity.

    The constructor rejects finite alphas within ``ORDER_ONE_GUARD`` of 1;
    values that close must be constructed as ``Order.one()``, which selects
    the exact Kullback-Leibler branch instead of the catastrophically
    cancelling 1/(alpha-1) formula.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if math.isnan(a):
            raise InputValidationError("order: alpha may not be NaN")
        if a == 1.0 or math.isinf(a):
            object.__setattr__(self, "alpha", a)
            return
        if a <= 0.0:
            raise InputValidationError(f"order: alpha must be positive, got {a}")
        if abs(a - 1.0) < ORDER_ONE_GUARD:
            raise InputValidationError(
                f"order: alpha {a} is within {ORDER_ONE_GUARD} of 1; use Order.one()"
            )
        object.__setattr__(self, "alpha", a)

    @classmethod
    def finite(cls, alpha: float) -> "Order":
        if math.isinf(alpha) or alpha == 1.0:
            raise InputValidationError("Order.finite requires alpha in (0,1) or (1,inf)")
        return cls(alpha)

    @classmethod
    def one(cls) -> "Order":
        return cls(1.0)

    @classmethod
    def infinity(cls) -> "Order":
        return cls(math.inf)

    @classmethod
    def parse(cls, text: str) -> "Order":
        s = str(text).strip().lower()
        if s in ("inf", "infinity", "oo"):
            return cls.infinity()
        try:
            value = float(s)
        except ValueError:
            raise InputValidationError(f"order: cannot parse {text!r}") from None
        if value == 1.0:
            return cls.one()
        return cls(value)

    @property
    def is_one(self) -> bool:
        return self.alpha == 1.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.alpha)


def _log2sumexp(log_terms: np.ndarray) -> float:
    """log2 of a sum given base-2 logs of the (positive) terms."""
    if log_terms.size == 0:
        return -math.inf
    m = float(np.max(log_terms))
    if math.isinf(m):
        return m
    return m + math.log2(float(np.sum(np.exp2(log_terms - m))))


def _check_pair(p: Pmf, q: Pmf) -> None:
    if p.alphabet.labels != q.alphabet.labels:
        raise AlphabetMismatchError("divergence requires a shared alphabet")


def _d_finite(p: np.ndarray, q: np.ndarray, alpha: float) -> float:
    sup_p = p > SUPPORT_EPS
    if alpha > 1.0 and np.any(sup_p & (q <= SUPPORT_EPS)):
        return math.inf
    both = sup_p & (q > SUPPORT_EPS)
    if not np.any(both):
        # supp(p) and supp(q) disjoint: the sum is empty for any alpha
        return math.inf
    log_terms = alpha * np.log2(p[both]) + (1.0 - alpha) * np.log2(q[both])
    return _log2sumexp(log_terms) / (alpha - 1.0)


def _d_one(p: np.ndarray, q: np.ndarray) -> float:
    sup_p = p > SUPPORT_EPS
    if np.any(sup_p & (q <= SUPPORT_EPS)):
        return math.inf
    pp = p[sup_p]
    return float(np.sum(pp * np.log2(pp / q[sup_p])))


def _d_inf(p: np.ndarray, q: np.ndarray) -> float:
    sup_p = p > SUPPORT_EPS
    if np.any(sup_p & (q <= SUPPORT_EPS)):
        return math.inf
    return float(np.max(np.log2(p[sup_p] / q[sup_p])))


def renyi_divergence(p: Pmf, q: Pmf, order: Order) -> float:
    """D_order(p || q) in bits; ``inf`` when supp(p) is not inside supp(q)
    (for order >= 1) or the supports are disjoint (for order < 1)."""
    _check_pair(p, q)
    if order.is_one:
        return _d_one(p.mass, q.mass)
    if order.is_infinite:
        return _d_inf(p.mass, q.mass)
    return _d_finite(p.mass, q.mass, order.alpha)


def kl_divergence(p: Pmf, q: Pmf) -> float:
    """Kullback-Leibler divergence in bits (the order-1 member of the family)."""
    _check_pair(p, q)
    return _d_one(p.mass, q.mass)


def entropy_bits(mass) -> float:
    """Shannon entropy in bits of a raw mass vector, with 0 log 0 = 0."""
    arr = np.asarray(mass, dtype=np.float64)
    nz = arr > SUPPORT_EPS
    if not np.any(nz):
        return 0.0
    return float(-np.sum(arr[nz] * np.log2(arr[nz])))


def shannon_entropy(p: Pmf) -> float:
    return entropy_bits(p.mass)


def _sibson_finite(prior: np.ndarray, matrix: np.ndarray, alpha: float) -> float:
    keep = prior > SUPPORT_EPS
    r = prior[keep]
    rows = matrix[keep, :]
    per_y = np.full(rows.shape[1], -math.inf)
    with np.errstate(divide="ignore"):
        log_rows = np.where(rows > SUPPORT_EPS, np.log2(np.maximum(rows, SUPPORT_EPS)), -math.inf)
    log_r = np.log2(r)
    for y in range(rows.shape[1]):
        col = log_rows[:, y]
        finite = col > -math.inf
        if not np.any(finite):
            continue
        per_y[y] = _log2sumexp(log_r[finite] + alpha * col[finite]) / alpha
    total = _log2sumexp(per_y[per_y > -math.inf])
    return alpha / (alpha - 1.0) * total


def _sibson_inf(prior: np.ndarray, matrix: np.ndarray) -> float:
    keep = prior > SUPPORT_EPS
    return float(np.log2(np.sum(np.max(matrix[keep, :], axis=0))))


def mutual_information(prior: Pmf, ch: Channel) -> float:
    """Shannon mutual information I(X;Y) in bits for the joint prior * channel."""
    j = joint_from_prior_channel(prior, ch).mass
    py = j.sum(axis=0)
    px = j.sum(axis=1)
    nz = j > SUPPORT_EPS
    denom = np.outer(px, py)
    return float(np.sum(j[nz] * np.log2(j[nz] / denom[nz])))


def sibson_mi(prior: Pmf, ch: Channel, order: Order) -> float:
    """Sibson mutual information I_order(X;Y) in bits.

    Finite order a:  a/(a-1) * log2 sum_y ( sum_x prior(x) ch(y|x)^a )^(1/a).
    Order 1: Shannon mutual information.  Order inf: log2 of the summed
    per-output maxima of the channel over the prior's support.
    """
    if prior.alphabet.labels != ch.input_alphabet.labels:
        raise AlphabetMismatchError("sibson_mi requires prior over the channel input alphabet")
    if order.is_one:
        return mutual_information(prior, ch)
    if order.is_infinite:
        return _sibson_inf(prior.mass, ch.matrix)
    return _sibson_finite(prior.mass, ch.matrix, order.alpha)


def limit_check_alpha_to_infinity(p: Pmf, q: Pmf, alphas) -> list[float]:
    """Divergence values along an increasing alpha grid (for convergence checks)."""
    alphas = [float(a) for a in alphas]
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise InputValidationError("limit check requires strictly increasing alphas")
    return [renyi_divergence(p, q, Order(a)) for a in alphas]
