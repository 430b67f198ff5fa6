"""Finite-alphabet probability objects and the operations the measures need.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.

Conventions enforced here and relied on everywhere else:

- probabilities are float64; normalization is checked to ``NORMALIZATION_TOL``;
- entries in ``[-NEGATIVE_CLAMP, 0)`` are clamped to exactly 0 (file-sourced
  data carries rounding noise), anything more negative is rejected;
- masses at or below ``SUPPORT_EPS`` are structural zeros: they are excluded
  from supports and from every max-over-support computation;
- alphabet labels are exact strings and their input order is canonical; all
  deterministic tie-breaking downstream uses that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlphabetMismatchError, InputValidationError

NORMALIZATION_TOL = 1e-9
SUPPORT_EPS = 1e-12
NEGATIVE_CLAMP = 1e-12

__all__ = [
    "NORMALIZATION_TOL",
    "SUPPORT_EPS",
    "Alphabet",
    "Pmf",
    "Channel",
    "Joint",
    "pushforward",
    "marginals",
    "posterior_channel",
    "forward_channel",
    "product",
    "joint_from_prior_channel",
    "flatten_joint",
    "support",
]


def _clean_mass(values, what: str) -> np.ndarray:
    """Validate and clamp a probability vector/matrix (without the sum check)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise InputValidationError(f"{what}: empty mass array")
    if not np.all(np.isfinite(arr)):
        raise InputValidationError(f"{what}: NaN or Inf entries are not allowed")
    if np.any(arr < -NEGATIVE_CLAMP):
        worst = float(arr.min())
        raise InputValidationError(
            f"{what}: negative entry {worst} below the -{NEGATIVE_CLAMP} clamp threshold"
        )
    arr = np.where(arr < 0.0, 0.0, arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of distinct symbol names."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if not labels:
            raise InputValidationError("alphabet must be non-empty")
        if len(set(labels)) != len(labels):
            raise InputValidationError("alphabet labels must be pairwise distinct")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputValidationError(f"symbol {label!r} not in alphabet {self.labels}") from None


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over a named finite alphabet."""

    alphabet: Alphabet
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        mass = _clean_mass(self.mass, "pmf")
        if mass.ndim != 1 or mass.size != len(self.alphabet):
            raise InputValidationError(
                f"pmf: mass length {mass.size} does not match alphabet size {len(self.alphabet)}"
            )
        total = float(mass.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InputValidationError(
                f"pmf: mass sums to {total!r}, off by {total - 1.0:+.3e} "
                f"(tolerance {NORMALIZATION_TOL})"
            )
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_mapping(cls, mapping) -> "Pmf":
        labels = tuple(mapping)
        return cls(Alphabet(labels), np.array([mapping[k] for k in labels]))

    @classmethod
    def uniform(cls, alphabet: Alphabet) -> "Pmf":
        n = len(alphabet)
        return cls(alphabet, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, alphabet: Alphabet, label: str) -> "Pmf":
        mass = np.zeros(len(alphabet))
        mass[alphabet.index(label)] = 1.0
        return cls(alphabet, mass)

    def __call__(self, label: str) -> float:
        return float(self.mass[self.alphabet.index(label)])

    def support_indices(self) -> np.ndarray:
        return np.flatnonzero(self.mass > SUPPORT_EPS)

    def restrict(self, indices) -> "Pmf":
        """Renormalized restriction to a subset of symbols (by index)."""
        idx = np.asarray(indices, dtype=int)
        sub = self.mass[idx]
        total = float(sub.sum())
        if total <= SUPPORT_EPS:
            raise InputValidationError("pmf restriction has (numerically) zero mass")
        labels = tuple(self.alphabet.labels[i] for i in idx)
        return Pmf(Alphabet(labels), sub / total)


@dataclass(frozen=True)
class Channel:
    """Row-stochastic conditional distribution: one output pmf per input symbol."""

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        matrix = _clean_mass(self.matrix, "channel")
        if matrix.ndim != 2 or matrix.shape != (len(self.input_alphabet), len(self.output_alphabet)):
            raise InputValidationError(
                f"channel: matrix shape {matrix.shape} does not match alphabets "
                f"({len(self.input_alphabet)} x {len(self.output_alphabet)})"
            )
        sums = matrix.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > NORMALIZATION_TOL)
        if bad.size:
            i = int(bad[0])
            raise InputValidationError(
                f"channel: row {self.input_alphabet.labels[i]!r} sums to {float(sums[i])!r} "
                f"(tolerance {NORMALIZATION_TOL})"
            )
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Channel":
        return cls(alphabet, alphabet, np.eye(len(alphabet)))

    @classmethod
    def from_rows(cls, input_alphabet: Alphabet, output_alphabet: Alphabet, rows) -> "Channel":
        return cls(input_alphabet, output_alphabet, np.array(rows, dtype=np.float64))

    def row(self, label: str) -> Pmf:
        return Pmf(self.output_alphabet, self.matrix[self.input_alphabet.index(label)])


@dataclass(frozen=True)
class Joint:
    """Joint pmf over a product alphabet, stored as an |X| x |Y| matrix."""

    x_alphabet: Alphabet
    y_alphabet: Alphabet
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        mass = _clean_mass(self.mass, "joint")
        if mass.ndim != 2 or mass.shape != (len(self.x_alphabet), len(self.y_alphabet)):
            raise InputValidationError(
                f"joint: mass shape {mass.shape} does not match alphabets "
                f"({len(self.x_alphabet)} x {len(self.y_alphabet)})"
            )
        total = float(mass.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise InputValidationError(
                f"joint: total mass {total!r}, off by {total - 1.0:+.3e} "
                f"(tolerance {NORMALIZATION_TOL})"
            )
        object.__setattr__(self, "mass", mass)


def _require_same_alphabet(a: Alphabet, b: Alphabet, what: str) -> None:
    if a.labels != b.labels:
        raise AlphabetMismatchError(f"{what}: alphabets differ ({a.labels} vs {b.labels})")


def pushforward(prior: Pmf, ch: Channel) -> Pmf:
    """Output marginal of ``prior`` through ``ch``: mass(u) = sum_x prior(x) ch(u|x)."""
    _require_same_alphabet(prior.alphabet, ch.input_alphabet, "pushforward")
    return Pmf(ch.output_alphabet, prior.mass @ ch.matrix)


def marginals(j: Joint) -> tuple[Pmf, Pmf]:
    """Row-sum and column-sum marginals (P_X, P_Y)."""
    return (
        Pmf(j.x_alphabet, j.mass.sum(axis=1)),
        Pmf(j.y_alphabet, j.mass.sum(axis=0)),
    )


def posterior_channel(j: Joint) -> Channel:
    """Bayes inversion P(x|y), with zero-probability outputs dropped first.

    The returned channel has input alphabet = the y-symbols with positive
    marginal mass (in canonical order) and output alphabet = the x-alphabet.
    """
    py = j.mass.sum(axis=0)
    keep = np.flatnonzero(py > SUPPORT_EPS)
    labels = Alphabet(tuple(j.y_alphabet.labels[i] for i in keep))
    rows = (j.mass[:, keep] / py[keep][None, :]).T
    return Channel(labels, j.x_alphabet, rows)


def forward_channel(j: Joint) -> tuple[Pmf, Channel]:
    """Conditional P(y|x) restricted to supp(P_X), together with that restricted prior."""
    px = j.mass.sum(axis=1)
    keep = np.flatnonzero(px > SUPPORT_EPS)
    labels = Alphabet(tuple(j.x_alphabet.labels[i] for i in keep))
    prior = Pmf(labels, px[keep] / float(px[keep].sum()))
    rows = j.mass[keep, :] / px[keep][:, None]
    return prior, Channel(labels, j.y_alphabet, rows)


def product(p: Pmf, q: Pmf) -> Joint:
    """Independent coupling: mass(x, y) = p(x) q(y)."""
    return Joint(p.alphabet, q.alphabet, np.outer(p.mass, q.mass))


def joint_from_prior_channel(prior: Pmf, ch: Channel) -> Joint:
    """Joint with mass(x, y) = prior(x) ch(y|x)."""
    _require_same_alphabet(prior.alphabet, ch.input_alphabet, "joint_from_prior_channel")
    return Joint(prior.alphabet, ch.output_alphabet, prior.mass[:, None] * ch.matrix)


def flatten_joint(j: Joint) -> Pmf:
    """View a joint as a pmf over the product alphabet (row-major order)."""
    labels = tuple(f"({x},{y})" for x in j.x_alphabet.labels for y in j.y_alphabet.labels)
    if len(set(labels)) != len(labels):
        labels = tuple(
            f"({i},{k})" for i in range(len(j.x_alphabet)) for k in range(len(j.y_alphabet))
        )
    return Pmf(Alphabet(labels), j.mass.reshape(-1))


def support(p: Pmf) -> tuple[str, ...]:
    """Symbols with mass above the structural-zero threshold."""
    return tuple(p.alphabet.labels[i] for i in p.support_indices())
