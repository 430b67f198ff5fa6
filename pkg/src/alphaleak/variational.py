"""Variational characterizations of the order-infinity divergence.

The central object is the channel objective

    J_g(W) = log2  V_g(p W) / V_g(q W),

where V_g is the maximal expected guessing gain from `guessing` and p W, q W
are the pushforwards of two distributions through a channel W.  For any gain
with g(0) = 0, continuity at 0 and a finite positive supremum, the supremum
of J_g over all channels equals D_inf(p || q) -- independently of which such
gain is used.  This module evaluates J_g, builds the "shattered" channels
that witness the supremum, and exposes two further variational forms (a
relative-entropy difference and a nonnegative-functional ratio) together with
their exactly optimal witnesses.

A shattered channel is parameterized by a pivot symbol and per-symbol split
sizes: a split symbol x is mapped uniformly onto m_x dedicated outputs, an
unsplit symbol is copied through.  Two variants appear:

- dedicated pivot (the default): the pivot keeps a single private output and
  every other symbol is split m ways; as m grows, J_g climbs to the target
  for every regular gain;
- split pivot: everything is copied through except the pivot, which is split
  m* ways; this is the witness family for the log gain, where the achieved
  ratio of entropies (-H_p(U)) / (-H_q(U)) tends to 2^{D_inf} like
  1 / log2(m*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    CostGuardError,
    DomainError,
    InputValidationError,
    RefusedComputationError,
)
from .guessing import GainSpec, max_expected_gain
from .optimize import OptimizerConfig, maximize_over_channel
from .prob import Alphabet, Channel, Pmf, pushforward
from .renyi import Order, entropy_bits, kl_divergence, renyi_divergence

_VALUE_NOISE = 1e-12
MAX_SHATTERED_OUTPUTS = 4096
MAX_SHATTERED_ATOMS = 1 << 22
DEFAULT_M_SCHEDULE = (1, 10, 100, 1000)

__all__ = [
    "ShatteredChannelSpec",
    "Witness",
    "VariationalReport",
    "LogGainReport",
    "pivot_symbol",
    "shattered_channel",
    "shattered_mass",
    "dedicated_pivot_spec",
    "split_pivot_spec",
    "gain_ratio_objective",
    "alpha_norm_log2",
    "alpha_norm_ratio_objective",
    "verify_guessing_characterization",
    "relative_entropy_gap",
    "expectation_ratio_objective",
    "point_mass_witness",
    "indicator_witness",
    "verify_log_gain_ratio",
]


@dataclass(frozen=True)
class ShatteredChannelSpec:
    """Pivot symbol plus split sizes for every non-pivot symbol.

    ``pivot_split`` is None for the dedicated-pivot variant (the pivot gets
    one private output) or an integer m* >= 1 to split the pivot itself.
    """

    pivot: str
    split_sizes: Mapping[str, int]
    pivot_split: int | None = None

    def validate_for(self, alphabet: Alphabet) -> None:
        if self.pivot not in alphabet:
            raise InputValidationError(f"pivot {self.pivot!r} not in alphabet")
        expected = set(alphabet.labels) - {self.pivot}
        got = set(self.split_sizes)
        if got != expected:
            raise InputValidationError(
                f"split sizes must cover exactly the non-pivot symbols; "
                f"missing {sorted(expected - got)}, extra {sorted(got - expected)}"
            )
        for x, m in self.split_sizes.items():
            if int(m) < 1:
                raise InputValidationError(f"split size for {x!r} must be >= 1, got {m}")
        if self.pivot_split is not None and int(self.pivot_split) < 1:
            raise InputValidationError("pivot_split must be >= 1 when given")

    def counts_for(self, alphabet: Alphabet) -> np.ndarray:
        """Output multiplicity per input symbol, in alphabet order."""
        self.validate_for(alphabet)
        out = []
        for x in alphabet.labels:
            if x == self.pivot:
                out.append(1 if self.pivot_split is None else int(self.pivot_split))
            else:
                out.append(int(self.split_sizes[x]))
        return np.asarray(out, dtype=np.int64)


def dedicated_pivot_spec(alphabet: Alphabet, pivot: str, m: int) -> ShatteredChannelSpec:
    """Uniform split of every non-pivot symbol into m outputs; private pivot output."""
    return ShatteredChannelSpec(
        pivot=pivot,
        split_sizes={x: int(m) for x in alphabet.labels if x != pivot},
        pivot_split=None,
    )


def split_pivot_spec(alphabet: Alphabet, pivot: str, m_star: int) -> ShatteredChannelSpec:
    """Copy-through channel except the pivot, which is split m* ways."""
    return ShatteredChannelSpec(
        pivot=pivot,
        split_sizes={x: 1 for x in alphabet.labels if x != pivot},
        pivot_split=int(m_star),
    )


def _output_labels(alphabet: Alphabet, counts: np.ndarray) -> tuple[str, ...]:
    labels: list[str] = []
    for x, m in zip(alphabet.labels, counts):
        if m == 1:
            labels.append(x)
        else:
            labels.extend(f"{x}#{i}" for i in range(1, int(m) + 1))
    return tuple(labels)


def shattered_channel(alphabet: Alphabet, spec: ShatteredChannelSpec) -> Channel:
    """Materialize the shattered channel (output count capped at
    MAX_SHATTERED_OUTPUTS to bound memory; use `shattered_mass` for the
    pushforward at larger splits)."""
    counts = spec.counts_for(alphabet)
    total = int(counts.sum())
    if total > MAX_SHATTERED_OUTPUTS:
        raise CostGuardError(
            f"shattered channel would need {total} outputs (cap {MAX_SHATTERED_OUTPUTS})"
        )
    matrix = np.zeros((len(alphabet), total))
    col = 0
    for i, m in enumerate(counts):
        matrix[i, col : col + int(m)] = 1.0 / int(m)
        col += int(m)
    return Channel(alphabet, Alphabet(_output_labels(alphabet, counts)), matrix)


def shattered_mass(p: Pmf, spec: ShatteredChannelSpec) -> np.ndarray:
    """Pushforward mass vector of p through the shattered channel, in output
    order, without materializing the channel matrix."""
    counts = spec.counts_for(p.alphabet)
    total = int(counts.sum())
    if total > MAX_SHATTERED_ATOMS:
        raise CostGuardError(
            f"shattered pushforward would need {total} atoms (cap {MAX_SHATTERED_ATOMS})"
        )
    return np.repeat(p.mass / counts, counts)


def pivot_symbol(p: Pmf, q: Pmf) -> str:
    """argmax of p(x)/q(x) over supp(p), ties to the lowest index.

    Requires supp(p) inside supp(q); otherwise the divergence is infinite and
    there is no finite pivot ratio to speak of.
    """
    idx = p.support_indices()
    if np.any(q.mass[idx] <= 0):
        raise DomainError("pivot undefined: supp(p) is not contained in supp(q)")
    ratios = p.mass[idx] / q.mass[idx]
    return p.alphabet.labels[int(idx[int(np.argmax(ratios))])]


def _gain_value_bits_ratio(num: float, den: float, gain: GainSpec) -> float:
    """log2(num/den) with the sign conventions both gain classes need.

    Regular gains have positive value pairs except on a singleton output
    alphabet, where an indicator-type gain makes both suprema vanish
    identically; identical numerator and denominator mean the output carries
    nothing, so the objective is 0 bits.  The log gain yields non-positive
    values (-H); their ratio is again positive, and a zero denominator with a
    nonzero numerator (deterministic reference pushforward only) is a genuine
    degeneracy.
    """
    if abs(den) <= _VALUE_NOISE:
        # values this small cannot arise from masses above the structural-zero
        # threshold; they are float residue of an exactly-zero supremum
        if abs(num) <= _VALUE_NOISE:
            return 0.0
        raise DomainError(
            f"gain {gain.name!r}: reference maximal expected gain is 0 "
            "(deterministic pushforward), ratio undefined"
        )
    ratio = num / den
    if ratio <= 0.0:
        return -math.inf
    return math.log2(ratio)


def gain_ratio_objective(
    p: Pmf,
    q: Pmf,
    ch: Channel,
    gain: GainSpec,
    cfg: OptimizerConfig | None = None,
) -> float:
    """log2 of V_gain(p W) / V_gain(q W) in bits for the channel W = ch.

    Negative values are legal (they just mean W is a poor witness); for any
    admissible gain the value never exceeds D_inf(p || q).
    """
    if not gain.regular and gain.name != "log":
        raise DomainError(
            f"gain {gain.name!r} is outside the admissible class "
            "(needs g(0)=0, continuity at 0, finite positive sup, or the log gain)"
        )
    p_out = pushforward(p, ch)
    q_out = pushforward(q, ch)
    num = max_expected_gain(p_out, gain, cfg).value
    den = max_expected_gain(q_out, gain, cfg).value
    return _gain_value_bits_ratio(num, den, gain)


def alpha_norm_log2(mass: np.ndarray, alpha: float) -> float:
    """log2 of the alpha-norm ( sum_i mass_i^alpha )^(1/alpha), in the log
    domain so large orders neither underflow nor overflow."""
    nz = mass > 0
    if not np.any(nz):
        return -math.inf
    logs = alpha * np.log2(mass[nz])
    m = float(logs.max())
    return (m + math.log2(float(np.sum(np.exp2(logs - m))))) / alpha


def alpha_norm_ratio_objective(p: Pmf, q: Pmf, ch: Channel, alpha: float) -> float:
    """log2 of the alpha-norm ratio of the two pushforwards.

    Equals `gain_ratio_objective` with the matching power gain: the
    alpha/(alpha-1) scale factors cancel in the ratio.
    """
    if not (alpha > 1.0 and math.isfinite(alpha)):
        raise InputValidationError(f"alpha-norm ratio requires alpha in (1, inf), got {alpha}")
    p_out = pushforward(p, ch)
    q_out = pushforward(q, ch)
    return alpha_norm_log2(p_out.mass, alpha) - alpha_norm_log2(q_out.mass, alpha)


# Value-only evaluators on raw mass vectors, used in channel-search loops
# where building Pmf objects per evaluation would dominate the cost.
def _fast_gain_value(mass: np.ndarray, gain: GainSpec) -> float:
    name = gain.name
    if name in ("identity", "square"):
        return float(mass.max())
    if name.startswith("indicator:"):
        c = gain.special_points[0]
        k = int(math.floor(1.0 / c + 1e-9))
        n = mass.size
        k = min(k, n)
        if k == n and abs(n * c - 1.0) > 1e-12:
            k -= 1
        if k == 0:
            return 0.0
        return float(np.sort(mass)[::-1][:k].sum())
    if name.startswith("alpha-loss:"):
        alpha = float(name.split(":", 1)[1])
        return alpha / (alpha - 1.0) * 2.0 ** alpha_norm_log2(mass, alpha)
    if name == "log":
        return -entropy_bits(mass)
    raise DomainError(f"no fast evaluator for gain {gain.name!r}")


@dataclass(frozen=True)
class Witness:
    gain: str
    kind: str  # "shattered" or "optimized"
    m: int
    achieved_bits: float
    gap_bits: float

    def as_dict(self) -> dict:
        return {
            "gain": self.gain,
            "kind": self.kind,
            "m": self.m,
            "achieved_bits": self.achieved_bits,
            "gap_bits": self.gap_bits,
        }


@dataclass(frozen=True)
class VariationalReport:
    target_bits: float
    witnesses: tuple[Witness, ...]
    best_achieved_bits: Mapping[str, float]
    agnosticism_spread_bits: float

    def as_dict(self) -> dict:
        return {
            "target_bits": self.target_bits,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "best_achieved_bits": dict(self.best_achieved_bits),
            "agnosticism_spread_bits": self.agnosticism_spread_bits,
        }


def verify_guessing_characterization(
    p: Pmf,
    q: Pmf,
    gains: Sequence[GainSpec],
    m_schedule: Sequence[int] = DEFAULT_M_SCHEDULE,
    cfg: OptimizerConfig | None = None,
    include_channel_search: bool = True,
    search_output_size: int | None = None,
) -> VariationalReport:
    """Approach D_inf(p || q) from below with shattered-channel witnesses.

    For every gain and every m in the schedule, evaluates the gain-ratio
    objective at the dedicated-pivot shattered channel (pivot = argmax p/q).
    Optionally also runs free-form channel optimization at a modest output
    size; that search exists to show optimization does not beat the
    construction, not to replace it.

    Refuses infinite targets: no finite witness certifies an infinite
    divergence, which the divergence itself already reports directly.
    """
    if not gains:
        raise InputValidationError("verification needs at least one gain")
    target = renyi_divergence(p, q, Order.infinity())
    if math.isinf(target):
        raise RefusedComputationError(
            "target divergence is infinite; witness verification is vacuous"
        )
    schedule = sorted(set(int(m) for m in m_schedule))
    if not schedule or schedule[0] < 1:
        raise InputValidationError("m_schedule must contain positive integers")
    pivot = pivot_symbol(p, q)

    witnesses: list[Witness] = []
    best: dict[str, float] = {}
    channels = {
        m: shattered_channel(p.alphabet, dedicated_pivot_spec(p.alphabet, pivot, m))
        for m in schedule
    }
    for gain in gains:
        for m in schedule:
            achieved = gain_ratio_objective(p, q, channels[m], gain, cfg)
            witnesses.append(Witness(gain.name, "shattered", m, achieved, target - achieved))
        best[gain.name] = max(w.achieved_bits for w in witnesses if w.gain == gain.name)

    if include_channel_search:
        out_size = search_output_size or min(len(p.alphabet) + 4, max(schedule))
        out_size = max(1, out_size)
        # the search exists to show free-form optimization does not beat the
        # construction, so its effort is capped independently of cfg
        base = cfg or OptimizerConfig()
        search_cfg = OptimizerConfig(
            restarts=min(base.restarts, 6),
            max_iterations=min(base.max_iterations, 800),
            step_size=base.step_size,
            convergence_tol=base.convergence_tol,
            rng_seed=base.rng_seed,
        )
        for gain in gains:
            def objective(rows, gain=gain):
                num = _fast_gain_value(p.mass @ rows, gain)
                den = _fast_gain_value(q.mass @ rows, gain)
                if abs(den) <= _VALUE_NOISE:
                    return 0.0 if abs(num) <= _VALUE_NOISE else -math.inf
                ratio = num / den
                return math.log2(ratio) if ratio > 0 else -math.inf

            report = maximize_over_channel(len(p.alphabet), out_size, objective, search_cfg)
            witnesses.append(
                Witness(gain.name, "optimized", out_size, report.best_value,
                        target - report.best_value)
            )
            best[gain.name] = max(best[gain.name], report.best_value)

    regular_best = [best[g.name] for g in gains if g.regular]
    spread = max(regular_best) - min(regular_best) if regular_best else 0.0
    return VariationalReport(target, tuple(witnesses), best, spread)


def relative_entropy_gap(p: Pmf, q: Pmf, r: Pmf) -> float:
    """D(r || q) - D(r || p) in bits.

    Never exceeds D_inf(p || q); equality holds at the point mass on the
    pivot symbol.  Requires supp(r) inside supp(p) and supp(q).
    """
    ridx = r.support_indices()
    if np.any(p.mass[ridx] <= 0) or np.any(q.mass[ridx] <= 0):
        raise DomainError("supp(r) must be contained in supp(p) and supp(q)")
    return kl_divergence(r, q) - kl_divergence(r, p)


def expectation_ratio_objective(p: Pmf, q: Pmf, f) -> float:
    """log2( E_p[f] / E_q[f] ) for a nonnegative function on the alphabet.

    Never exceeds D_inf(p || q); equality holds at the indicator of the pivot
    symbol.
    """
    farr = np.asarray(f, dtype=np.float64)
    if farr.shape != p.mass.shape:
        raise InputValidationError("f must assign one value per alphabet symbol")
    if not np.all(np.isfinite(farr)) or np.any(farr < 0):
        raise InputValidationError("f must be finite and nonnegative")
    num = float(p.mass @ farr)
    den = float(q.mass @ farr)
    if den <= 0.0:
        raise DomainError("E_q[f] must be positive")
    if num <= 0.0:
        return -math.inf
    return math.log2(num / den)


def point_mass_witness(p: Pmf, q: Pmf) -> Pmf:
    """The r that makes the relative-entropy gap exactly D_inf."""
    return Pmf.point_mass(p.alphabet, pivot_symbol(p, q))


def indicator_witness(p: Pmf, q: Pmf) -> np.ndarray:
    """The f that makes the expectation ratio exactly D_inf."""
    f = np.zeros(len(p.alphabet))
    f[p.alphabet.index(pivot_symbol(p, q))] = 1.0
    return f


@dataclass(frozen=True)
class LogGainEntry:
    m_star: int
    ratio: float
    achieved_bits: float  # log2(ratio), so all engines share units
    rel_error: float

    def as_dict(self) -> dict:
        return {
            "m_star": self.m_star,
            "ratio": self.ratio,
            "achieved_bits": self.achieved_bits,
            "rel_error": self.rel_error,
        }


@dataclass(frozen=True)
class LogGainReport:
    target_bits: float
    target_ratio: float
    entries: tuple[LogGainEntry, ...]

    def as_dict(self) -> dict:
        return {
            "target_bits": self.target_bits,
            "target_ratio": self.target_ratio,
            "entries": [e.as_dict() for e in self.entries],
        }


def verify_log_gain_ratio(p: Pmf, q: Pmf, m_star_schedule: Sequence[int]) -> LogGainReport:
    """Entropy-ratio witnesses for the log gain.

    Splits the pivot m* ways (all other symbols copied through) and evaluates
    the achieved ratio H_p(U) / H_q(U) of the two pushforward entropies,
    which climbs to 2^{D_inf(p || q)} as m* grows -- slowly, at rate
    1 / log2(m*), because the entropies grow only logarithmically in the
    split size.

    Requires full-support p and q (so both entropies are positive after
    shattering) and a finite target.
    """
    n = len(p.alphabet)
    if len(p.support_indices()) != n or len(q.support_indices()) != n:
        raise DomainError("log-gain verification requires full-support distributions")
    target = renyi_divergence(p, q, Order.infinity())
    if math.isinf(target):
        raise RefusedComputationError("target divergence is infinite")
    schedule = sorted(set(int(m) for m in m_star_schedule))
    if not schedule or schedule[0] < 1:
        raise InputValidationError("m_star_schedule must contain positive integers")
    pivot = pivot_symbol(p, q)
    target_ratio = 2.0**target

    entries = []
    for m_star in schedule:
        spec = split_pivot_spec(p.alphabet, pivot, m_star)
        h_p = entropy_bits(shattered_mass(p, spec))
        h_q = entropy_bits(shattered_mass(q, spec))
        if h_q == 0.0:
            raise DomainError(
                f"degenerate reference entropy at m*={m_star}; ratio undefined"
            )
        ratio = h_p / h_q
        bits = math.log2(ratio) if ratio > 0 else -math.inf
        entries.append(LogGainEntry(m_star, ratio, bits, abs(ratio / target_ratio - 1.0)))
    return LogGainReport(target, target_ratio, tuple(entries))
