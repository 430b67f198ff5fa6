"""Acceptance suite: one test per advertised guarantee, at desk scale.

Every check uses frozen seeds and an oracle path that is independent of the
library code it validates (hand-rolled numpy chains, exhaustive lattices, or
closed forms evaluated the other way around).  Instance generators enforce
full support through mass floors; see conftest for the rationale.

A hook in conftest prints one PASS/FAIL line per test here.
"""

import math

import numpy as np
import pytest

from alphaleak.guessing import (
    builtin_gains,
    expected_gain_objective,
    identity_gain,
    indicator_gain,
    max_expected_gain,
    power_gain,
    square_gain,
)
from alphaleak.leakage import (
    maximal_alpha_leakage,
    opportunistic_leakage,
    realizable_leakage,
)
from alphaleak.optimize import OptimizerConfig, grid_oracle
from alphaleak.prob import Alphabet, Pmf
from alphaleak.renyi import Order, renyi_divergence, sibson_mi
from alphaleak.variational import (
    alpha_norm_ratio_objective,
    expectation_ratio_objective,
    gain_ratio_objective,
    indicator_witness,
    point_mass_witness,
    relative_entropy_gap,
    verify_guessing_characterization,
    verify_log_gain_ratio,
)
from conftest import (
    floored_simplex,
    generic_alphabet,
    product_joint,
    random_channel,
    random_joint,
    random_pair,
)

EPS = 1e-12
REGULAR_GAINS = [identity_gain(), square_gain(), indicator_gain(0.5),
                 power_gain(2.0), power_gain(5.0)]
M_SCHEDULE = (1, 10, 100, 1000)
CHEAP = OptimizerConfig(restarts=3, max_iterations=250)


def _pairs(seed, count, sizes, p_floor, q_floor):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        size = int(rng.choice(sizes))
        out.append(random_pair(rng, size, p_floor, q_floor))
    return out


def _full_support_joints(seed, count, max_side=4, mix=0.15):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        nx, ny = int(rng.integers(2, max_side + 1)), int(rng.integers(2, max_side + 1))
        out.append(random_joint(rng, nx, ny, mix=mix))
    return out


# --- independent oracle chains (no library calls) ---------------------------


def _oracle_opportunistic(j, alpha):
    """Posterior-ratio chain: a/(a-1) log2 sum_y P(y) max_x P(x|y)/P(x)."""
    mass = j.mass
    px = mass.sum(axis=1)
    py = mass.sum(axis=0)
    total = 0.0
    for y in range(mass.shape[1]):
        if py[y] <= EPS:
            continue
        post = mass[:, y] / py[y]
        sup = post > EPS
        total += py[y] * float(np.max(post[sup] / px[sup]))
    return alpha / (alpha - 1.0) * math.log2(total)


def _oracle_realizable_max_ratio(j, alpha):
    """Max joint-to-product ratio over the joint support."""
    mass = j.mass
    prod = np.outer(mass.sum(axis=1), mass.sum(axis=0))
    sup = mass > EPS
    return alpha / (alpha - 1.0) * math.log2(float(np.max(mass[sup] / prod[sup])))


def _oracle_realizable_divergence(j, alpha):
    """Flatten both measures and take the worst log-ratio directly."""
    p = j.mass.reshape(-1)
    q = np.outer(j.mass.sum(axis=1), j.mass.sum(axis=0)).reshape(-1)
    sup = p > EPS
    return alpha / (alpha - 1.0) * float(np.max(np.log2(p[sup] / q[sup])))


def _oracle_d_inf(p: Pmf, q: Pmf) -> float:
    sup = p.mass > EPS
    return float(np.max(np.log2(p.mass[sup] / q.mass[sup])))


def test_opportunistic_closed_form_identity():
    joints = _full_support_joints(seed=2024_01, count=100)
    for j in joints:
        for alpha in (1.5, 2.0, 5.0):
            library = opportunistic_leakage(j, alpha).bits
            oracle = _oracle_opportunistic(j, alpha)
            assert abs(library - oracle) <= 1e-9


def test_realizable_closed_form_identity():
    joints = _full_support_joints(seed=2024_02, count=100)
    for j in joints:
        for alpha in (1.5, 2.0, 5.0):
            library = realizable_leakage(j, alpha).bits
            assert abs(library - _oracle_realizable_divergence(j, alpha)) <= 1e-9
            assert abs(library - _oracle_realizable_max_ratio(j, alpha)) <= 1e-9


def test_shattered_witness_achievability_and_convergence():
    pairs = _pairs(seed=2024_03, count=50, sizes=(3,), p_floor=0.05, q_floor=0.15)
    for p, q in pairs:
        target = _oracle_d_inf(p, q)
        report = verify_guessing_characterization(
            p, q, REGULAR_GAINS, m_schedule=M_SCHEDULE, include_channel_search=False
        )
        for gain in REGULAR_GAINS:
            achieved = [w.achieved_bits for w in report.witnesses if w.gain == gain.name]
            assert all(v <= target + 1e-6 for v in achieved)
            assert all(b >= a - 1e-12 for a, b in zip(achieved, achieved[1:]))
            assert target - achieved[-1] <= 0.05


def test_gain_agnosticism_spread():
    pairs = _pairs(seed=2024_03, count=50, sizes=(3,), p_floor=0.05, q_floor=0.15)
    for p, q in pairs:
        report = verify_guessing_characterization(
            p, q, REGULAR_GAINS, m_schedule=(1000,), include_channel_search=False
        )
        at_final = [w.achieved_bits for w in report.witnesses if w.m == 1000]
        assert len(at_final) == len(REGULAR_GAINS)
        assert max(at_final) - min(at_final) <= 0.05


def test_exact_variational_witnesses():
    pairs = _pairs(seed=2024_05, count=50, sizes=(2, 3, 4), p_floor=0.02, q_floor=0.02)
    rng = np.random.default_rng(2024_55)
    random_checked = 0
    for p, q in pairs:
        target = _oracle_d_inf(p, q)
        assert abs(relative_entropy_gap(p, q, point_mass_witness(p, q)) - target) <= 1e-12
        assert abs(expectation_ratio_objective(p, q, indicator_witness(p, q)) - target) <= 1e-12
        for _ in range(2):
            n = len(p.alphabet)
            r = Pmf(p.alphabet, rng.dirichlet(np.ones(n)))
            assert relative_entropy_gap(p, q, r) <= target + 1e-9
            f = rng.uniform(0.0, 1.0, size=n)
            assert expectation_ratio_objective(p, q, f) <= target + 1e-9
            random_checked += 2
    assert random_checked >= 200


def test_log_gain_entropy_ratio_accuracy():
    rng = np.random.default_rng(2024_06)
    instances = [random_pair(rng, size, 0.05, 0.05) for size in (2, 3) * 10]
    reports = [verify_log_gain_ratio(p, q, [2**10, 2**20]) for p, q in instances]
    for report in reports:
        coarse, fine = report.entries
        assert fine.rel_error < coarse.rel_error
    worst = max(report.entries[1].rel_error for report in reports)
    assert worst <= 0.01, (
        f"entropy ratio at m*=2^20 is off by up to {worst:.4f} relative; "
        "the ratio converges like 1/log2(m*), so 2^20 splits leave errors "
        "of a few percent on generic instances"
    )


def test_alpha_norm_ratio_consistency():
    rng = np.random.default_rng(2024_07)
    alphas = (1.5, 2.0, 3.0, 5.0, 10.0)
    for k in range(100):
        n = int(rng.integers(2, 5))
        p, q = random_pair(rng, n, 0.02, 0.02)
        ch = random_channel(rng, n, int(rng.integers(1, 7)))
        p2, q2 = Pmf(ch.input_alphabet, p.mass), Pmf(ch.input_alphabet, q.mass)
        alpha = alphas[k % len(alphas)]
        direct = alpha_norm_ratio_objective(p2, q2, ch, alpha)
        via_gain = gain_ratio_objective(p2, q2, ch, power_gain(alpha))
        assert abs(direct - via_gain) <= 1e-9


def test_exact_solvers_match_grid_oracle():
    rng = np.random.default_rng(2024_08)
    gains = builtin_gains([2.0, 5.0])
    assert all(g.has_exact_solver for g in gains)
    for _ in range(100):
        size = int(rng.integers(2, 4))
        p = Pmf(generic_alphabet(size), floored_simplex(rng, size, 0.05))
        for gain in gains:
            exact = max_expected_gain(p, gain).value
            oracle = grid_oracle(expected_gain_objective(p, gain), 1e-3).best_value
            assert abs(exact - oracle) <= 0.01


def _limit_pairs(seed, count):
    """Random pairs conditioned on q(pivot) * max-ratio >= 0.3.

    The order-100 divergence sits below the order-infinity one by at most
    (1/99) log2( 1 / (r* q*) ) where r* is the worst likelihood ratio and q*
    the reference mass at its argmax, so the conditioning provably brings the
    gap under (1/99) log2(1/0.3) < 0.017; without it, instances whose pivot
    carries vanishing reference mass converge arbitrarily slowly.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p, q = random_pair(rng, int(rng.choice((2, 3, 4))), 0.02, 0.05)
        ratios = p.mass / q.mass
        pivot = int(np.argmax(ratios))
        if ratios[pivot] * q.mass[pivot] >= 0.3:
            out.append((p, q))
    return out


def test_order_limit_continuity():
    # thresholds sanity-checked on the two named instances first
    ab = Alphabet(("a", "b"))
    named = [
        (Pmf(ab, [0.5, 0.5]), Pmf(ab, [0.25, 0.75])),
        (Pmf(ab, [0.9, 0.1]), Pmf(ab, [0.5, 0.5])),
    ]
    pairs = named + _limit_pairs(seed=2024_09, count=50)
    for p, q in pairs:
        gap = renyi_divergence(p, q, Order.infinity()) - renyi_divergence(p, q, Order(100))
        assert 0.0 <= gap < 0.02

    # the analogous conditioning for channels: per-output maxima sum to >= 1,
    # so a prior floor of 0.26 alone bounds the Sibson gap under 0.02
    rng = np.random.default_rng(2024_99)
    for _ in range(50):
        ch = random_channel(rng, 3, 3, floor=0.05)
        prior = Pmf(ch.input_alphabet, floored_simplex(rng, 3, 0.26))
        gap = sibson_mi(prior, ch, Order.infinity()) - sibson_mi(prior, ch, Order(100))
        assert 0.0 <= gap < 0.02


def test_leakage_ordering_and_independence():
    rng = np.random.default_rng(2024_10)
    for _ in range(100):
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        j = random_joint(rng, nx, ny, mix=0.1)
        alpha = float(rng.uniform(1.3, 8.0))
        maximal = maximal_alpha_leakage(j, alpha, CHEAP).bits
        opportunistic = opportunistic_leakage(j, alpha).bits
        realizable = realizable_leakage(j, alpha).bits
        assert maximal <= opportunistic + 1e-6
        assert opportunistic <= realizable + 1e-6

    rng = np.random.default_rng(2024_11)
    for _ in range(20):
        j = product_joint(rng, int(rng.integers(2, 4)), int(rng.integers(2, 4)))
        assert abs(maximal_alpha_leakage(j, 2.0, CHEAP).bits) <= 1e-9
        assert abs(opportunistic_leakage(j, 2.0).bits) <= 1e-9
        assert abs(realizable_leakage(j, 2.0).bits) <= 1e-9
