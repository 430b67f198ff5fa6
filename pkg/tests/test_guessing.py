"""Gain registry, closed-form solvers, and the concave envelope."""

import math

import numpy as np
import pytest

from alphaleak.errors import InputValidationError
from alphaleak.guessing import (
    builtin_gains,
    check_regularity,
    concave_envelope,
    estimate_supremum,
    expected_gain_objective,
    gain_from_selector,
    identity_gain,
    indicator_gain,
    log_gain,
    max_expected_gain,
    power_gain,
    square_gain,
)
from alphaleak.optimize import OptimizerConfig, grid_oracle
from alphaleak.prob import Alphabet, Pmf
from conftest import random_pmf

A3 = Alphabet(("a", "b", "c"))
AB = Alphabet(("a", "b"))


class TestBuiltinGains:
    def test_registry_contents(self):
        gains = builtin_gains([2.0, 5.0])
        names = [g.name for g in gains]
        assert names == ["identity", "square", "indicator:0.5",
                         "alpha-loss:2", "alpha-loss:5", "log"]
        assert all(g.regular for g in gains[:-1])
        assert not gains[-1].regular

    def test_evaluations(self):
        assert identity_gain().evaluate(1.0) == 1.0
        assert power_gain(2.0).evaluate(0.25) == pytest.approx(1.0, abs=1e-12)
        ind = indicator_gain(0.5)
        assert ind.evaluate(0.5) == 1.0
        assert ind.evaluate(0.49) == 0.0
        assert log_gain().evaluate(0.5) == -1.0
        assert log_gain().evaluate(0.0) == -math.inf

    def test_power_gain_range(self):
        for bad in (1.0, 0.5, math.inf):
            with pytest.raises(InputValidationError):
                power_gain(bad)

    def test_selectors(self):
        assert gain_from_selector("identity").name == "identity"
        assert gain_from_selector("indicator:0.5").name == "indicator:0.5"
        assert gain_from_selector("alpha-loss:2.0").name == "alpha-loss:2"
        assert gain_from_selector("log").name == "log"
        with pytest.raises(InputValidationError):
            gain_from_selector("nonsense")

    def test_regularity_checks(self):
        for g in builtin_gains([2.0])[:-1]:
            check_regularity(g)
        with pytest.raises(InputValidationError):
            check_regularity(log_gain())

    def test_supremum_scan_agrees_with_exact(self):
        for g in builtin_gains([2.0, 5.0])[:-1]:
            assert estimate_supremum(g) == pytest.approx(g.supremum, abs=1e-3)


class TestMaxExpectedGain:
    def test_point_mass_identity(self):
        value = max_expected_gain(Pmf(AB, [1.0, 0.0]), identity_gain())
        assert value.value == 1.0
        assert np.allclose(value.maximizer.mass, [1.0, 0.0])

    def test_square_equals_max_mass(self):
        p = Pmf(A3, [0.5, 0.3, 0.2])
        got = max_expected_gain(p, square_gain())
        assert got.value == 0.5
        assert np.allclose(got.maximizer.mass, [1, 0, 0])

    def test_power_gain_uniform(self):
        got = max_expected_gain(Pmf(AB, [0.5, 0.5]), power_gain(2.0))
        assert got.value == pytest.approx(2 * math.sqrt(0.5), abs=1e-12)
        assert np.allclose(got.maximizer.mass, [0.5, 0.5])

    def test_power_gain_tilting(self):
        p = Pmf(AB, [0.8, 0.2])
        got = max_expected_gain(p, power_gain(2.0))
        assert np.allclose(got.maximizer.mass, np.array([0.64, 0.04]) / 0.68)

    def test_indicator_takes_two_largest(self):
        got = max_expected_gain(Pmf(A3, [0.7, 0.2, 0.1]), indicator_gain(0.5))
        assert got.value == pytest.approx(0.9, abs=1e-12)
        assert np.allclose(got.maximizer.mass, [0.5, 0.5, 0.0])

    def test_indicator_single_symbol(self):
        got = max_expected_gain(Pmf(Alphabet(("only",)), [1.0]), indicator_gain(0.5))
        assert got.value == 0.0

    def test_indicator_tie_breaks_low_index(self):
        got = max_expected_gain(Pmf(A3, [0.4, 0.4, 0.2]), indicator_gain(0.5))
        assert np.allclose(got.maximizer.mass, [0.5, 0.5, 0.0])
        got2 = max_expected_gain(Pmf(A3, [0.2, 0.4, 0.4]), indicator_gain(0.5))
        assert np.allclose(got2.maximizer.mass, [0.0, 0.5, 0.5])

    def test_log_gain_is_negative_entropy(self):
        got = max_expected_gain(Pmf(AB, [0.5, 0.5]), log_gain())
        assert got.value == -1.0
        assert got.maximizer.mass is not None
        p = Pmf(A3, [0.5, 0.5, 0.0])  # structural zero is ignored
        assert max_expected_gain(p, log_gain()).value == pytest.approx(-1.0, abs=1e-12)

    def test_value_recomputes_at_maximizer(self):
        rng = np.random.default_rng(41)
        for gain in builtin_gains([2.0, 5.0]):
            for _ in range(10):
                p = random_pmf(rng, int(rng.integers(2, 6)), floor=0.02)
                got = max_expected_gain(p, gain)
                objective = expected_gain_objective(p, gain)
                assert objective.evaluate(got.maximizer.mass) == pytest.approx(
                    got.value, abs=1e-9
                )

    def test_point_mass_attains_gain_supremum(self):
        # a perfectly known secret yields sup g for every scale-type gain
        point = Pmf(A3, [0.0, 1.0, 0.0])
        for gain in (identity_gain(), square_gain(), power_gain(2.0), power_gain(5.0)):
            assert max_expected_gain(point, gain).value == pytest.approx(
                gain.supremum, abs=1e-12
            )

    def test_numeric_fallback_matches_exact(self):
        exact = power_gain(3.0)
        numeric = type(exact)(
            name="alpha-loss-numeric",
            evaluate_array=exact.evaluate_array,
            regular=True,
            supremum=exact.supremum,
            exact_solver=None,
        )
        rng = np.random.default_rng(43)
        cfg = OptimizerConfig(restarts=8, max_iterations=800)
        for _ in range(3):
            p = random_pmf(rng, 3, floor=0.1)
            want = max_expected_gain(p, exact).value
            got = max_expected_gain(p, numeric, cfg)
            assert got.value == pytest.approx(want, abs=2e-3)
            assert got.value <= want + 1e-9  # numeric is a lower bound

    def test_exact_solvers_against_oracle(self):
        rng = np.random.default_rng(47)
        for gain in builtin_gains([2.0]):
            for _ in range(5):
                p = random_pmf(rng, int(rng.integers(2, 4)), floor=0.05)
                exact = max_expected_gain(p, gain).value
                oracle = grid_oracle(expected_gain_objective(p, gain), 1e-3).best_value
                assert abs(exact - oracle) <= 0.01


class TestConcaveEnvelope:
    def test_concave_gain_is_fixed_point(self):
        g = power_gain(2.0)
        env = concave_envelope(g, 1e-3)
        ts = np.linspace(0, 1, 201)
        slope_bound = g.evaluate(1e-3) / 1e-3  # steepest chord near zero
        assert np.all(env(ts) >= g.evaluate_array(ts) - 1e-12)
        assert np.max(env(ts) - g.evaluate_array(ts)) <= slope_bound * 1e-3

    def test_square_envelope_is_the_chord(self):
        env = concave_envelope(square_gain(), 1e-3)
        ts = np.linspace(0, 1, 101)
        assert np.allclose(env(ts), ts, atol=1e-9)

    def test_indicator_envelope_is_the_tent(self):
        env = concave_envelope(indicator_gain(0.5), 1e-3)
        ts = np.linspace(0, 1, 101)
        want = np.where(ts <= 0.5, 2 * ts, 2 * (1 - ts))
        assert np.allclose(env(ts), want, atol=1e-9)

    def test_envelope_dominates_and_is_concave(self):
        for gain in builtin_gains([2.0])[:-1]:
            env = concave_envelope(gain, 1e-3)
            # domination is guaranteed on the evaluation grid (between grid
            # nodes a chord may dip below a strictly concave gain)
            grid = np.arange(1001) / 1000
            assert np.all(env(grid) >= gain.evaluate_array(grid) - 1e-12)
            ts = np.linspace(0, 1, 500)
            vals = env(ts)
            mid = env((ts[:-2] + ts[2:]) / 2)
            assert np.all(mid >= (vals[:-2] + vals[2:]) / 2 - 1e-12)

    def test_envelope_vanishes_at_zero_for_regular_gains(self):
        for gain in builtin_gains([2.0, 5.0])[:-1]:
            env = concave_envelope(gain, 1e-3)
            assert env(0.0) == pytest.approx(0.0, abs=1e-12)
