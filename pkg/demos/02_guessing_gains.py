"""Guessing adversaries: gain functions and their best expected scores.

An adversary declares a guess distribution over the secret's alphabet and is
rewarded through a gain function of the probability it assigned to the truth.
Each built-in gain has a closed-form optimal strategy; this script compares
them, shows the tilted maximizers, and draws the upper concave envelopes that
control how much a spread-out secret can still be worth.
"""

import numpy as np

from alphaleak import (
    Alphabet,
    Pmf,
    builtin_gains,
    concave_envelope,
    indicator_gain,
    max_expected_gain,
    power_gain,
)

secret = Pmf(Alphabet(("low", "mid", "high")), [0.7, 0.2, 0.1])
print("Secret distribution:", dict(zip(secret.alphabet.labels, secret.mass)))

print("\nBest expected score per gain (and the strategy achieving it):")
for gain in builtin_gains([2.0, 5.0]):
    best = max_expected_gain(secret, gain)
    strategy = np.round(best.maximizer.mass, 4)
    print(f"  {gain.name:>14}: value {best.value:+.6f}   guess {strategy}")

# The power gain interpolates between proportional betting and max-mass
# guessing: its maximizer tilts the secret distribution by the power alpha.
print("\nPower-gain maximizers tilt towards the mode as alpha grows:")
for alpha in (1.5, 2.0, 4.0, 16.0):
    best = max_expected_gain(secret, power_gain(alpha))
    print(f"  alpha = {alpha:>4}: {np.round(best.maximizer.mass, 4)}")

# Upper concave envelopes: the hit-at-1/2 gain is a spike, but mixing guesses
# makes any probability between 0 and 1/2 worth twice itself.
env = concave_envelope(indicator_gain(0.5), resolution=1e-3)
ts = np.array([0.0, 0.1, 0.25, 0.5, 0.75, 1.0])
print("\nUpper concave envelope of the hit-at-1/2 gain (a tent):")
for t in ts:
    print(f"  envelope({t:.2f}) = {float(env(t)):.3f}")
