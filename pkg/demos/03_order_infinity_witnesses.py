"""Witnessing the order-infinity divergence through guessing games.

The ratio of the adversary's best expected gains against two distributions,
optimized over what function of the secret those distributions describe,
recovers D_inf exactly -- for any admissible gain.  The witnesses are
"shattered" channels: keep one pivotal symbol intact, split all others into
many indistinguishable shards.  As the split grows, the shards stop being
worth guessing and only the pivot's likelihood ratio survives.
"""

import numpy as np

from alphaleak import (
    Alphabet,
    Order,
    Pmf,
    OptimizerConfig,
    expectation_ratio_objective,
    indicator_witness,
    point_mass_witness,
    relative_entropy_gap,
    renyi_divergence,
    verify_guessing_characterization,
    verify_log_gain_ratio,
)
from alphaleak.guessing import builtin_gains

ab = Alphabet(("a", "b"))
p = Pmf(ab, [0.5, 0.5])
q = Pmf(ab, [0.25, 0.75])
target = renyi_divergence(p, q, Order.infinity())
print(f"Target: D_inf(p || q) = {target} bits\n")

gains = [g for g in builtin_gains([2.0, 5.0]) if g.regular]
report = verify_guessing_characterization(
    p, q, gains,
    m_schedule=(1, 10, 100, 1000),
    cfg=OptimizerConfig(restarts=4, max_iterations=400),
    include_channel_search=True,
)

print("Shattered-channel witnesses (achieved bits by split size m):")
for gain in gains:
    row = [w.achieved_bits for w in report.witnesses
           if w.gain == gain.name and w.kind == "shattered"]
    print(f"  {gain.name:>14}: " + "  ".join(f"{v:+.4f}" for v in row))

print("\nFree-form channel search (it never beats the construction):")
for w in report.witnesses:
    if w.kind == "optimized":
        print(f"  {w.gain:>14}: achieved {w.achieved_bits:+.4f} bits "
              f"at {w.m} outputs (gap {w.gap_bits:.4f})")

print(f"\nSpread across gains at the finest split: "
      f"{report.agnosticism_spread_bits:.4f} bits (gain-agnostic)")

# Two more variational forms with exactly optimal witnesses.
r = point_mass_witness(p, q)
f = indicator_witness(p, q)
print("\nExact witnesses of the auxiliary variational forms:")
print(f"  relative-entropy gap at the pivot point mass: "
      f"{relative_entropy_gap(p, q, r):.12f} bits")
print(f"  expectation ratio at the pivot indicator:     "
      f"{expectation_ratio_objective(p, q, f):.12f} bits")

# The log gain lives outside the admissible class yet the same supremum
# holds; its witnesses split the pivot instead, and the entropy ratio climbs
# like 1/log2(m*), i.e. painfully slowly.
print("\nLog-gain entropy-ratio witnesses (target ratio "
      f"{2.0 ** target:.1f}):")
for entry in verify_log_gain_ratio(p, q, [2**4, 2**10, 2**16, 2**20]).entries:
    print(f"  m* = 2^{int(np.log2(entry.m_star)):>2}: ratio {entry.ratio:.5f} "
          f"(off by {100 * entry.rel_error:.2f}%)")
