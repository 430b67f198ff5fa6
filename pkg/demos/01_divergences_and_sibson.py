"""Divergences and Sibson information: the measurement layer.

Walks through the Renyi divergence family between two named distributions,
the order limits, and Sibson mutual information of a noisy channel.
"""

import numpy as np

from alphaleak import (
    Alphabet,
    Channel,
    Order,
    Pmf,
    limit_check_alpha_to_infinity,
    renyi_divergence,
    shannon_entropy,
    sibson_mi,
)

ab = Alphabet(("a", "b"))
p = Pmf(ab, [0.5, 0.5])
q = Pmf(ab, [0.25, 0.75])

print("Two binary distributions:")
print("  p =", p.mass, " q =", q.mass)
print("  H(p) =", shannon_entropy(p), "bits;  H(q) =", round(shannon_entropy(q), 6), "bits")

# The divergence family is non-decreasing in its order; order infinity is the
# log of the worst likelihood ratio, here log2(0.5/0.25) = 1 bit.
print("\nDivergence D_alpha(p || q) across orders:")
for order in (Order(0.5), Order.one(), Order(2), Order(10), Order.infinity()):
    label = "inf" if order.is_infinite else order.alpha
    print(f"  alpha = {label:>4}: {renyi_divergence(p, q, order):.6f} bits")

# The same climb, packaged for convergence checks.
alphas = [2, 5, 10, 50, 100]
values = limit_check_alpha_to_infinity(p, q, alphas)
print("\nApproach to the order-infinity value along alpha =", alphas)
print("  ", np.round(values, 6), "->", renyi_divergence(p, q, Order.infinity()))

# Disjoint supports are a meaningful answer, not an error.
print("\nDisjoint supports give an infinite divergence:")
print("  ", renyi_divergence(Pmf(ab, [1, 0]), Pmf(ab, [0, 1]), Order(2)))

# Sibson mutual information of a binary symmetric channel with 10% flips.
bsc = Channel(ab, ab, [[0.9, 0.1], [0.1, 0.9]])
print("\nSibson information of a 10%-flip channel under a uniform input:")
for order in (Order.one(), Order(2), Order(10), Order.infinity()):
    label = "inf" if order.is_infinite else order.alpha
    print(f"  alpha = {label:>4}: {sibson_mi(p, bsc, order):.6f} bits")
print("  (order infinity is log2(0.9 + 0.9) =", round(np.log2(1.8), 6), "bits)")
