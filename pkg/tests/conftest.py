"""Shared instance generators for randomized property tests.

All randomness is seeded; "full support" is enforced by mixing a Dirichlet
draw with the uniform distribution, which puts a hard floor under every mass.
The floors keep witness constructions at finite split sizes inside the
tolerances the tests assert (poorly conditioned instances converge like
1/m^(alpha-1) scaled by inverse pivot masses).
"""

import numpy as np

from alphaleak.prob import Alphabet, Channel, Joint, Pmf


def generic_alphabet(size: int, prefix: str = "s") -> Alphabet:
    return Alphabet(tuple(f"{prefix}{i}" for i in range(size)))


def floored_simplex(rng: np.random.Generator, size: int, floor: float = 0.0) -> np.ndarray:
    """Dirichlet(1) point mixed toward uniform so that every mass >= floor."""
    if floor * size >= 1.0:
        raise ValueError(f"floor {floor} infeasible for size {size}")
    base = rng.dirichlet(np.ones(size))
    return (1.0 - floor * size) * base + floor


def random_pmf(rng, size, floor=0.0, alphabet=None) -> Pmf:
    return Pmf(alphabet or generic_alphabet(size), floored_simplex(rng, size, floor))


def random_pair(rng, size, p_floor=0.0, q_floor=0.0) -> tuple[Pmf, Pmf]:
    alphabet = generic_alphabet(size)
    return (
        Pmf(alphabet, floored_simplex(rng, size, p_floor)),
        Pmf(alphabet, floored_simplex(rng, size, q_floor)),
    )


def random_channel(rng, n_in, n_out, floor=0.0) -> Channel:
    rows = np.vstack([floored_simplex(rng, n_out, floor) for _ in range(n_in)])
    return Channel(generic_alphabet(n_in, "x"), generic_alphabet(n_out, "y"), rows)


def random_joint(rng, nx, ny, mix=0.0) -> Joint:
    flat = rng.dirichlet(np.ones(nx * ny))
    mass = (1.0 - mix) * flat.reshape(nx, ny) + mix / (nx * ny)
    return Joint(generic_alphabet(nx, "x"), generic_alphabet(ny, "y"), mass)


def product_joint(rng, nx, ny, floor=0.05) -> Joint:
    px = floored_simplex(rng, nx, floor)
    py = floored_simplex(rng, ny, floor)
    return Joint(generic_alphabet(nx, "x"), generic_alphabet(ny, "y"), np.outer(px, py))


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {status}", flush=True)
