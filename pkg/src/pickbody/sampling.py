"""Seeded random generators shared by the verification suites and tests.

Every verifier takes an explicit seed and derives independent substreams
with numpy SeedSequence, so verdicts are deterministic regardless of
evaluation order.
"""

from __future__ import annotations

import numpy as np

from pickbody.kernel_ball import Kernel, make_kernel
from pickbody.moebius import BlaschkeProduct, DiscAutomorphism


def substream(*entropy) -> np.random.Generator:
    """Deterministic child generator for a tuple of integer labels."""
    return np.random.default_rng(np.random.SeedSequence(list(entropy)))


def random_disc_point(rng: np.random.Generator, rmax: float = 0.95) -> complex:
    r = rmax * np.sqrt(rng.uniform())
    return r * np.exp(2j * np.pi * rng.uniform())


def random_distinct_nodes(rng: np.random.Generator, n: int,
                          rmax: float = 0.8,
                          separation: float = 0.1) -> tuple:
    """Interior nodes with a pairwise pseudohyperbolic-safe gap."""
    nodes = []
    while len(nodes) < n:
        z = random_disc_point(rng, rmax)
        if all(abs(z - other) > separation for other in nodes):
            nodes.append(z)
    return tuple(nodes)


def random_unimodular(rng: np.random.Generator) -> complex:
    return np.exp(2j * np.pi * rng.uniform())


def random_automorphism(rng: np.random.Generator,
                        rmax: float = 0.8) -> DiscAutomorphism:
    return DiscAutomorphism(center=random_disc_point(rng, rmax),
                            rotation=random_unimodular(rng))


def random_blaschke(rng: np.random.Generator, degree: int,
                    rmax: float = 0.75) -> BlaschkeProduct:
    zeros = tuple(random_disc_point(rng, rmax) for _ in range(degree))
    return BlaschkeProduct(constant=random_unimodular(rng), zeros=zeros)


def random_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    """Nonzero complex direction used for boundary sampling."""
    while True:
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if np.max(np.abs(v)) > 1e-12:
            return v


def random_pd_kernel(rng: np.random.Generator, n: int,
                     ridge: float = 0.05) -> Kernel:
    """Generic positive definite kernel from a random Gram matrix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return make_kernel(g.conj().T @ g + ridge * np.eye(n))


def random_bidisc_points(rng: np.random.Generator, n: int,
                         rmax: float = 0.85,
                         separation: float = 0.05) -> list:
    points = []
    while len(points) < n:
        p = (random_disc_point(rng, rmax), random_disc_point(rng, rmax))
        if all(max(abs(p[0] - q[0]), abs(p[1] - q[1])) > separation
               for q in points):
            points.append(p)
    return points
