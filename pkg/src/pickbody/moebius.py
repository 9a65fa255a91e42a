"""Unit-disc geometry: pseudohyperbolic distance, automorphisms and finite
Blaschke products.

Disc points are plain complex scalars. Interior means |z| < 1 - boundary_tol
for the configured tolerance; the closed disc allows |z| <= 1 + 1e-12 of
floating slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pickbody.errors import (
    DegenerateBoundaryPair,
    InvalidInput,
    ReconstructionFailure,
)

CLOSED_DISC_SLACK = 1e-12


def in_closed_disc(z: complex) -> bool:
    return abs(z) <= 1.0 + CLOSED_DISC_SLACK


def is_interior(z: complex, boundary_tol: float = 1e-8) -> bool:
    return abs(z) < 1.0 - boundary_tol


def moebius_distance(a: complex, b: complex) -> float:
    """Pseudohyperbolic distance |(a - b) / (1 - conj(a) b)| on the disc.

    Undefined exactly when a and b are the same boundary point (0/0).
    """
    a = complex(a)
    b = complex(b)
    den = 1.0 - a.conjugate() * b
    if abs(den) < 1e-14:
        raise DegenerateBoundaryPair("equal boundary points have no distance")
    return min(abs((a - b) / den), 1.0)


@dataclass(frozen=True)
class DiscAutomorphism:
    """z -> rotation * (z - center) / (1 - conj(center) z)."""

    center: complex
    rotation: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(self.center) >= 1.0:
            raise InvalidInput("automorphism center must be interior")
        if abs(abs(self.rotation) - 1.0) > 1e-9:
            raise InvalidInput("rotation must be unimodular")

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        return self.rotation * (z - self.center) / (1.0 - self.center.conjugate() * z)

    def inverse(self) -> "DiscAutomorphism":
        return DiscAutomorphism(center=-self.rotation * self.center,
                                rotation=self.rotation.conjugate())


@dataclass(frozen=True)
class BlaschkeProduct:
    """Unimodular constant times a finite product of disc automorphism factors.

    Zeros are interior points listed with multiplicity; the degree is the
    number of zeros. Maps the closed disc to itself and the unit circle to
    the unit circle.
    """

    constant: complex
    zeros: tuple

    def __post_init__(self):
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > 1e-6:
            raise InvalidInput("Blaschke constant must be unimodular")
        object.__setattr__(self, "constant", c / abs(c))
        zs = tuple(complex(z) for z in self.zeros)
        for z in zs:
            if abs(z) >= 1.0:
                raise InvalidInput("Blaschke zeros must be interior points")
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        value = self.constant
        for a in self.zeros:
            value *= (z - a) / (1.0 - a.conjugate() * z)
        return value


def _schur_reduce(nodes, targets, rank, boundary_tol):
    """Peel `rank` interpolation nodes off, returning the peeled (node, target)
    pairs and the residual constant targets."""
    work_nodes = list(nodes)
    work_targets = list(targets)
    steps = []
    for _ in range(rank):
        lam0 = work_nodes[0]
        w0 = work_targets[0]
        if abs(w0) >= 1.0 - boundary_tol:
            raise ReconstructionFailure(
                "boundary target reached before the stated degree")
        steps.append((lam0, w0))
        new_targets = []
        for lam, w in zip(work_nodes[1:], work_targets[1:]):
            num = (w - w0) / (1.0 - w0.conjugate() * w)
            den = (lam - lam0) / (1.0 - lam0.conjugate() * lam)
            new_targets.append(num / den)
        work_nodes = work_nodes[1:]
        work_targets = new_targets
    return steps, work_nodes, work_targets


def _rational_from_steps(steps, constant):
    """Undo the Schur reduction, building numerator/denominator coefficient
    arrays (highest degree first)."""
    p = np.array([constant], dtype=np.complex128)
    q = np.array([1.0 + 0.0j], dtype=np.complex128)
    for lam, w in reversed(steps):
        bnum = np.array([1.0, -lam], dtype=np.complex128)
        bden = np.array([-lam.conjugate(), 1.0], dtype=np.complex128)
        new_p = np.polyadd(np.polymul(bnum, p), w * np.polymul(bden, q))
        new_q = np.polyadd(np.polymul(bden, q), w.conjugate() * np.polymul(bnum, p))
        p, q = new_p, new_q
    return p, q


def _poly_eval(coeffs, z):
    value = 0.0 + 0.0j
    for c in coeffs:
        value = value * z + c
    return value


def blaschke_from_nodes(nodes, targets, rank: int, *,
                        interpolation_tol: float = 1e-8,
                        boundary_tol: float = 1e-8) -> BlaschkeProduct:
    """Reconstruct the unique Blaschke product of the given degree through
    the interpolation data.

    Uses Schur-Nevanlinna parameter extraction: one node is peeled per
    step, and in the degenerate case the reduced targets collapse to a
    single unimodular constant after exactly `rank` steps. The caller is
    responsible for having checked PSD-ness and the rank; inconsistent
    data surfaces as ReconstructionFailure.
    """
    nodes = [complex(z) for z in nodes]
    targets = [complex(w) for w in targets]
    if len(nodes) != len(targets) or not nodes:
        raise InvalidInput("nodes and targets must be nonempty and match")
    if rank < 0 or rank >= len(nodes):
        raise InvalidInput("rank must satisfy 0 <= rank < node count")

    steps, rest_nodes, rest_targets = _schur_reduce(nodes, targets, rank,
                                                    boundary_tol)
    if not rest_targets:
        raise ReconstructionFailure("degree must stay below the node count")
    c = rest_targets[0]
    if abs(abs(c) - 1.0) > 1e-6:
        raise ReconstructionFailure("reduced problem is not a unimodular constant")
    for w in rest_targets[1:]:
        if abs(w - c) > 1e-6:
            raise ReconstructionFailure("reduced targets disagree")
    c = c / abs(c)

    p, q = _rational_from_steps(steps, c)
    coeff_scale = float(np.max(np.abs(p))) if len(p) else 0.0
    if coeff_scale == 0.0:
        raise ReconstructionFailure("degenerate numerator")
    trimmed = np.trim_zeros(np.where(np.abs(p) > 1e-12 * coeff_scale, p, 0.0),
                            trim="f")
    if len(trimmed) - 1 != rank:
        raise ReconstructionFailure("reconstructed degree does not match the rank")
    roots = np.roots(trimmed) if rank > 0 else np.array([], dtype=np.complex128)
    if np.any(np.abs(roots) >= 1.0):
        raise ReconstructionFailure("reconstructed zero escaped the open disc")

    # Fix the unimodular constant by matching the rational form at a probe
    # point away from the zeros.
    constant = None
    for probe in (0.0, 0.37, -0.29 + 0.41j, 0.55j, -0.63, 0.11 - 0.52j):
        probe = complex(probe)
        base = 1.0 + 0.0j
        for a in roots:
            base *= (probe - a) / (1.0 - a.conjugate() * probe)
        qval = _poly_eval(q, probe)
        if abs(base) > 1e-3 and abs(qval) > 1e-8:
            constant = _poly_eval(p, probe) / qval / base
            break
    if constant is None or abs(abs(constant) - 1.0) > 1e-6:
        raise ReconstructionFailure("could not normalize the unimodular constant")

    product = BlaschkeProduct(constant=constant, zeros=tuple(roots))
    for lam, w in zip(nodes, targets):
        if abs(product(lam) - w) > interpolation_tol:
            raise ReconstructionFailure("reconstruction fails to interpolate")
    return product
