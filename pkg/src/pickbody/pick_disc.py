"""Classical Pick interpolation on the unit disc.

Builds the Pick matrix, decides solvability, classifies the solution set
(none / unique of a given rank / many) and reconstructs the unique
Blaschke-product solution in the degenerate case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from pickbody import numlin
from pickbody.errors import InvalidInput, PreconditionViolation
from pickbody.moebius import (
    BlaschkeProduct,
    blaschke_from_nodes,
    in_closed_disc,
)
from pickbody.numlin import DEFAULT_TOL, ToleranceConfig

NODE_SEPARATION = 1e-12


@dataclass(frozen=True)
class PickProblem:
    """Distinct interior nodes with closed-disc targets."""

    nodes: tuple
    targets: tuple

    def __post_init__(self):
        nodes = tuple(complex(z) for z in self.nodes)
        targets = tuple(complex(w) for w in self.targets)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)
        if not nodes or len(nodes) != len(targets):
            raise InvalidInput("need n >= 1 nodes with matching targets")
        for z in nodes:
            if abs(z) >= 1.0:
                raise InvalidInput("nodes must lie in the open disc")
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                if abs(nodes[i] - nodes[j]) <= NODE_SEPARATION:
                    raise InvalidInput("nodes must be mutually distinct")
        for w in targets:
            if not in_closed_disc(w):
                raise InvalidInput("targets must lie in the closed disc")

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class SolutionClass:
    """Solution-set classification; rank is set only for the unique case."""

    kind: str  # "none" | "unique" | "many"
    rank: Optional[int] = None


def pick_matrix(problem: PickProblem) -> np.ndarray:
    """Hermitian matrix with entries (1 - w_i conj(w_j)) / (1 - l_i conj(l_j))."""
    lam = np.asarray(problem.nodes, dtype=np.complex128)
    w = np.asarray(problem.targets, dtype=np.complex128)
    num = 1.0 - np.outer(w, w.conj())
    den = 1.0 - np.outer(lam, lam.conj())
    return numlin.hermitize(num / den)


def solvable(problem: PickProblem, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return numlin.is_psd(pick_matrix(problem), tol)


def solution_count_class(problem: PickProblem,
                         tol: ToleranceConfig = DEFAULT_TOL) -> SolutionClass:
    """None when unsolvable, Unique(rank) when PSD and rank deficient,
    Many when positive definite.

    Near-threshold ranks resolve to Many so uniqueness is never claimed
    spuriously.
    """
    m = pick_matrix(problem)
    if not numlin.is_psd(m, tol):
        return SolutionClass(kind="none")
    rank = numlin.numeric_rank(m, tol)
    if rank < problem.n:
        return SolutionClass(kind="unique", rank=rank)
    return SolutionClass(kind="many")


def unique_solution(problem: PickProblem,
                    tol: ToleranceConfig = DEFAULT_TOL) -> BlaschkeProduct:
    """The Blaschke product of degree == rank through the data.

    Only valid when solution_count_class reports the unique case.
    """
    cls = solution_count_class(problem, tol)
    if cls.kind != "unique":
        raise PreconditionViolation(
            f"solution class is {cls.kind!r}, not unique")
    return blaschke_from_nodes(problem.nodes, problem.targets, cls.rank,
                               boundary_tol=tol.boundary_tol)


def extend_values(problem: PickProblem, extra_nodes,
                  tol: ToleranceConfig = DEFAULT_TOL) -> tuple:
    """Evaluate the unique solution at additional interior nodes."""
    product = unique_solution(problem, tol)
    return tuple(product(complex(z)) for z in extra_nodes)
