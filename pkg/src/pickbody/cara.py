"""Model domains (disc, polydisc) with Carathéodory quantities and
Pick-body membership oracles.

Pairwise Carathéodory distance on the polydisc is the coordinate maximum
of pseudohyperbolic distances (a classical fact, cross-checked in tests
by candidate-function maximization rather than trusted blindly). The
generalized distance with several prescribed zeros has no closed polydisc
form; only certified lower bounds are produced there. General bidisc
membership goes through a PSD feasibility solve of the two-term
decomposition (1 - w_i conj(w_j)) = (1 - l_i conj(l_j)) G1_ij +
(1 - m_i conj(m_j)) G2_ij.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pickbody import numlin
from pickbody._jit import kernels as _kern
from pickbody.errors import InvalidInput, PreconditionViolation
from pickbody.kernel_ball import Kernel, make_kernel, schur_scale, szego_matrix
from pickbody.moebius import moebius_distance
from pickbody.numlin import DEFAULT_TOL, ToleranceConfig
from pickbody.pick_disc import PickProblem, solvable

MEMBER = "member"
NONMEMBER = "nonmember"
UNDECIDED = "undecided"

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"

AFFINE_FEAS_TOL = 1e-7
PLATEAU_WINDOW = 500
PLATEAU_RTOL = 1e-12
INFEASIBLE_FACTOR = 10.0
DEFAULT_BUDGET = 20_000

POINT_SEPARATION = 1e-12


@dataclass(frozen=True)
class DomainModel:
    """Disc or polydisc(m); points are coordinate tuples of that length."""

    kind: str  # "disc" | "polydisc"
    dim: int = 1

    def __post_init__(self):
        if self.kind not in ("disc", "polydisc"):
            raise InvalidInput("domain kind must be 'disc' or 'polydisc'")
        if self.kind == "disc" and self.dim != 1:
            raise InvalidInput("the disc is one dimensional")
        if self.dim < 1:
            raise InvalidInput("dimension must be >= 1")


def disc() -> DomainModel:
    return DomainModel(kind="disc", dim=1)


def polydisc(dim: int) -> DomainModel:
    return DomainModel(kind="polydisc", dim=int(dim))


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # "feasible" | "infeasible" | "undecided"
    iterations: int
    residual: float
    witnesses: Optional[tuple] = None  # (G1, G2) PSD matrices when feasible


def as_domain_point(domain: DomainModel, point) -> tuple:
    coords = tuple(complex(c) for c in (point if hasattr(point, "__len__") else (point,)))
    if len(coords) != domain.dim:
        raise InvalidInput(
            f"expected {domain.dim} coordinates, got {len(coords)}")
    for c in coords:
        if abs(c) >= 1.0:
            raise InvalidInput("domain points must be strictly interior")
    return coords


def _distinct_points(points) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if max(abs(a - b) for a, b in zip(points[i], points[j])) <= POINT_SEPARATION:
                raise InvalidInput("points must be mutually distinct")


def cara_distance(domain: DomainModel, z, w) -> float:
    """Carathéodory pseudodistance between two interior points."""
    zc = as_domain_point(domain, z)
    wc = as_domain_point(domain, w)
    return max(moebius_distance(a, b) for a, b in zip(zc, wc))


def gen_cara_disc(z1: complex, zeros) -> float:
    """Exact generalized distance on the disc: the product of
    pseudohyperbolic distances from z1 to the prescribed zeros."""
    z1 = complex(z1)
    if abs(z1) >= 1.0:
        raise InvalidInput("z1 must be interior")
    value = 1.0
    for zero in zeros:
        zero = complex(zero)
        if abs(zero) >= 1.0:
            raise InvalidInput("zeros must be interior")
        value *= moebius_distance(z1, zero)
    return value


def gen_cara_lower_bound(domain: DomainModel, z1, zeros,
                         budget: int = 4096) -> float:
    """Certified lower bound for the generalized distance on a polydisc.

    Candidates are products of one coordinate Blaschke factor per
    prescribed zero; every coordinate assignment (up to budget, in a fixed
    enumeration order) is tried and each candidate is re-certified to
    vanish at all zeros. The bound is exact when all points share the
    off-coordinate values of a one-variable slice.
    """
    z1c = as_domain_point(domain, z1)
    zero_pts = [as_domain_point(domain, z) for z in zeros]
    if not zero_pts:
        return 1.0
    m = domain.dim

    def factor(anchor: complex, value: complex) -> complex:
        return (value - anchor) / (1.0 - anchor.conjugate() * value)

    def candidate(point, assignment) -> complex:
        out = 1.0 + 0.0j
        for zero, coord in zip(zero_pts, assignment):
            out *= factor(zero[coord], point[coord])
        return out

    best = 0.0
    for assignment in itertools.islice(
            itertools.product(range(m), repeat=len(zero_pts)), max(budget, 1)):
        if any(abs(candidate(zero, assignment)) > 1e-10 for zero in zero_pts):
            continue
        best = max(best, abs(candidate(z1c, assignment)))
    return best


def _pair_membership(domain: DomainModel, z, w,
                     tol: ToleranceConfig) -> str:
    """Exact two-point verdict: interior pairs obey the distance bound;
    boundary values force an equal unimodular pair."""
    w1, w2 = complex(w[0]), complex(w[1])
    band = tol.boundary_tol
    mod1, mod2 = abs(w1), abs(w2)
    if mod1 > 1.0 + band or mod2 > 1.0 + band:
        return NONMEMBER
    on_boundary1 = mod1 >= 1.0 - band
    on_boundary2 = mod2 >= 1.0 - band
    if on_boundary1 or on_boundary2:
        if on_boundary1 and on_boundary2 and abs(w1 - w2) <= band:
            return MEMBER
        return NONMEMBER
    cstar = cara_distance(domain, z[0], z[1])
    return MEMBER if moebius_distance(w1, w2) <= cstar + band else NONMEMBER


def pick_body_membership(domain: DomainModel, z, w,
                         tol: ToleranceConfig = DEFAULT_TOL,
                         budget: int = DEFAULT_BUDGET) -> str:
    """Is w an achievable value tuple at the points z?

    Disc: exact through Pick solvability. Two points: exact through the
    pairwise distance characterization. Bidisc with n >= 3: decomposition
    feasibility, three valued. Larger polydiscs with n >= 3 are refused
    (feasibility failure would certify nothing there).
    """
    points = [as_domain_point(domain, p) for p in z]
    _distinct_points(points)
    targets = tuple(complex(x) for x in w)
    if len(targets) != len(points):
        raise InvalidInput("need one target per point")
    n = len(points)

    if domain.kind == "disc":
        nodes = tuple(p[0] for p in points)
        if any(abs(t) > 1.0 + 1e-12 for t in targets):
            return NONMEMBER
        return MEMBER if solvable(PickProblem(nodes=nodes, targets=targets), tol) \
            else NONMEMBER

    if n == 1:
        return MEMBER if abs(targets[0]) <= 1.0 + tol.boundary_tol else NONMEMBER
    if n == 2:
        return _pair_membership(domain, points, targets, tol)
    if domain.dim != 2:
        raise InvalidInput(
            "membership with n >= 3 is only decided on the bidisc")

    if any(abs(t) > 1.0 + 1e-12 for t in targets):
        return NONMEMBER
    lam = tuple(p[0] for p in points)
    mu = tuple(p[1] for p in points)
    result = agler_pick_feasibility(lam, mu, targets, tol, budget)
    if result.status == FEASIBLE:
        return MEMBER
    if result.status == INFEASIBLE:
        return NONMEMBER
    return UNDECIDED


def agler_pick_feasibility(lam, mu, w, tol: ToleranceConfig = DEFAULT_TOL,
                           budget: int = DEFAULT_BUDGET) -> FeasibilityResult:
    """Search for PSD G1, G2 realizing the two-term bidisc decomposition.

    Alternating (Dykstra) projections between the PSD product cone and the
    affine constraint. Feasible returns the PSD witnesses (affine residual
    <= 1e-7); Infeasible is declared only when the residual plateaus above
    ten times that; everything else is Undecided at budget.
    """
    if budget <= 0:
        raise InvalidInput("budget must be positive")
    lam_v = np.asarray([complex(x) for x in lam], dtype=np.complex128)
    mu_v = np.asarray([complex(x) for x in mu], dtype=np.complex128)
    w_v = np.asarray([complex(x) for x in w], dtype=np.complex128)
    if not (lam_v.shape == mu_v.shape == w_v.shape):
        raise InvalidInput("coordinate and target lengths must agree")
    if np.any(np.abs(lam_v) >= 1.0) or np.any(np.abs(mu_v) >= 1.0):
        raise InvalidInput("bidisc points must be strictly interior")
    points = list(zip(lam_v, mu_v))
    _distinct_points(points)

    e1 = 1.0 - np.outer(lam_v, lam_v.conj())
    e2 = 1.0 - np.outer(mu_v, mu_v.conj())
    target = 1.0 - np.outer(w_v, w_v.conj())
    status_code, g1, g2, residual, iters = _kern.dykstra_two_term(
        e1, e2, target, budget, AFFINE_FEAS_TOL, PLATEAU_WINDOW,
        PLATEAU_RTOL, INFEASIBLE_FACTOR)
    status = {0: FEASIBLE, 1: INFEASIBLE, 2: UNDECIDED}[int(status_code)]
    witnesses = (g1, g2) if status == FEASIBLE else None
    return FeasibilityResult(status=status, iterations=int(iters),
                             residual=float(residual), witnesses=witnesses)


def _is_admissible(matrix: np.ndarray, lam, mu,
                   tol: ToleranceConfig) -> bool:
    e1 = 1.0 - np.outer(lam, np.conj(lam))
    e2 = 1.0 - np.outer(mu, np.conj(mu))
    return numlin.is_psd(matrix * e1, tol) and numlin.is_psd(matrix * e2, tol)


def sample_admissible_kernels(lam, mu, count: int, seed: int = 0,
                              tol: ToleranceConfig = DEFAULT_TOL) -> list:
    """Seeded admissible kernels for the bidisc points (l_j, m_j).

    Every sample is a Schur product of the two coordinate Szegő matrices
    with a random PSD modulation of unit diagonal, which keeps both
    coordinate scalings PSD exactly; coordinate Szegő matrices themselves
    are included when they happen to be admissible. Each candidate is
    re-verified before being returned.
    """
    lam_v = np.asarray([complex(x) for x in lam], dtype=np.complex128)
    mu_v = np.asarray([complex(x) for x in mu], dtype=np.complex128)
    n = lam_v.size
    base = (1.0 / (1.0 - np.outer(lam_v, lam_v.conj()))
            / (1.0 - np.outer(mu_v, mu_v.conj())))
    rng = np.random.default_rng(seed)
    out = []

    def consider(matrix):
        matrix = numlin.hermitize(matrix)
        evals, _ = _kern.jacobi_eigh(matrix)
        if evals[0] <= tol.psd_tol * max(1.0, numlin.max_abs(matrix)):
            return
        if _is_admissible(matrix, lam_v, mu_v, tol):
            out.append(make_kernel(matrix))

    consider(base)
    for coords in (lam_v, mu_v):
        try:
            consider(szego_matrix(coords))
        except InvalidInput:
            pass
    while len(out) < count:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        gram = numlin.hermitize(g.conj().T @ g) + 1e-3 * np.eye(n)
        d = np.sqrt(np.real(np.diag(gram)))
        modulation = gram / np.outer(d, d)
        consider(base * modulation)
    return out[:count]


def admissible_separation(domain: DomainModel, z, w,
                          budget: int = 64, seed: int = 0,
                          tol: ToleranceConfig = DEFAULT_TOL) -> Optional[Kernel]:
    """Find an admissible kernel whose ball excludes the non-member w.

    For two points the coordinate Szegő matrix of the distance-maximizing
    coordinate is tried first (it is admissible there and its ball is the
    pairwise distance body); otherwise seeded admissible samples are
    scanned. Returns None when the budget is exhausted.
    """
    if domain.kind != "polydisc" or domain.dim != 2:
        raise InvalidInput("separation search runs on the bidisc")
    verdict = pick_body_membership(domain, z, w, tol)
    if verdict != NONMEMBER:
        raise PreconditionViolation(
            f"separation requires a non-member, got {verdict!r}")
    points = [as_domain_point(domain, p) for p in z]
    lam = np.asarray([p[0] for p in points], dtype=np.complex128)
    mu = np.asarray([p[1] for p in points], dtype=np.complex128)
    targets = tuple(complex(x) for x in w)

    candidates = []
    if len(points) == 2:
        d1 = moebius_distance(lam[0], lam[1])
        d2 = moebius_distance(mu[0], mu[1])
        ordered = (lam, mu) if d1 >= d2 else (mu, lam)
        for coords in ordered:
            try:
                matrix = szego_matrix(coords)
            except InvalidInput:
                continue
            if _is_admissible(matrix, lam, mu, tol):
                candidates.append(make_kernel(matrix))
    remaining = max(budget - len(candidates), 0)
    if remaining:
        candidates.extend(sample_admissible_kernels(lam, mu, remaining, seed, tol))

    for kernel in candidates[:budget]:
        if not numlin.is_psd(schur_scale(kernel, targets), tol):
            return kernel
    return None
