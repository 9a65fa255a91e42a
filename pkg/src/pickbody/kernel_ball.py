"""Kernel balls: membership, the multiplication operator T_w, boundary
scaling, defect ranks, subkernels, Szegő forms and boundary-point
classification.

A kernel is a labeled positive definite matrix K; its ball is the set of
value tuples w for which the entrywise-scaled matrix
((1 - w_i conj(w_j)) K_ij) stays positive semidefinite. Equivalently it is
the unit ball of the operator norm of T_w, the operator that multiplies
the j-th Gram frame vector of K by conj(w_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from pickbody import numlin
from pickbody._jit import kernels as _kern
from pickbody.errors import (
    InvalidInput,
    NoBoundaryScale,
    PreconditionViolation,
    ReconstructionFailure,
)
from pickbody.moebius import moebius_distance
from pickbody.numlin import DEFAULT_TOL, ToleranceConfig

NODE_SEPARATION = 1e-12
UNIT_DIAGONAL_TOL = 1e-9


@dataclass(frozen=True)
class Kernel:
    """Labeled positive definite matrix defining a kernel ball."""

    matrix: np.ndarray
    labels: tuple
    normalized: bool

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TupleIndex:
    """Strictly increasing 1-based index tuple selecting a subconfiguration."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise InvalidInput("index tuple must be nonempty")
        if idx[0] < 1:
            raise InvalidInput("indices are 1-based")
        for a, b in zip(idx, idx[1:]):
            if b <= a:
                raise InvalidInput("indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class DefectReport:
    """Operator norm of T_w plus the defect rank of I - T_w* T_w.

    defect_rank is only defined on (or inside) the unit sphere of the
    operator norm; it is None when ||T_w|| exceeds 1 beyond boundary_tol.
    """

    operator_norm: float
    defect_rank: Optional[int]
    boundary: bool


@dataclass(frozen=True)
class SzegoForm:
    """Canonical node/phase data recovered from a normalized kernel."""

    alpha: tuple
    theta: tuple


@dataclass(frozen=True)
class SingularClassification:
    kind: str  # "rank1" | "rank2"
    defect_rank: int
    c: Optional[tuple] = None
    alpha_kernel: Optional["Kernel"] = None


def make_kernel(matrix, labels=None, tol: ToleranceConfig = DEFAULT_TOL) -> Kernel:
    """Symmetrize, validate positive definiteness and wrap a kernel matrix."""
    h = numlin.hermitize(matrix)
    n = h.shape[0]
    evals, _ = _kern.jacobi_eigh(h)
    if evals[0] <= tol.psd_tol * max(1.0, numlin.max_abs(h)):
        raise InvalidInput("kernel matrix must be positive definite")
    if labels is None:
        labels = tuple(str(i + 1) for i in range(n))
    else:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InvalidInput("label count must match the dimension")
    normalized = bool(np.max(np.abs(np.diag(h) - 1.0)) <= UNIT_DIAGONAL_TOL)
    h.setflags(write=False)
    return Kernel(matrix=h, labels=labels, normalized=normalized)


def as_tuple_index(index) -> TupleIndex:
    if isinstance(index, TupleIndex):
        return index
    return TupleIndex(indices=tuple(index))


def _as_vector(w, n: int) -> np.ndarray:
    arr = np.asarray(tuple(complex(x) for x in w), dtype=np.complex128)
    if arr.shape != (n,):
        raise InvalidInput(f"expected a length-{n} tuple of values")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInput("values must be finite")
    return arr


def schur_scale(kernel: Kernel, w) -> np.ndarray:
    """Entrywise product ((1 - w_i conj(w_j)) K_ij), symmetrized."""
    vec = _as_vector(w, kernel.n)
    return numlin.hermitize((1.0 - np.outer(vec, vec.conj())) * kernel.matrix)


def membership(kernel: Kernel, w, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff w lies in the kernel ball (scaled matrix PSD)."""
    return numlin.is_psd(schur_scale(kernel, w), tol)


def defect(kernel: Kernel, w, tol: ToleranceConfig = DEFAULT_TOL) -> DefectReport:
    """Operator norm of T_w and, on the closed ball, the defect rank.

    The norm is the largest eigenvalue of the K-weighted pencil
    (diag(w) K diag(conj(w)), K), computed in the whitened frame
    S = V diag(eigs)^{-1/2}; I - S* diag(w) K diag(conj(w)) S equals
    I - T_w* T_w exactly, so its spectrum yields the defect rank without
    inverting a Gram factor.
    """
    kmat = kernel.matrix
    n = kernel.n
    vec = _as_vector(w, n)
    evals, vecs = _kern.jacobi_eigh(kmat)
    if evals[0] <= tol.psd_tol * max(1.0, numlin.max_abs(kmat)):
        raise PreconditionViolation("kernel is numerically singular")
    s = vecs * (evals ** -0.5)[None, :]
    a = (vec[:, None] * kmat) * vec.conj()[None, :]
    wmat = numlin.hermitize(s.conj().T @ a @ s)
    mu, _ = _kern.jacobi_eigh(wmat)
    operator_norm = float(np.sqrt(max(mu[-1], 0.0)))
    boundary = abs(operator_norm - 1.0) <= tol.boundary_tol

    defect_rank = None
    if operator_norm <= 1.0 + tol.boundary_tol:
        gaps = 1.0 - mu
        scale = max(1.0, float(np.max(np.abs(gaps))))
        defect_rank = int(np.count_nonzero(gaps > tol.rank_tol * scale))
    return DefectReport(operator_norm=operator_norm, defect_rank=defect_rank,
                        boundary=boundary)


def boundary_scale(kernel: Kernel, w, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """The r* > 0 with r* . w on the ball boundary; equals 1 / ||T_w||."""
    vec = _as_vector(w, kernel.n)
    if np.all(vec == 0):
        raise NoBoundaryScale("the zero tuple stays interior under scaling")
    report = defect(kernel, vec, tol)
    if report.operator_norm == 0.0:
        raise NoBoundaryScale("operator norm vanished for a nonzero tuple")
    return 1.0 / report.operator_norm


def restrict(kernel: Kernel, index) -> Kernel:
    """Principal subkernel on a strictly increasing 1-based index tuple."""
    idx = as_tuple_index(index)
    if idx.indices[-1] > kernel.n:
        raise InvalidInput("index exceeds the kernel dimension")
    sel = [i - 1 for i in idx.indices]
    sub = kernel.matrix[np.ix_(sel, sel)]
    labels = tuple(kernel.labels[i] for i in sel)
    return make_kernel(sub, labels=labels)


def project(w, index) -> tuple:
    """Coordinate projection of a value tuple onto the index tuple."""
    idx = as_tuple_index(index)
    seq = tuple(w)
    if idx.indices[-1] > len(seq):
        raise InvalidInput("index exceeds the tuple length")
    return tuple(complex(seq[i - 1]) for i in idx.indices)


def _validate_nodes(alpha) -> np.ndarray:
    arr = np.asarray(tuple(complex(a) for a in alpha), dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidInput("need at least one node")
    if np.any(np.abs(arr) >= 1.0):
        raise InvalidInput("nodes must lie in the open disc")
    for i in range(arr.size):
        for j in range(i + 1, arr.size):
            if abs(arr[i] - arr[j]) <= NODE_SEPARATION:
                raise InvalidInput("nodes must be mutually distinct")
    return arr


def szego_matrix(alpha) -> np.ndarray:
    """Unnormalized Szegő matrix 1 / (1 - a_i conj(a_j)) on distinct nodes."""
    arr = _validate_nodes(alpha)
    return numlin.hermitize(1.0 / (1.0 - np.outer(arr, arr.conj())))


def szego_kernel(alpha, theta=None) -> Kernel:
    """Normalized, phase-modulated Szegő-form kernel.

    Entry (l, m) is e^{i(theta_l - theta_m)} sqrt(1-|a_l|^2) sqrt(1-|a_m|^2)
    / (1 - a_l conj(a_m)); the diagonal is identically one. Its ball is the
    disc Pick body of the nodes.
    """
    arr = _validate_nodes(alpha)
    if theta is None:
        th = np.zeros(arr.size)
    else:
        th = np.asarray([float(t) for t in theta], dtype=np.float64)
        if th.shape != arr.shape:
            raise InvalidInput("theta length must match alpha")
    weights = np.sqrt(1.0 - np.abs(arr) ** 2)
    base = np.outer(weights, weights) / (1.0 - np.outer(arr, arr.conj()))
    phases = np.exp(1j * (th[:, None] - th[None, :]))
    return make_kernel(phases * base)


def _embed_third_point(m01: float, r: float, rho: float):
    """Intersect |z| = r with the pseudohyperbolic circle of radius rho
    around the real point m01. Returns (x, y) with y >= 0, or None."""
    a = m01
    den = 2.0 * a * (1.0 - rho * rho)
    if abs(den) < 1e-15:
        return None
    x = (r * r * (1.0 - rho * rho * a * a) + a * a - rho * rho) / den
    ysq = r * r - x * x
    if ysq < -1e-9:
        return None
    return x, float(np.sqrt(max(ysq, 0.0)))


def _embed_remaining(alpha, dist, k: int):
    """Extend a partial embedding to index k (0-based, k >= 3) using
    distances to the anchors; candidates are disambiguated against every
    already-placed point."""
    cand = _embed_third_point(alpha[1].real, dist[0, k], dist[1, k])
    if cand is None:
        return None
    x, y = cand
    best = None
    best_err = np.inf
    for point in {complex(x, y), complex(x, -y)}:
        if abs(point) >= 1.0:
            continue
        err = 0.0
        for j in range(2, k):
            err = max(err, abs(moebius_distance(point, alpha[j]) - dist[j, k]))
        if err < best_err:
            best_err = err
            best = point
    if best is None or best_err > 1e-5:
        return None
    return best


def szego_recognition(kernel: Kernel, tol: ToleranceConfig = DEFAULT_TOL,
                      match_tol: float = 1e-7) -> Optional[SzegoForm]:
    """Recover canonical nodes and phases whose Szegő form equals the kernel.

    The embedding fixes alpha_1 = 0 and alpha_2 real positive (the
    automorphism freedom of a disc Pick body); phases come from the first
    row, and the candidate is accepted only if the rebuilt matrix matches
    entrywise within match_tol. Returns None when the kernel carries no
    such form (zero off-diagonal entries, failed embedding, or phases that
    are not of difference form).
    """
    if not kernel.normalized:
        raise InvalidInput("recognition requires a unit-diagonal kernel")
    k = kernel.matrix
    n = kernel.n
    if n == 1:
        return SzegoForm(alpha=(0j,), theta=(0.0,))

    absk = np.abs(k)
    for i in range(n):
        for j in range(i + 1, n):
            if absk[i, j] < 1e-12 or absk[i, j] >= 1.0:
                return None
    dist = np.sqrt(np.clip(1.0 - absk ** 2, 0.0, 1.0))

    third_candidates = [None]
    if n >= 3:
        cand = _embed_third_point(dist[0, 1], dist[0, 2], dist[1, 2])
        if cand is None:
            return None
        x, y = cand
        third_candidates = [complex(x, y)]
        if y > 1e-9:
            third_candidates.append(complex(x, -y))

    for third in third_candidates:
        alpha = np.zeros(n, dtype=np.complex128)
        alpha[1] = dist[0, 1]
        ok = True
        if third is not None:
            if abs(third) >= 1.0:
                continue
            alpha[2] = third
        for idx in range(3, n):
            point = _embed_remaining(alpha, dist, idx)
            if point is None:
                ok = False
                break
            alpha[idx] = point
        if not ok:
            continue

        theta = np.zeros(n)
        theta[1:] = -np.angle(k[0, 1:])
        try:
            candidate = szego_kernel(alpha, theta)
        except InvalidInput:
            continue
        if numlin.max_abs(candidate.matrix - k) <= match_tol:
            return SzegoForm(alpha=tuple(alpha), theta=tuple(theta))
    return None


def singular_classify(kernel: Kernel, alpha,
                      tol: ToleranceConfig = DEFAULT_TOL) -> SingularClassification:
    """Classify an interior boundary point of a 3-dimensional kernel ball.

    Defect rank 1 recovers the Szegő form K_ij = conj(c_i) c_j /
    (1 - a_i conj(a_j)) (the scaled matrix is the rank-1 Gram of c), with
    the node kernel of alpha attached; defect rank 2 certifies a smooth
    point.
    """
    if kernel.n != 3:
        raise InvalidInput("classification is defined for 3-point kernels")
    vec = _as_vector(alpha, 3)
    if np.any(np.abs(vec) >= 1.0):
        raise PreconditionViolation("the point must lie in the open polydisc")
    report = defect(kernel, vec, tol)
    if not report.boundary:
        raise PreconditionViolation(
            f"||T_w|| = {report.operator_norm:.6g} is not on the boundary")
    rank = report.defect_rank if report.defect_rank is not None else 3
    if rank >= 3:
        raise PreconditionViolation("defect rank 3 contradicts a boundary point")

    if rank == 2:
        return SingularClassification(kind="rank2", defect_rank=2)

    scaled = schur_scale(kernel, vec)
    evals, vecs = _kern.jacobi_eigh(scaled)
    u = np.sqrt(max(evals[-1], 0.0)) * vecs[:, -1]
    c = u.conj()
    rebuilt = np.outer(c.conj(), c) / (1.0 - np.outer(vec, vec.conj()))
    residual = numlin.max_abs(rebuilt - kernel.matrix)
    if residual > 1e-7:
        raise ReconstructionFailure(
            f"rank-1 reconstruction residual {residual:.3g} exceeds 1e-7")
    for i in range(3):
        for j in range(i + 1, 3):
            if moebius_distance(vec[i], vec[j]) <= 1e-9:
                raise ReconstructionFailure("recovered nodes are not distinct")
    alpha_kernel = make_kernel(szego_matrix(vec), labels=kernel.labels)
    return SingularClassification(kind="rank1", defect_rank=1, c=tuple(c),
                                  alpha_kernel=alpha_kernel)
