"""Complex Hermitian linear algebra for small dense matrices.

Eigendecomposition (cyclic complex Jacobi), PSD and rank tests with
explicit relative tolerances, and Gram column factorization. All
tolerances are relative to ``max(1, max-abs-entry)`` so that downstream
positivity tests behave uniformly across kernel scales.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from pickbody._jit import kernels as _kern
from pickbody.errors import InvalidInput, PreconditionViolation


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances used by positivity, rank and boundary tests."""

    psd_tol: float = 1e-10
    rank_tol: float = 1e-8
    boundary_tol: float = 1e-8

    def __post_init__(self):
        for name in ("psd_tol", "rank_tol", "boundary_tol"):
            if getattr(self, name) < 0:
                raise InvalidInput(f"{name} must be nonnegative")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues with matching orthonormal column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Validate and convert to a finite 2-d complex128 array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInput("expected a nonempty 2-d matrix")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInput("matrix has non-finite entries")
    return arr


def hermitize(a) -> np.ndarray:
    """Return the Hermitian part (A + A*)/2 of a square matrix.

    Construction-time symmetrization kills floating asymmetry so that
    stored matrices satisfy A[i, j] == conj(A[j, i]) exactly.
    """
    arr = as_complex_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInput("matrix is not square")
    return 0.5 * (arr + arr.conj().T)


def max_abs(a) -> float:
    return float(np.max(np.abs(np.asarray(a))))


def _scale(a: np.ndarray) -> float:
    return max(1.0, max_abs(a))


def hermitian_eigen(a) -> EigenResult:
    """Full spectrum and orthonormal eigenbasis of a Hermitian matrix."""
    h = hermitize(a)
    evals, vecs = _kern.jacobi_eigh(h)
    return EigenResult(eigenvalues=evals, eigenvectors=vecs)


def is_psd(a, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the smallest eigenvalue is >= -psd_tol * max(1, ||A||_max)."""
    h = hermitize(a)
    evals, _ = _kern.jacobi_eigh(h)
    return bool(evals[0] >= -tol.psd_tol * _scale(h))


def numeric_rank(a, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Count of eigenvalues above rank_tol * max(1, ||A||_max).

    Requires a PSD input (within psd_tol).
    """
    h = hermitize(a)
    evals, _ = _kern.jacobi_eigh(h)
    s = _scale(h)
    if evals[0] < -tol.psd_tol * s:
        raise PreconditionViolation("numeric_rank requires a PSD matrix")
    return int(np.count_nonzero(evals > tol.rank_tol * s))


def gram_columns(k, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Factor a positive definite K as G* G = K.

    Column j of G is the frame vector whose pairwise inner products
    reproduce K. Singular or indefinite input is rejected.
    """
    h = hermitize(k)
    evals, vecs = _kern.jacobi_eigh(h)
    if evals[0] <= tol.psd_tol * _scale(h):
        raise PreconditionViolation("gram_columns requires a positive definite matrix")
    return (np.sqrt(evals)[:, None] * vecs.conj().T)
