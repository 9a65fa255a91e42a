"""Hot numeric kernels.

Every function in this module is written in nopython-compatible numpy so
that the same source runs interpreted (pure numpy fallback) or compiled by
numba. Loading and optional compilation happen in ``pickbody._jit``; the
rest of the package never imports this module directly.

Matrices are complex128 and small (dim <= ~16); the eigensolver is a
cyclic complex Jacobi iteration, which is accurate to machine precision at
this scale and trivially compilable.
"""

import numpy as np

# Names rebound to their @njit versions when compilation is enabled.
JIT_KERNELS = ("jacobi_eigh", "min_eig_scaled", "psd_project", "dykstra_two_term")

# Dykstra status codes.
DYKSTRA_FEASIBLE = 0
DYKSTRA_INFEASIBLE = 1
DYKSTRA_UNDECIDED = 2


def jacobi_eigh(a):
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    The caller must pass an exactly Hermitian complex128 array. Returns
    eigenvalues in ascending order and the matching orthonormal column
    eigenvectors.
    """
    n = a.shape[0]
    a = a.copy()
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return np.array([a[0, 0].real]), v

    anorm = 0.0
    for i in range(n):
        for j in range(n):
            m = abs(a[i, j])
            if m > anorm:
                anorm = m
    if anorm == 0.0:
        return np.zeros(n), v

    skip = 1e-18 * anorm
    off_target = (1e-15 * anorm) ** 2
    for _sweep in range(60):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if off <= off_target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = abs(a[p, q])
                if beta <= skip:
                    continue
                u = a[p, q] / beta
                uc = u.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * beta)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # Rotation J: [pp]=c, [pq]=s, [qp]=-s*conj(u), [qq]=c*conj(u);
                # phases chosen so the (p,q) pivot of J* A J vanishes.
                new_pp = c * c * app - 2.0 * s * c * beta + s * s * aqq
                new_qq = s * s * app + 2.0 * s * c * beta + c * c * aqq
                a[p, p] = complex(new_pp, 0.0)
                a[q, q] = complex(new_qq, 0.0)
                a[p, q] = 0.0 + 0.0j
                a[q, p] = 0.0 + 0.0j
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * uc * aiq
                    a[i, q] = s * aip + c * uc * aiq
                    a[p, i] = a[i, p].conjugate()
                    a[q, i] = a[i, q].conjugate()
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * uc * viq
                    v[i, q] = s * vip + c * uc * viq

    evals = np.empty(n)
    for i in range(n):
        evals[i] = a[i, i].real
    order = np.argsort(evals)
    return evals[order], v[:, order]


def min_eig_scaled(kmat, w):
    """Smallest eigenvalue of the matrix ((1 - w_i conj(w_j)) * K_ij)."""
    n = kmat.shape[0]
    m = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            m[i, j] = (1.0 - w[i] * w[j].conjugate()) * kmat[i, j]
    for i in range(n):
        m[i, i] = complex(m[i, i].real, 0.0)
        for j in range(i + 1, n):
            h = 0.5 * (m[i, j] + m[j, i].conjugate())
            m[i, j] = h
            m[j, i] = h.conjugate()
    evals, _ = jacobi_eigh(m)
    return evals[0]


def psd_project(h):
    """Nearest (Frobenius) positive semidefinite matrix to Hermitian h."""
    n = h.shape[0]
    evals, vecs = jacobi_eigh(h)
    scaled = vecs.copy()
    for j in range(n):
        lam = evals[j]
        if lam < 0.0:
            lam = 0.0
        for i in range(n):
            scaled[i, j] = scaled[i, j] * lam
    out = np.dot(scaled, vecs.conjugate().T)
    for i in range(n):
        out[i, i] = complex(out[i, i].real, 0.0)
        for j in range(i + 1, n):
            g = 0.5 * (out[i, j] + out[j, i].conjugate())
            out[i, j] = g
            out[j, i] = g.conjugate()
    return out


def dykstra_two_term(e1, e2, target, budget, feas_tol, plateau_window,
                     plateau_rtol, infeas_factor):
    """Alternating-projection solve of E1∘G1 + E2∘G2 = target with G1, G2 PSD.

    Projections alternate between the product PSD cone and the affine
    constraint set. Feasibility is recognized on either side: when the PSD
    iterate meets the affine constraint within feas_tol, or when the
    affine iterate (which satisfies the constraint exactly) is PSD within
    feas_tol/4, in which case its PSD projection is the witness. Returns
    (status, G1, G2, residual, iterations); residual is the max-abs affine
    violation at the PSD iterate. Infeasibility is declared only when the
    residual plateaus above infeas_factor * feas_tol.
    """
    n = target.shape[0]
    denom = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            denom[i, j] = abs(e1[i, j]) ** 2 + abs(e2[i, j]) ** 2

    # Least-norm affine start.
    g1 = np.empty((n, n), dtype=np.complex128)
    g2 = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            g1[i, j] = target[i, j] * e1[i, j].conjugate() / denom[i, j]
            g2[i, j] = target[i, j] * e2[i, j].conjugate() / denom[i, j]

    y1 = g1.copy()
    y2 = g2.copy()
    cone_tol = 0.25 * feas_tol

    status = DYKSTRA_UNDECIDED
    res = np.inf
    last_check = np.inf
    it = 0
    while it < budget:
        it += 1
        y1 = psd_project(g1)
        y2 = psd_project(g2)

        res = 0.0
        for i in range(n):
            for j in range(n):
                viol = abs(e1[i, j] * y1[i, j] + e2[i, j] * y2[i, j]
                           - target[i, j])
                if viol > res:
                    res = viol
        if res <= feas_tol:
            status = DYKSTRA_FEASIBLE
            break

        for i in range(n):
            for j in range(n):
                gap = (target[i, j] - e1[i, j] * y1[i, j]
                       - e2[i, j] * y2[i, j]) / denom[i, j]
                g1[i, j] = y1[i, j] + gap * e1[i, j].conjugate()
                g2[i, j] = y2[i, j] + gap * e2[i, j].conjugate()

        ev1, _ = jacobi_eigh(g1)
        ev2, _ = jacobi_eigh(g2)
        neg = 0.0
        if -ev1[0] > neg:
            neg = -ev1[0]
        if -ev2[0] > neg:
            neg = -ev2[0]
        if neg <= cone_tol:
            y1 = psd_project(g1)
            y2 = psd_project(g2)
            res = 0.0
            for i in range(n):
                for j in range(n):
                    viol = abs(e1[i, j] * y1[i, j] + e2[i, j] * y2[i, j]
                               - target[i, j])
                    if viol > res:
                        res = viol
            if res <= feas_tol:
                status = DYKSTRA_FEASIBLE
                break

        if it % plateau_window == 0:
            if last_check < np.inf:
                change = abs(last_check - res)
                if (change < plateau_rtol * max(1.0, res)
                        and res > infeas_factor * feas_tol):
                    status = DYKSTRA_INFEASIBLE
                    break
            last_check = res

    return status, y1, y2, res, it
