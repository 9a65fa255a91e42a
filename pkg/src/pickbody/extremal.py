"""Extremal-kernel verification and the numerical theorem suites.

A kernel is extremal when every boundary point of every subtuple ball
lifts to a boundary point of the full ball. Lifting is decided by search:
an analytic forcing step (the PSD range condition at a rank-one-defect
sub-boundary point pins each free coordinate), then the multistart
coordinate-descent optimizer over the free polydisc. Failed lifts are
promoted to counterexamples only with a Lipschitz branch-and-bound
certificate that no lift exists; otherwise they stay undecided.

Theorem suites are sampling-based: hypotheses that quantify over a whole
body are checked on seeded sample strata and reported with counts, never
proven.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from pickbody import cara, numlin
from pickbody._jit import kernels as _kern
from pickbody.errors import InvalidInput, PreconditionViolation
from pickbody.kernel_ball import (
    Kernel,
    TupleIndex,
    as_tuple_index,
    boundary_scale,
    defect,
    make_kernel,
    membership,
    project,
    restrict,
    schur_scale,
    szego_kernel,
    szego_recognition,
)
from pickbody.moebius import moebius_distance
from pickbody.numlin import DEFAULT_TOL, ToleranceConfig
from pickbody.pick_disc import PickProblem, solvable
from pickbody.sampling import random_direction, substream


@dataclass(frozen=True)
class ExtremalVerdict:
    """Outcome of sampled lift verification over every proper subtuple.

    extremal is True only when every sampled lift succeeded; failed lifts
    are split into certified counterexamples (conclusive) and undecided
    entries (optimizer gave up without a certificate).
    """

    extremal: bool
    checked_tuples: tuple
    witnesses: tuple
    counterexamples: tuple
    undecided: tuple


@dataclass(frozen=True)
class TheoremReport:
    """Hypothesis checklist plus a conclusion, evaluated only when all
    hypotheses pass."""

    theorem: str
    hypotheses: tuple  # (name, passed, residual)
    conclusion: Optional[tuple]  # (passed, residual) or None
    instance: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def hypotheses_ok(self) -> bool:
        return all(ok for _, ok, _ in self.hypotheses)

    @property
    def passed(self) -> bool:
        return self.hypotheses_ok and self.conclusion is not None \
            and bool(self.conclusion[0])

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "hypotheses": [
                {"name": name, "passed": bool(ok), "residual": float(res)}
                for name, ok, res in self.hypotheses
            ],
            "conclusion": None if self.conclusion is None else {
                "passed": bool(self.conclusion[0]),
                "residual": float(self.conclusion[1]),
            },
            "instance": self.instance,
            "details": self.details,
        }


def _proper_subtuples(n: int):
    for k in range(1, n):
        for combo in itertools.combinations(range(1, n + 1), k):
            yield TupleIndex(indices=combo)


def _assemble(w_sub: np.ndarray, free_values: np.ndarray, idx0, free0,
              n: int) -> np.ndarray:
    w = np.empty(n, dtype=np.complex128)
    w[idx0] = w_sub
    w[free0] = free_values
    return w


def _forced_lift(kmat: np.ndarray, idx0, free0, w_sub: np.ndarray,
                 tol: ToleranceConfig) -> Optional[np.ndarray]:
    """Free coordinates forced by the PSD range condition.

    A null vector v of the scaled sub-block must be annihilated by the
    mixed rows, which pins w_c = (sum_i K(c,i) v_i) / (sum_i K(c,i)
    conj(w_i) v_i). A 0/0 leaves the coordinate unconstrained (0 is used);
    a finite value beyond the closed disc means no lift through this v.
    """
    sub = kmat[np.ix_(idx0, idx0)]
    scaled = numlin.hermitize((1.0 - np.outer(w_sub, w_sub.conj())) * sub)
    evals, vecs = _kern.jacobi_eigh(scaled)
    v = vecs[:, 0]
    scale = max(1.0, numlin.max_abs(kmat))
    values = np.empty(len(free0), dtype=np.complex128)
    for pos, c in enumerate(free0):
        row = kmat[c, idx0]
        num = np.sum(row * v)
        den = np.sum(row * w_sub.conj() * v)
        if abs(den) < 1e-13 * scale:
            if abs(num) < 1e-13 * scale:
                values[pos] = 0.0
                continue
            return None
        candidate = num / den
        mod = abs(candidate)
        if mod > 1.0 + 1e-9:
            return None
        if mod > 1.0:
            candidate /= mod
        values[pos] = candidate
    return values


def _grid_values() -> np.ndarray:
    pts = [0.0 + 0.0j]
    for radius in (0.45, 0.85):
        for k in range(8):
            pts.append(radius * np.exp(2j * np.pi * k / 8))
    return np.asarray(pts, dtype=np.complex128)


class _LiftSearch:
    """Coordinate-descent maximization of the smallest scaled eigenvalue
    over the free coordinates, with an evaluation budget."""

    def __init__(self, kmat, idx0, free0, w_sub, budget):
        self.kmat = kmat
        self.idx0 = idx0
        self.free0 = free0
        self.w_sub = w_sub
        self.n = kmat.shape[0]
        self.budget = budget
        self.evals = 0

    def objective(self, free_values: np.ndarray) -> float:
        self.evals += 1
        w = _assemble(self.w_sub, free_values, self.idx0, self.free0, self.n)
        return float(_kern.min_eig_scaled(self.kmat, w))

    def exhausted(self) -> bool:
        return self.evals >= self.budget

    def coarse_grid(self):
        grid = _grid_values()
        best_val = -np.inf
        best = None
        ranked = []
        for combo in itertools.product(grid, repeat=len(self.free0)):
            if self.exhausted():
                break
            values = np.asarray(combo, dtype=np.complex128)
            val = self.objective(values)
            ranked.append((val, values))
            if val > best_val:
                best_val, best = val, values
        ranked.sort(key=lambda item: -item[0])
        return best_val, best, [values for _, values in ranked[:4]]

    def descend(self, start: np.ndarray, h0: float = 0.12,
                max_passes: int = 70):
        values = start.astype(np.complex128).copy()
        best = self.objective(values)
        h = h0
        for _ in range(max_passes):
            if self.exhausted() or h < 1e-8:
                break
            improved = 0.0
            for pos in range(len(self.free0)):
                for axis in (1.0, 1.0j):
                    base = values[pos]
                    f0 = best
                    values[pos] = self._clamp(base + axis * h)
                    fp = self.objective(values)
                    values[pos] = self._clamp(base - axis * h)
                    fm = self.objective(values)
                    a = (fp - fm) / (2.0 * h)
                    b = (fp + fm - 2.0 * f0) / (2.0 * h * h)
                    if b < -1e-300:
                        step = -a / (2.0 * b)
                        step = max(-2.0 * h, min(2.0 * h, step))
                    else:
                        step = h if fp >= fm else -h
                    values[pos] = self._clamp(base + axis * step)
                    fs = self.objective(values)
                    cands = [(f0, base),
                             (fp, self._clamp(base + axis * h)),
                             (fm, self._clamp(base - axis * h)),
                             (fs, values[pos])]
                    fbest, vbest = max(cands, key=lambda t: t[0])
                    values[pos] = vbest
                    improved = max(improved, fbest - best)
                    best = fbest
            if improved < 1e-14:
                h *= 0.3
        return best, values

    @staticmethod
    def _clamp(z: complex) -> complex:
        mod = abs(z)
        return z if mod <= 1.0 else z / mod


def _search_lift(kernel: Kernel, idx0, free0, w_sub: np.ndarray,
                 tol: ToleranceConfig, budget: int,
                 rng: np.random.Generator):
    """Best lift candidate and its objective value."""
    kmat = kernel.matrix
    n = kernel.n

    forced = _forced_lift(kmat, idx0, free0, w_sub, tol)
    if forced is not None:
        w = _assemble(w_sub, forced, idx0, free0, n)
        if membership(kernel, w, tol):
            return w, float(_kern.min_eig_scaled(kmat, w))

    search = _LiftSearch(kmat, idx0, free0, w_sub, budget)
    best_val, best_values, starts = search.coarse_grid()
    if forced is not None:
        starts.append(forced)
    for _ in range(4):
        starts.append(np.asarray(
            [0.7 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
             for _ in free0], dtype=np.complex128))
    for start in starts:
        if search.exhausted():
            break
        val, values = search.descend(start)
        if val > best_val:
            best_val, best_values = val, values
    w = _assemble(w_sub, best_values, idx0, free0, n)
    return w, best_val


def lift_boundary_point(kernel: Kernel, index, w_sub,
                        budget: int = 4000,
                        tol: ToleranceConfig = DEFAULT_TOL,
                        seed: int = 0) -> Optional[np.ndarray]:
    """Extend a sub-boundary point to a full tuple inside the ball.

    Any returned tuple is automatically a boundary point of the full ball
    (an interior lift could be scaled up, contradicting the boundary of
    the projection). Returns None when the search fails; that is evidence,
    not proof, of non-liftability.
    """
    idx = as_tuple_index(index)
    n = kernel.n
    if idx.indices[-1] > n:
        raise InvalidInput("index exceeds the kernel dimension")
    w_sub = np.asarray([complex(x) for x in w_sub], dtype=np.complex128)
    if w_sub.shape != (len(idx),):
        raise InvalidInput("sub-tuple length must match the index")
    sub_kernel = restrict(kernel, idx)
    report = defect(sub_kernel, w_sub, tol)
    if not report.boundary:
        raise PreconditionViolation(
            f"sub-tuple has ||T_w|| = {report.operator_norm:.6g}, "
            "not a boundary point")
    idx0 = [i - 1 for i in idx.indices]
    free0 = [i for i in range(n) if i not in idx0]
    if not free0:
        return w_sub.copy()
    rng = substream(seed, 0x11F7)
    w, _val = _search_lift(kernel, idx0, free0, w_sub, tol, budget, rng)
    if membership(kernel, w, tol):
        return w
    return None


def certify_no_lift(kernel: Kernel, index, w_sub,
                    threshold: float,
                    max_evals: int = 400_000,
                    tol: ToleranceConfig = DEFAULT_TOL):
    """Branch-and-bound upper bound on the best achievable smallest scaled
    eigenvalue over one free coordinate.

    Returns (certified, upper_bound): certified means every disc value of
    the free coordinate provably keeps the smallest eigenvalue below the
    threshold, via the Lipschitz bound on eigenvalue movement under
    single-coordinate perturbations. Only single-free-coordinate problems
    are certified; anything else returns (False, inf).
    """
    idx = as_tuple_index(index)
    n = kernel.n
    idx0 = [i - 1 for i in idx.indices]
    free0 = [i for i in range(n) if i not in idx0]
    if len(free0) != 1:
        return False, np.inf
    c = free0[0]
    kmat = kernel.matrix
    w_sub = np.asarray([complex(x) for x in w_sub], dtype=np.complex128)

    col = np.abs(kmat[:, c]) ** 2
    lip = float(np.sqrt(2.0 * (np.sum(col) - col[c]) + 4.0 * col[c]))

    def value(z: complex) -> float:
        w = _assemble(w_sub, np.asarray([z]), idx0, free0, n)
        return float(_kern.min_eig_scaled(kmat, w))

    boxes = [(0.0 + 0.0j, 1.0)]
    global_ub = -np.inf
    evals = 0
    while boxes:
        center, half = boxes.pop()
        dist_out = abs(center) - half * np.sqrt(2.0)
        if dist_out > 1.0:
            continue
        probe = center if abs(center) <= 1.0 else center / abs(center)
        reach = half * np.sqrt(2.0) + max(0.0, abs(center) - 1.0)
        if evals >= max_evals:
            return False, np.inf
        evals += 1
        ub = value(probe) + lip * reach
        if ub < threshold:
            global_ub = max(global_ub, ub)
            continue
        if half < 1e-7:
            return False, ub
        q = half / 2.0
        for dx in (-q, q):
            for dy in (-q, q):
                boxes.append((center + complex(dx, dy), q))
    return True, global_ub


def verify_extremal(kernel: Kernel, samples_per_tuple: int = 200,
                    seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL,
                    lift_budget: int = 4000,
                    certify: bool = True) -> ExtremalVerdict:
    """Sample sub-boundary points of every proper subtuple and try to lift
    each one.

    The verdict is one-sided: certified counterexamples are conclusive,
    while success is sampling evidence. Boundary points are generated as
    seeded random directions scaled onto the sub-boundary; substreams are
    keyed by (seed, tuple, sample) so the verdict is order-independent.
    """
    n = kernel.n
    checked = []
    witnesses = []
    counterexamples = []
    undecided = []
    for t_id, idx in enumerate(_proper_subtuples(n)):
        checked.append(idx)
        sub_kernel = restrict(kernel, idx)
        idx0 = [i - 1 for i in idx.indices]
        free0 = [i for i in range(n) if i not in idx0]
        for s in range(samples_per_tuple):
            rng = substream(seed, t_id, s)
            direction = random_direction(rng, len(idx))
            r = boundary_scale(sub_kernel, direction, tol)
            w_sub = r * direction
            w, val = _search_lift(kernel, idx0, free0, w_sub, tol,
                                  lift_budget, rng)
            if membership(kernel, w, tol):
                witnesses.append((idx, tuple(w_sub), tuple(w)))
                continue
            scale = max(1.0, numlin.max_abs(kernel.matrix))
            threshold = -10.0 * tol.psd_tol * scale
            if certify:
                ok, ub = certify_no_lift(kernel, idx, w_sub, threshold,
                                         tol=tol)
            else:
                ok, ub = False, np.inf
            if ok and ub < threshold:
                counterexamples.append((idx, tuple(w_sub), float(val)))
            else:
                undecided.append((idx, tuple(w_sub), float(val)))
    return ExtremalVerdict(
        extremal=not counterexamples and not undecided,
        checked_tuples=tuple(checked),
        witnesses=tuple(witnesses),
        counterexamples=tuple(counterexamples),
        undecided=tuple(undecided),
    )


def _normalize_kernel(kernel: Kernel) -> Kernel:
    """Unit-diagonal conjugation; the kernel ball is unchanged."""
    if kernel.normalized:
        return kernel
    d = 1.0 / np.sqrt(np.real(np.diag(kernel.matrix)))
    return make_kernel(kernel.matrix * np.outer(d, d), labels=kernel.labels)


def _domain_points(domain: cara.DomainModel, z) -> list:
    return [cara.as_domain_point(domain, p) for p in z]


def _pair_cstar(domain: cara.DomainModel, points, i: int, j: int) -> float:
    return cara.cara_distance(domain, points[i], points[j])


def _ball_equality_agreement(kernel: Kernel, domain: cara.DomainModel,
                             points, samples: int, seed: int,
                             tol: ToleranceConfig,
                             budget: int = cara.DEFAULT_BUDGET):
    """Sampled agreement between the kernel ball and the Pick body.

    Tuples are drawn on both sides of the kernel-ball boundary (plus or
    minus ten percent along random rays). Undecided domain verdicts are
    skipped, not counted against agreement.
    """
    agree = 0
    total = 0
    for s in range(samples):
        rng = substream(seed, 0xBA11, s)
        direction = random_direction(rng, kernel.n)
        r = boundary_scale(kernel, direction, tol)
        w = (0.9 if s % 2 == 0 else 1.1) * r * direction
        in_ball = membership(kernel, w, tol)
        if np.any(np.abs(w) > 1.0 + 1e-12):
            in_body = cara.NONMEMBER
        else:
            in_body = cara.pick_body_membership(domain, points, tuple(w),
                                                tol, budget)
        if in_body == cara.UNDECIDED:
            continue
        total += 1
        if in_ball == (in_body == cara.MEMBER):
            agree += 1
    return agree, total


def _cross_membership_agreement(kernel: Kernel, alpha, samples: int,
                                seed: int, tol: ToleranceConfig):
    """Sampled agreement between the kernel ball and the disc Pick body of
    the nodes alpha."""
    alpha = tuple(complex(a) for a in alpha)
    agree = 0
    for s in range(samples):
        rng = substream(seed, 0xC055, s)
        direction = random_direction(rng, kernel.n)
        r = boundary_scale(kernel, direction, tol)
        w = (0.9 if s % 2 == 0 else 1.1) * r * direction
        in_ball = membership(kernel, w, tol)
        if np.any(np.abs(w) > 1.0 + 1e-12):
            in_disc_body = False
        else:
            in_disc_body = solvable(PickProblem(nodes=alpha, targets=tuple(w)),
                                    tol)
        agree += int(in_ball == in_disc_body)
    return agree, samples


def entry_modulus_check(kernel: Kernel, domain: cara.DomainModel, z,
                        tol: ToleranceConfig = DEFAULT_TOL,
                        threshold: float = 1e-8) -> TheoremReport:
    """Check |K(i, j)| = sqrt(1 - c*(z_i, z_j)^2) for every pair."""
    points = _domain_points(domain, z)
    norm_kernel = kernel
    hyps = [("unit_diagonal", kernel.normalized,
             float(numlin.max_abs(np.diag(kernel.matrix) - 1.0))),
            ("point_count", len(points) == kernel.n,
             abs(len(points) - kernel.n))]
    conclusion = None
    residual = np.inf
    if all(ok for _, ok, _ in hyps):
        residual = 0.0
        for i in range(kernel.n):
            for j in range(i + 1, kernel.n):
                cstar = _pair_cstar(domain, points, i, j)
                expected = np.sqrt(max(0.0, 1.0 - cstar * cstar))
                residual = max(residual,
                               abs(abs(norm_kernel.matrix[i, j]) - expected))
        conclusion = (residual <= threshold, residual)
    return TheoremReport(
        theorem="entry-modulus",
        hypotheses=tuple(hyps),
        conclusion=conclusion,
        instance={"n": kernel.n, "domain": domain.kind},
        details={"threshold": threshold},
    )


def axis_point_check(kernel: Kernel, domain: cara.DomainModel, z,
                     position: int, tol: ToleranceConfig = DEFAULT_TOL,
                     threshold: float = 1e-7,
                     bisection_steps: int = 80) -> TheoremReport:
    """Locate the membership threshold of (0, ..., mu, ..., 0) by bisection
    and compare with the generalized distance.

    position is 1-based. On the disc the comparison is two-sided; on a
    polydisc only the certified lower bound is available, so the check is
    one-sided (threshold must not undercut it).
    """
    points = _domain_points(domain, z)
    n = kernel.n
    if not 1 <= position <= n:
        raise InvalidInput("position out of range")
    pos0 = position - 1

    def axis_member(mu: float) -> bool:
        w = np.zeros(n, dtype=np.complex128)
        w[pos0] = mu
        return membership(kernel, w, tol)

    lo, hi = 0.0, 1.0
    if axis_member(1.0):
        t_star = 1.0
    else:
        for _ in range(bisection_steps):
            mid = 0.5 * (lo + hi)
            if axis_member(mid):
                lo = mid
            else:
                hi = mid
        t_star = 0.5 * (lo + hi)

    others = [p for k, p in enumerate(points) if k != pos0]
    if domain.kind == "disc":
        cstar = cara.gen_cara_disc(points[pos0][0], [p[0] for p in others])
        residual = abs(t_star - cstar)
        passed = residual <= threshold
    else:
        cstar = cara.gen_cara_lower_bound(domain, points[pos0], others)
        residual = t_star - cstar
        passed = residual >= -threshold
    return TheoremReport(
        theorem="axis-point",
        hypotheses=(("point_count", len(points) == n,
                     abs(len(points) - n)),),
        conclusion=(passed, float(residual)),
        instance={"position": position, "domain": domain.kind},
        details={"threshold": threshold, "bisection_value": t_star,
                 "generalized_distance": cstar,
                 "one_sided": domain.kind != "disc"},
    )


def theorem2_pipeline(kernel: Kernel, domain: cara.DomainModel, z, alpha,
                      pair_flags=None, tol: ToleranceConfig = DEFAULT_TOL,
                      seed: int = 0, equality_samples: int = 200,
                      cross_samples: int = 1000,
                      hyp_tol: float = 1e-7) -> TheoremReport:
    """Boundary point with two pair-boundary conditions: conclude the nodes
    are distinct and the ball is the disc Pick body of alpha.

    Hypotheses: alpha interior and on the ball boundary, at least two
    pairs on their sub-ball boundaries, and sampled equality of the ball
    with the domain Pick body. Conclusion: pairwise separation, Szegő-form
    recognition of the normalized kernel with distances matching alpha,
    and full cross-membership agreement at the nodes alpha.
    """
    if kernel.n != 3:
        raise InvalidInput("this pipeline runs on 3-point kernels")
    points = _domain_points(domain, z)
    alpha = tuple(complex(a) for a in alpha)
    hyps = []

    interior = all(abs(a) < 1.0 for a in alpha)
    hyps.append(("alpha_interior", interior,
                 float(max(abs(a) for a in alpha))))

    rep = defect(kernel, alpha, tol)
    hyps.append(("alpha_on_boundary", rep.boundary,
                 abs(rep.operator_norm - 1.0)))

    pairs = pair_flags if pair_flags is not None else [(1, 2), (1, 3), (2, 3)]
    boundary_pairs = 0
    worst = np.inf
    for (i, j) in pairs:
        sub = restrict(kernel, (i, j))
        sub_rep = defect(sub, (alpha[i - 1], alpha[j - 1]), tol)
        gap = abs(sub_rep.operator_norm - 1.0)
        worst = min(worst, gap)
        if sub_rep.boundary:
            boundary_pairs += 1
    hyps.append(("two_pair_boundaries", boundary_pairs >= 2, float(worst)))

    agree, total = _ball_equality_agreement(kernel, domain, points,
                                            equality_samples, seed, tol)
    hyps.append(("ball_equals_body_sampled", agree == total and total > 0,
                 float(total - agree)))

    conclusion = None
    details = {"equality_samples": total}
    if all(ok for _, ok, _ in hyps):
        sep = min(moebius_distance(alpha[i], alpha[j])
                  for i in range(3) for j in range(i + 1, 3))
        distinct = sep > 1e-9

        form = szego_recognition(_normalize_kernel(kernel), tol)
        rec_residual = np.inf
        if form is not None:
            rec_residual = max(
                abs(moebius_distance(form.alpha[i], form.alpha[j])
                    - moebius_distance(alpha[i], alpha[j]))
                for i in range(3) for j in range(i + 1, 3))
        recognized = form is not None and rec_residual <= hyp_tol

        cross_agree, cross_total = _cross_membership_agreement(
            kernel, alpha, cross_samples, seed, tol)
        details.update({
            "separation": sep,
            "recognition_distance_residual": rec_residual,
            "cross_agreement": f"{cross_agree}/{cross_total}",
        })
        disagreement = float(cross_total - cross_agree)
        conclusion = (distinct and recognized and disagreement == 0,
                      max(disagreement, 0.0 if recognized else 1.0,
                          0.0 if distinct else 1.0))
    return TheoremReport(
        theorem="2",
        hypotheses=tuple(hyps),
        conclusion=conclusion,
        instance={"alpha": [repr(a) for a in alpha], "domain": domain.kind},
        details=details,
    )


def theorem3_check(kernel: Kernel, domain: cara.DomainModel, z, alpha,
                   tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0,
                   threshold: float = 1e-8, extremal_samples: int = 20,
                   equality_samples: int = 200,
                   hyp_tol: float = 1e-7) -> TheoremReport:
    """Lower bound on the generalized distance at the third point.

    With a 3-extremal normalized kernel whose ball is the Pick body and a
    boundary point alpha matching the first pairwise distance, the bound
    c*(z3; z1, z2) >= max_j sqrt((c*(zj, z3)^2 - m(alpha_j, alpha_3)^2) /
    (1 - m(alpha_j, alpha_3)^2)) must hold, and the two j-values of
    sqrt(1 - c*^2)/sqrt(1 - m^2) must agree.
    """
    if kernel.n != 3:
        raise InvalidInput("this check runs on 3-point kernels")
    points = _domain_points(domain, z)
    alpha = tuple(complex(a) for a in alpha)
    hyps = []

    hyps.append(("unit_diagonal", kernel.normalized,
                 float(numlin.max_abs(np.diag(kernel.matrix) - 1.0))))

    verdict = verify_extremal(kernel, samples_per_tuple=extremal_samples,
                              seed=seed, tol=tol)
    hyps.append(("extremal_sampled", verdict.extremal,
                 float(len(verdict.counterexamples) + len(verdict.undecided))))

    agree, total = _ball_equality_agreement(kernel, domain, points,
                                            equality_samples, seed, tol)
    hyps.append(("ball_equals_body_sampled", agree == total and total > 0,
                 float(total - agree)))

    interior = all(abs(a) < 1.0 for a in alpha)
    rep = defect(kernel, alpha, tol)
    hyps.append(("alpha_boundary_interior", interior and rep.boundary,
                 abs(rep.operator_norm - 1.0)))

    cstar_12 = _pair_cstar(domain, points, 0, 1)
    dist_12 = moebius_distance(alpha[0], alpha[1])
    hyps.append(("pair_distance_condition",
                 abs(dist_12 - cstar_12) <= hyp_tol,
                 abs(dist_12 - cstar_12)))

    conclusion = None
    details = {}
    if all(ok for _, ok, _ in hyps):
        rhs = 0.0
        mu_values = []
        for j in (0, 1):
            cstar = _pair_cstar(domain, points, j, 2)
            m_a = moebius_distance(alpha[j], alpha[2])
            num = max(cstar * cstar - m_a * m_a, 0.0)
            rhs = max(rhs, np.sqrt(num / (1.0 - m_a * m_a)))
            mu_values.append(np.sqrt(1.0 - cstar * cstar)
                             / np.sqrt(1.0 - m_a * m_a))
        if domain.kind == "disc":
            lhs = cara.gen_cara_disc(points[2][0],
                                     [points[0][0], points[1][0]])
            one_sided = False
        else:
            lhs = cara.gen_cara_lower_bound(domain, points[2],
                                            [points[0], points[1]])
            one_sided = True
        mu_residual = abs(mu_values[0] - mu_values[1])
        bound_ok = lhs >= rhs - threshold
        details = {"rhs": rhs, "lhs": lhs, "mu_values": mu_values,
                   "mu_residual": mu_residual, "one_sided": one_sided}
        conclusion = (bound_ok and mu_residual <= threshold,
                      max(rhs - lhs, mu_residual))
    return TheoremReport(
        theorem="3",
        hypotheses=tuple(hyps),
        conclusion=conclusion,
        instance={"alpha": [repr(a) for a in alpha], "domain": domain.kind},
        details=details,
    )


def theorem4_pipeline(kernel: Kernel, domain: cara.DomainModel, z, alpha,
                      tol: ToleranceConfig = DEFAULT_TOL, seed: int = 0,
                      samples_per_tuple: int = 25,
                      equality_samples: int = 200,
                      cross_samples: int = 1000,
                      hyp_tol: float = 1e-7) -> TheoremReport:
    """First-node distance conditions force the ball to be the disc Pick
    body of alpha.

    Hypotheses: extremality (sampled), unit diagonal, sampled ball
    equality, alpha inside the ball, and m(alpha_1, alpha_j) =
    c*(z_1, z_j) for every j >= 2. Conclusion: recognition succeeds with
    distances matching alpha and cross-membership agrees everywhere.
    """
    points = _domain_points(domain, z)
    alpha = tuple(complex(a) for a in alpha)
    n = kernel.n
    if len(alpha) != n or len(points) != n:
        raise InvalidInput("alpha and z must match the kernel size")
    hyps = []

    hyps.append(("unit_diagonal", kernel.normalized,
                 float(numlin.max_abs(np.diag(kernel.matrix) - 1.0))))

    verdict = verify_extremal(kernel, samples_per_tuple=samples_per_tuple,
                              seed=seed, tol=tol)
    hyps.append(("extremal_sampled", verdict.extremal,
                 float(len(verdict.counterexamples) + len(verdict.undecided))))

    agree, total = _ball_equality_agreement(kernel, domain, points,
                                            equality_samples, seed, tol)
    hyps.append(("ball_equals_body_sampled", agree == total and total > 0,
                 float(total - agree)))

    inside = all(abs(a) < 1.0 for a in alpha) and membership(kernel, alpha, tol)
    hyps.append(("alpha_in_ball", inside, 0.0 if inside else 1.0))

    worst = 0.0
    for j in range(1, n):
        cstar = _pair_cstar(domain, points, 0, j)
        worst = max(worst, abs(moebius_distance(alpha[0], alpha[j]) - cstar))
    hyps.append(("first_node_distance_conditions", worst <= hyp_tol, worst))

    conclusion = None
    details = {"equality_samples": total}
    if all(ok for _, ok, _ in hyps):
        form = szego_recognition(_normalize_kernel(kernel), tol)
        rec_residual = np.inf
        if form is not None:
            rec_residual = max(
                abs(moebius_distance(form.alpha[i], form.alpha[j])
                    - moebius_distance(alpha[i], alpha[j]))
                for i in range(n) for j in range(i + 1, n))
        recognized = form is not None and rec_residual <= hyp_tol
        cross_agree, cross_total = _cross_membership_agreement(
            kernel, alpha, cross_samples, seed, tol)
        details.update({
            "recognition_distance_residual": rec_residual,
            "cross_agreement": f"{cross_agree}/{cross_total}",
        })
        disagreement = float(cross_total - cross_agree)
        conclusion = (recognized and disagreement == 0,
                      max(disagreement, 0.0 if recognized else 1.0))
    return TheoremReport(
        theorem="4",
        hypotheses=tuple(hyps),
        conclusion=conclusion,
        instance={"alpha": [repr(a) for a in alpha], "domain": domain.kind,
                  "n": n},
        details=details,
    )


def theorem1_check_disc(nodes, samples: int = 1000, seed: int = 0,
                        tol: ToleranceConfig = DEFAULT_TOL) -> TheoremReport:
    """On the disc a single kernel reproduces the Pick body exactly:
    sampled ball membership must match Pick solvability everywhere."""
    nodes = tuple(complex(z) for z in nodes)
    kernel = make_kernel(
        1.0 / (1.0 - np.outer(np.asarray(nodes), np.conj(nodes))))
    agree = 0
    for s in range(samples):
        rng = substream(seed, 0x7D15C, s)
        direction = random_direction(rng, kernel.n)
        r = boundary_scale(kernel, direction, tol)
        w = (0.9 if s % 2 == 0 else 1.1) * r * direction
        in_ball = membership(kernel, w, tol)
        if np.any(np.abs(w) > 1.0 + 1e-12):
            in_body = False
        else:
            in_body = solvable(PickProblem(nodes=nodes, targets=tuple(w)), tol)
        agree += int(in_ball == in_body)
    return TheoremReport(
        theorem="1-disc",
        hypotheses=(("distinct_interior_nodes", True, 0.0),),
        conclusion=(agree == samples, float(samples - agree)),
        instance={"n": len(nodes)},
        details={"agreement": f"{agree}/{samples}"},
    )


def theorem1_check_bidisc(points, n_members: int = 100,
                          n_nonmembers: int = 200,
                          kernel_samples: int = 50, seed: int = 0,
                          tol: ToleranceConfig = DEFAULT_TOL,
                          budget: int = 64) -> TheoremReport:
    """Desk-scale intersection identity on the bidisc.

    One direction exactly: every sampled admissible kernel must contain
    every sampled member tuple (members are values of automorphism-composed
    coordinate functions). Other direction by search: a separating
    admissible kernel must be found for sampled non-members.
    """
    domain = cara.polydisc(2)
    pts = _domain_points(domain, points)
    n = len(pts)
    lam = np.asarray([p[0] for p in pts])
    mu = np.asarray([p[1] for p in pts])
    admissible = cara.sample_admissible_kernels(lam, mu, kernel_samples,
                                                seed=seed, tol=tol)

    from pickbody.sampling import random_automorphism, random_unimodular

    inclusion_violations = 0
    members_checked = 0
    for s in range(n_members):
        rng = substream(seed, 0xB1D15C, s)
        if rng.uniform() < 0.2:
            w = np.full(n, random_unimodular(rng) * rng.uniform(0, 1))
        else:
            coord = lam if rng.uniform() < 0.5 else mu
            phi = random_automorphism(rng)
            w = np.asarray([phi(c) for c in coord])
        members_checked += 1
        for gamma in admissible:
            if not numlin.is_psd(schur_scale(gamma, w), tol):
                inclusion_violations += 1
                break

    separated = 0
    nonmembers = 0
    attempts = 0
    while nonmembers < n_nonmembers and attempts < 50 * n_nonmembers:
        rng = substream(seed, 0x5E9A2, attempts)
        attempts += 1
        w = tuple(0.98 * (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1))
                  for _ in range(n))
        if any(abs(x) >= 1.0 for x in w):
            continue
        if cara.pick_body_membership(domain, pts, w, tol) != cara.NONMEMBER:
            continue
        nonmembers += 1
        if cara.admissible_separation(domain, pts, w, budget=budget,
                                      seed=seed, tol=tol) is not None:
            separated += 1

    rate = separated / nonmembers if nonmembers else 0.0
    passed = inclusion_violations == 0 and nonmembers > 0 and rate >= 0.99
    return TheoremReport(
        theorem="1-bidisc",
        hypotheses=(("admissible_samples", len(admissible) > 0,
                     float(len(admissible))),),
        conclusion=(passed, float(inclusion_violations) + (1.0 - rate)),
        instance={"n": n},
        details={
            "members_checked": members_checked,
            "inclusion_violations": inclusion_violations,
            "nonmembers": nonmembers,
            "separation_rate": rate,
        },
    )


def theorem3_search_bidisc(trials: int = 10, seed: int = 0,
                           tol: ToleranceConfig = DEFAULT_TOL,
                           equality_samples: int = 40,
                           budget: int = 4000) -> list:
    """Scan random bidisc 3-point configurations for candidate
    (kernel, alpha) pairs near the bound's hypotheses.

    Candidate kernels take the required entry moduli sqrt(1 - c*^2) with
    random phases; alpha pairs the first two coordinates at exact distance
    and forces the third from the rank-one defect. Records are logged with
    their sampled ball-equality score and the bound's right-hand side; no
    existence claim is made.
    """
    from pickbody.sampling import random_bidisc_points

    domain = cara.polydisc(2)
    records = []
    for trial in range(trials):
        rng = substream(seed, 0x5EA6C4, trial)
        pts = random_bidisc_points(rng, 3)
        cstars = {(i, j): cara.cara_distance(domain, pts[i], pts[j])
                  for i in range(3) for j in range(i + 1, 3)}
        moduli = {key: np.sqrt(max(0.0, 1.0 - c * c))
                  for key, c in cstars.items()}
        phases = rng.uniform(0, 2 * np.pi, size=3)
        matrix = np.eye(3, dtype=np.complex128)
        for (i, j), mod in moduli.items():
            matrix[i, j] = mod * np.exp(1j * phases[(i + j) % 3])
            matrix[j, i] = np.conj(matrix[i, j])
        evals = np.linalg.eigvalsh(matrix)
        if evals[0] <= 1e-8:
            records.append({"trial": trial, "status": "kernel_not_pd",
                            "min_eig": float(evals[0])})
            continue
        kernel = make_kernel(matrix)

        agree, total = _ball_equality_agreement(
            kernel, domain, pts, equality_samples, seed + trial, tol,
            budget=budget)
        score = agree / total if total else 0.0

        alpha12 = (0.0, cstars[(0, 1)])
        forced = _forced_lift(kernel.matrix, [0, 1], [2],
                              np.asarray(alpha12, dtype=np.complex128), tol)
        record = {"trial": trial, "status": "logged",
                  "equality_score": score,
                  "equality_samples": total}
        if forced is not None and abs(forced[0]) < 1.0:
            alpha = (alpha12[0], alpha12[1], complex(forced[0]))
            rhs = 0.0
            for j in (0, 1):
                c3 = cstars[(j, 2)]
                m_a = moebius_distance(alpha[j], alpha[2])
                num = max(c3 * c3 - m_a * m_a, 0.0)
                rhs = max(rhs, float(np.sqrt(num / (1.0 - m_a * m_a))))
            record["alpha"] = [repr(a) for a in alpha]
            record["rhs"] = rhs
        else:
            record["alpha"] = None
            record["rhs"] = None
        records.append(record)
    return records
