"""Gluing two nearby points: the shadowing point and its decay audit."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import mpmath

from core import GroupElement, Report, active, mat_inverse, renormalize, sup_dev
from core.errors import DecompositionDrift, NotClose
from flow import FlowParams, apply_flow, conjugate_by_flow
from geometry import MetricConfig, group_dist, quotient_dist, quotient_distance
from lattice import LatticeClass, lattice_class
from shadowing.decompose import reconstruction_error, shadow_decompose, unstable_element
from utils.pool import WorkerPool, sample_rng

log = logging.getLogger("cusplab.shadowing")

EPS_MARGIN = mpmath.mpf(1) + mpmath.mpf(10) ** -9


def decomposition_tol() -> mpmath.mpf:
    return 10**4 * active().unit_roundoff


@dataclass(frozen=True)
class ShadowResult:
    y: LatticeClass
    u_plus: tuple
    c: GroupElement
    u_minus: GroupElement
    eps: mpmath.mpf  # displacement bound the budgets are scaled by
    x_minus_rep: GroupElement  # g₋, the representative of x_minus used
    x_plus_rep: GroupElement  # γ·g₊, aligned so that g₋ = (γ·g₊)·g
    displacement: GroupElement  # g
    reconstruction: mpmath.mpf

    @property
    def y_rep(self) -> GroupElement:
        """g₋·u⁺ = (γ·g₊)·c·u⁻."""
        return self.x_minus_rep @ unstable_element(self.u_plus, self.c.d)

    def norms(self) -> dict:
        return {
            "u_plus": max(abs(x) for x in self.u_plus) if self.u_plus else mpmath.mpf(0),
            "c": sup_dev(self.c),
            "u_minus": sup_dev(self.u_minus),
        }


def shadow_point(
    x_minus: LatticeClass,
    x_plus: LatticeClass,
    eps_bound,
    metric: MetricConfig | None = None,
) -> ShadowResult:
    """Point y whose past follows x_minus and whose future follows x_plus·c."""
    metric = metric or MetricConfig()
    eps_bound = mpmath.mpf(eps_bound)
    limit = mpmath.mpf(metric.eta0) / (3 * metric.c0)
    if not eps_bound < limit:
        raise NotClose(f"eps = {mpmath.nstr(eps_bound, 6)} is not below η₀/(3c₀) = "
                       f"{mpmath.nstr(limit, 6)}")
    qd = quotient_distance(x_minus, x_plus, metric)
    if not qd.value < eps_bound:
        raise NotClose(f"d(x₋, x₊) = {mpmath.nstr(qd.value, 6)} is not below "
                       f"{mpmath.nstr(eps_bound, 6)}")

    g_minus = x_minus.basis
    g_plus = qd.aligned
    g = mat_inverse(g_plus) @ g_minus
    u, c, u_minus = shadow_decompose(g)
    error = reconstruction_error(g, u, c, u_minus)
    tol = decomposition_tol()
    if error > tol:
        raise DecompositionDrift(f"|g·u⁺ − c·u⁻| = {mpmath.nstr(error, 5)} exceeds "
                                 f"{mpmath.nstr(tol, 5)}")

    y = lattice_class(g_minus @ unstable_element(u, g.d))
    return ShadowResult(
        y=y,
        u_plus=u,
        c=c,
        u_minus=u_minus,
        eps=eps_bound,
        x_minus_rep=g_minus,
        x_plus_rep=g_plus,
        displacement=g,
        reconstruction=error,
    )


def _dist_to_identity(k: GroupElement) -> mpmath.mpf:
    return max(sup_dev(k), sup_dev(mat_inverse(k)))


def verify_shadow(
    r: ShadowResult,
    x_minus: LatticeClass,
    x_plus: LatticeClass,
    l_min: int,
    l_max: int,
    c0: float,
    exact_quotient: bool = False,
    metric: MetricConfig | None = None,
) -> Report:
    """Check the three decay budgets of the shadowing point over [l_min, l_max].

    Distances are taken between the aligned representatives, which bounds the
    quotient distance from above; `exact_quotient` recomputes them on X.
    """
    if not l_min <= 0 <= l_max:
        raise ValueError(f"Range [{l_min}, {l_max}] must contain 0")
    d = r.c.d
    rate = FlowParams(d).expansion_rate
    eps = r.eps
    report = Report(name="shadow")
    norms = r.norms()
    report.check("lem:shadow", "u_plus_norm", norms["u_plus"] < 2 * c0 * eps,
                 value=norms["u_plus"], bound=2 * c0 * eps)
    report.check("lem:shadow", "c_norm", norms["c"] < 3 * c0 * eps,
                 value=norms["c"], bound=3 * c0 * eps)
    report.check("lem:shadow", "u_minus_norm", norms["u_minus"] < 6 * c0**2 * eps,
                 value=norms["u_minus"], bound=6 * c0**2 * eps)

    u_plus = unstable_element(r.u_plus, d)
    cu = r.c @ r.u_minus
    if exact_quotient:
        metric = metric or MetricConfig(c0=c0)
        plus_c = lattice_class(r.x_plus_rep @ r.c)

    for l in range(l_min, l_max + 1):
        if l <= 0:
            bound = 2 * c0 * eps * mpmath.exp(l * rate)
            if exact_quotient:
                dist = quotient_dist(apply_flow(r.y, l), apply_flow(x_minus, l), metric)
            else:
                dist = _dist_to_identity(conjugate_by_flow(u_plus, l))
            report.check("lem:shadow(i)", "shadow_past", dist < bound,
                         l=l, distance=dist, bound=bound)
        if l >= 0:
            bound = 3 * c0 * eps
            if exact_quotient:
                dist = quotient_dist(apply_flow(r.y, l), apply_flow(x_plus, l), metric)
            else:
                dist = _dist_to_identity(conjugate_by_flow(cu, l))
            report.check("lem:shadow(ii)", "shadow_future", dist < bound,
                         l=l, distance=dist, bound=bound)

            bound = 6 * c0**2 * eps * mpmath.exp(-l * rate)
            if exact_quotient:
                dist = quotient_dist(apply_flow(r.y, l), apply_flow(plus_c, l), metric)
            else:
                dist = _dist_to_identity(conjugate_by_flow(r.u_minus, l))
            report.check("lem:shadow(ii)", "shadow_future_centralized", dist < bound,
                         l=l, distance=dist, bound=bound)
    return report


def random_displacement(rng, d: int, eps: float) -> GroupElement:
    """Element of sup deviation about eps with every block populated."""
    size = d + 1
    raw = rng.uniform(-1.0, 1.0, size=(size, size))
    raw /= abs(raw).max()
    entries = [[(1 if i == j else 0) + mpmath.mpf(eps) * mpmath.mpf(float(raw[i, j]))
                for j in range(size)] for i in range(size)]
    return renormalize(GroupElement(entries))


class _ShadowDraw:
    def __init__(self, d, eps, l_min, l_max, c0, seed) -> None:
        self.d, self.eps, self.l_min, self.l_max = d, eps, l_min, l_max
        self.c0, self.seed = c0, seed

    def __call__(self, index: int) -> Report:
        rng = sample_rng(self.seed, index)
        base = random_displacement(rng, self.d, 0.1)
        g = random_displacement(rng, self.d, self.eps)
        x_plus = lattice_class(base)
        x_minus = lattice_class(base @ g)
        metric = MetricConfig(c0=self.c0)
        eps_bound = group_dist(base, base @ g) * EPS_MARGIN
        r = shadow_point(x_minus, x_plus, eps_bound, metric)
        full = verify_shadow(r, x_minus, x_plus, self.l_min, self.l_max, self.c0)

        out = Report(name="shadow-batch")
        tol = decomposition_tol()
        out.check("lem:shadow", "reconstruction", r.reconstruction <= tol,
                  draw=index, d=self.d, eps=self.eps, error=r.reconstruction, bound=tol)
        for kind in ("u_plus_norm", "c_norm", "u_minus_norm", "shadow_past",
                     "shadow_future", "shadow_future_centralized"):
            rows = [rec for rec in full.records if rec["kind"] == kind]
            key = "value" if kind.endswith("_norm") else "distance"
            worst = max(rows, key=lambda rec: rec[key] / rec["bound"])
            out.check(worst["anchor"], kind, all(rec["ok"] for rec in rows),
                      draw=index, d=self.d, eps=self.eps, worst_ratio=worst[key] / worst["bound"],
                      worst_l=worst.get("l"), failures=sum(not rec["ok"] for rec in rows))
        return out


def shadow_batch(
    d: int,
    eps: float,
    draws: int,
    l_min: int,
    l_max: int,
    c0: float,
    seed: int,
    pool: WorkerPool | None = None,
) -> Report:
    """Shadow `draws` random displacements of size eps and aggregate the audits."""
    pool = pool or WorkerPool()
    report = Report(name="shadow-batch")
    for sub in pool.map(_ShadowDraw(d, eps, l_min, l_max, c0, seed), range(draws)):
        report.merge(sub)
    report.summary = {
        "d": d,
        "eps": eps,
        "draws": draws,
        "violations": len(report.violations),
    }
    log.info("shadow-batch d=%d eps=%g: %d draws, %d violations",
             d, eps, draws, len(report.violations))
    return report
