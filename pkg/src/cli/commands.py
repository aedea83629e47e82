"""One function per CLI command; each returns the report it produced."""

from __future__ import annotations

import logging

import mpmath

from assembly import (
    build_S_m,
    certify_eta,
    check_separated,
    get_connector,
    scan_nprime,
    tracking_report,
    verify_S_m,
)
from assembly.scan import TARGET_RATE
from cli.context import RunContext
from construction import estimate_AN_measure, get_sampler, guaranteed_cube_count, select_S1
from construction import verify_S1 as verify_seed_set
from core import Report
from flow import apply_flow
from geometry import certify_delta
from measures import (
    empirical_mu,
    empirical_sigma,
    entropy_accounting,
    entropy_lower_bound,
    mass_bound,
    mass_fraction,
    max_separated_count,
)
from shadowing import shadow_batch as run_shadow_batch
from utils.pool import sample_pairs, sample_rng

log = logging.getLogger("cusplab.cli")

CERTIFICATE_SAMPLE = 200


def _thin(items: list, cap: int) -> list:
    """At most cap items at evenly spaced indices."""
    if len(items) <= cap:
        return items
    stride = len(items) / cap
    return [items[int(k * stride)] for k in range(cap)]


def scan_an(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    sampler = get_sampler(cfg.settings)
    est, outcomes = estimate_AN_measure(
        p, cfg["samples"], sampler, seed=cfg["seed"], pool=ctx.pool("scan-an")
    )
    report = Report(name="scan-an")
    for i, o in enumerate(outcomes):
        report.check("eqn:badpoints", "witness_consistency", not o.disagrees,
                     sample=i, t=list(o.t), region=o.region.value, witness=o.witness)
    report.check("lem:measure", "measure_bound", est.meets_bound,
                 fraction=est.fraction, ci95=est.ci95, stderr=est.stderr,
                 bound=est.bound.cube_fraction, measure_bound=est.bound.measure,
                 implied_measure=est.implied_measure,
                 outside_hypothesis=est.bound.outside_hypothesis)
    report.summary = {
        "fraction": est.fraction,
        "stderr": est.stderr,
        "bound": est.bound.cube_fraction,
        "samples": est.samples,
        "boundary": est.boundary,
        "disagreements": est.disagreements,
    }
    return report


def build_s1(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    seeds = select_S1(p, K_target=p.K, resolution=cfg["resolution"])
    ctx.store.save_seeds(seeds)

    report = Report(name="build-s1")
    for pt in seeds.points:
        report.note("seed", symbol=pt.index, t=list(pt.t), cube=list(pt.cube))

    sample = []
    for pt in seeds.points:
        current = pt.lattice
        sample.append(current)
        for _ in range(p.N):
            current = apply_flow(current, 1)
            sample.append(current)
    cert = certify_delta(_thin(sample, CERTIFICATE_SAMPLE), p.M, p.delta, p.metric)
    ctx.store.save_certificate("delta", {
        "certified": float(cert.certified),
        "min_radius": float(cert.min_radius),
        "configured": cert.configured,
        "points": cert.points,
    })
    report.note("delta_certificate", certified=cert.certified, min_radius=cert.min_radius,
                configured=cert.configured, bound=cert.bound, points=cert.points)
    report.summary = {
        "seeds": len(seeds),
        "K": p.K,
        "guaranteed_cubes": guaranteed_cube_count(p.d, p.N),
        "delta_certified": float(cert.certified),
    }
    return report


def verify_s1(ctx: RunContext) -> Report:
    seeds = ctx.seeds()
    return verify_seed_set(seeds, pair_cap=ctx.cfg["pair_cap"], pool=ctx.pool("verify-s1"))


def shadow_batch(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    return run_shadow_batch(
        p.d, cfg["shadow_eps"], cfg["draws"], cfg["l_min"], cfg["l_max"], p.c0,
        cfg["seed"], pool=ctx.pool("shadow-batch"),
    )


def find_nprime(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    seeds = ctx.seeds()
    rng = sample_rng(cfg["seed"], len(seeds))
    pairs = []
    for _ in range(cfg["connector_pairs"]):
        i, j = (int(v) for v in rng.integers(1, len(seeds) + 1, size=2))
        endpoint = apply_flow(seeds.symbol(i).lattice, p.N)
        pairs.append((seeds.symbol(j).lattice, endpoint))

    connector = get_connector(cfg.settings)
    nprime, rate, outcomes = scan_nprime(
        pairs, p, cfg["nprime_min"], cfg["nprime_max"], connector, pool=ctx.pool("find-nprime")
    )
    ctx.store.save_certificate("nprime", {"nprime": nprime, "rate": rate, "pairs": len(pairs)})

    report = Report(name="find-nprime")
    for o in outcomes:
        report.note("connector", pair=o.index, nprime=o.nprime, success=o.success,
                    dist_start=o.dist_start, dist_end=o.dist_end, iterations=o.iterations,
                    error=o.error)
    report.check("lem:join", "connector_rate", rate >= TARGET_RATE,
                 nprime=nprime, rate=rate, bound=TARGET_RATE, tol=p.connector_tol)
    report.summary = {"nprime": nprime, "rate": rate, "pairs": len(pairs)}
    return report


def build_sm(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    seeds = ctx.seeds()
    points = build_S_m(
        seeds, cfg["m"], cfg["K_sub"], p,
        connector=get_connector(cfg.settings),
        budget=cfg["build_budget"],
        pool=ctx.pool("build-sm"),
    )
    ctx.store.save_points(points)

    report = Report(name="build-sm")
    for pt in points:
        report.note("coded_point", word=list(pt.word), refinement=pt.refinement,
                    connectors=pt.connectors)
    report.summary = {"points": len(points), "m": cfg["m"], "K_sub": cfg["K_sub"],
                      "nprime": p.Nprime}
    return report


def verify_sm(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    seeds = ctx.seeds()
    points = ctx.points(cfg["m"])
    report = verify_S_m(points, seeds, p, pair_cap=cfg["pair_cap"], pool=ctx.pool("verify-sm"))
    summary = dict(report.summary)
    for pt in points:
        report.merge(tracking_report(pt, seeds, p))

    cert = certify_eta(points, p, sample_cap=CERTIFICATE_SAMPLE)
    ctx.store.save_certificate("eta", {
        "certified": float(cert.eta),
        "radius": float(cert.radius),
        "M_prime": float(cert.M_prime),
        "configured": cert.configured,
    })
    report.note("eta_certificate", certified=cert.eta, radius=cert.radius,
                M_prime=cert.M_prime, configured=cert.configured, points=cert.points)
    summary.update(violations=len(report.violations), eta_certified=float(cert.eta),
                   M_prime=float(cert.M_prime))
    report.summary = summary
    return report


def measure_stats(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    m = cfg["m"]
    points = ctx.points(m)
    horizon = p.horizon(m)
    report = Report(name="measure-stats")

    sigma = empirical_sigma(points)
    mu = empirical_mu(points, horizon)
    threshold = p.M / (p.c0 + 1)
    low = mass_fraction(mu, threshold, p.tol)
    allowed = mass_bound(m, p.N, p.Nprime) + 2 / horizon
    report.note("empirical_measures", sigma_atoms=len(sigma), mu_atoms=len(mu),
                horizon=horizon, total=mu.total())
    report.check("prop:main(i)", "mass_fraction", low <= allowed,
                 m=m, threshold=threshold, fraction=low, bound=allowed)

    s = p.separation
    for i, j in sample_pairs(len(points), cfg["pair_cap"], cfg["seed"]):
        ok, first = check_separated(points[i], points[j], horizon - 1, s, p)
        report.check("thm:main(ii)", "pair_separated", ok,
                     pair=[list(points[i].word), list(points[j].word)], time=first,
                     eps=s, n=horizon)
    count = max_separated_count(points, horizon, s, p.metric)
    report.check("thm:main(ii)", "separated_count", count == len(points),
                 count=count, points=len(points), n=horizon, eps=s)
    report.summary = {"mass_fraction": low, "mass_bound": allowed, "separated": count,
                      "points": len(points)}
    return report


def entropy_bound(ctx: RunContext) -> Report:
    cfg, p = ctx.cfg, ctx.params
    m, k_sub = cfg["m"], cfg["K_sub"]
    report = entropy_accounting(p.d, p.N, p.K, p.Nprime, cfg["entropy_eps"])
    horizon = p.horizon(m)
    rate = entropy_lower_bound(k_sub**m, horizon)
    report.note("coded_rate", count=k_sub**m, n=horizon, rate=rate,
                block_rate=float(mpmath.log(k_sub) / p.horizon_unit))
    report.summary["coded_rate"] = rate
    return report


COMMANDS = {
    "scan-an": scan_an,
    "build-s1": build_s1,
    "verify-s1": verify_s1,
    "shadow-batch": shadow_batch,
    "find-nprime": find_nprime,
    "build-sm": build_sm,
    "verify-sm": verify_sm,
    "measure-stats": measure_stats,
    "entropy-bound": entropy_bound,
}

PIPELINE = [
    "scan-an",
    "build-s1",
    "verify-s1",
    "find-nprime",
    "build-sm",
    "verify-sm",
    "measure-stats",
    "entropy-bound",
]
