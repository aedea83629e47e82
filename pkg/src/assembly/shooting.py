"""Connector search by Newton shooting in the unstable coordinates.

Candidates are z = Γ·y_rep·u⁺(s)·c. Flowing for N′ steps gives
T^{N′}z = Γ·y_rep·a^{N′}·u⁺(s·e^{N′(d+1)/d})·c, so the unstable mismatch at
the far end responds to s through the known Jacobian e^{N′(d+1)/d}·I.

Each evaluation splits the end mismatch γ·T^{N′}z → x as u⁺·c·u⁻ for every
candidate copy γ and keeps the copy whose centralizer and stable parts are
smallest, since only the unstable part can be steered from the start. Newton
steps drive the unstable part to zero; the centralizer part commutes with the
flow and is moved to the start as long as z stays inside the start ball. The
stable part contracts when pulled back, so whatever remains of it at the end
is what the tolerance must absorb. No accepted step ever leaves the start ball.
"""

from __future__ import annotations

import logging

import mpmath
import numpy as np

from assembly.base import BaseConnector, ConnectorResult
from construction import ConstructionParams
from core import GroupElement, identity, mat_inverse, sup_dev
from core.errors import ConnectorNotFound, DisplacementTooLarge, NoUnimodularCandidate
from flow import FlowParams, scale_columns
from geometry import MetricConfig, gamma_candidates, group_dist, quotient_dist
from lattice import LatticeClass, lattice_class
from shadowing import split_left, unstable_element

log = logging.getLogger("cusplab.assembly.shooting")

DEFAULT_STARTS = 8
DEFAULT_MAX_STEP = 25
MIN_DAMPING = 2.0**-10


def start_offset(s, c: GroupElement, d: int) -> mpmath.mpf:
    """Group distance from y_rep to y_rep·u⁺(s)·c (left invariance drops y_rep)."""
    return group_dist(identity(d + 1), unstable_element(s, d) @ c)


def end_mismatch(x: LatticeClass, end: LatticeClass, metric: MetricConfig) -> dict | None:
    """Split (γ·end)⁻¹·x_rep = u⁺(a)·c·u⁻ for the copy γ with the smallest c and u⁻.

    Returns None when no candidate copy gives a splittable mismatch.
    """
    best = None
    for gamma in gamma_candidates(x.basis, end.basis, metric.gamma_box):
        aligned = GroupElement(np.array(gamma, dtype=object)) @ end.basis
        try:
            a, c, u_minus = split_left(mat_inverse(aligned) @ x.basis)
        except DisplacementTooLarge:
            continue
        transverse = max(sup_dev(c), sup_dev(u_minus))
        residual = max(abs(v) for v in a)
        key = (transverse, residual)
        if best is None or key < best["key"]:
            best = {"key": key, "a": a, "c": c, "transverse": transverse,
                    "residual": residual, "gamma": gamma}
    return best


class ShootingConnector(BaseConnector):
    """Damped Newton shooting with seeded multi-start over the start ball."""

    def __init__(self, config: dict | None = None) -> None:
        super().__init__(config)
        self.starts = int(self.config.get("connector_starts", DEFAULT_STARTS))
        self.max_step = int(self.config.get("connector_budget", DEFAULT_MAX_STEP))
        self.seed = int(self.config.get("seed", 42))

    def start_points(self, d: int, tol: float, nprime: int) -> list[tuple]:
        """s = 0 first, then seeded uniform draws from the cube of radius tol/2."""
        rng = np.random.default_rng([self.seed, nprime, d])
        out = [tuple(mpmath.mpf(0) for _ in range(d))]
        for _ in range(self.starts - 1):
            draw = rng.uniform(-0.5, 0.5, size=d) * tol
            out.append(tuple(mpmath.mpf(float(v)) for v in draw))
        return out

    def find(
        self,
        x: LatticeClass,
        y: LatticeClass,
        p: ConstructionParams,
        tol: float | None = None,
        nprime: int | None = None,
    ) -> ConnectorResult:
        tol = p.connector_tol if tol is None else tol
        nprime = p.Nprime if nprime is None else nprime
        best: ConnectorResult | None = None
        for k, s0 in enumerate(self.start_points(p.d, tol, nprime)):
            result = self.shoot(x, y, p, s0, tol, nprime)
            result.info["start"] = k
            if result.success:
                log.debug("Connector found from start %d after %d steps (N′=%d)",
                          k, result.iterations, nprime)
                return result
            if best is None or result.dist_end < best.dist_end:
                best = result
        raise ConnectorNotFound(
            f"No connector within {tol:.3g} at N′ = {nprime} after {self.starts} starts "
            f"(best start distance {mpmath.nstr(best.dist_start, 4)}, "
            f"end distance {mpmath.nstr(best.dist_end, 4)}, "
            f"status {best.info['status']})",
            best=best,
        )

    def shoot(
        self,
        x: LatticeClass,
        y: LatticeClass,
        p: ConstructionParams,
        s0: tuple,
        tol: float,
        nprime: int,
    ) -> ConnectorResult:
        """One damped Newton run from the start parameter s0.

        The returned start point always lies within tol of y; steps that
        would leave the start ball end the run instead of being taken.
        """
        d = p.d
        metric = p.metric
        expand = mpmath.exp(nprime * FlowParams(d).expansion_rate)
        radius = mpmath.mpf(tol)
        xtol = radius / 1000
        y_rep = y.basis

        s = list(s0)
        c_start = identity(d + 1)
        damping = mpmath.mpf(1)
        prev = mpmath.inf
        info = {"nfev": 0, "nstep": 0, "status": "budget", "transverse": None}
        if start_offset(s, c_start, d) >= radius:
            raise ValueError(f"Start parameter {s0} lies outside the start ball {tol:.3g}")

        while info["nstep"] < self.max_step:
            start_rep = y_rep @ unstable_element(s, d) @ c_start
            end = lattice_class(scale_columns(start_rep, nprime), validate=False)
            info["nfev"] += 1
            split = end_mismatch(x, end, metric)
            if split is None:
                info["status"] = "no aligned copy"
                break
            info["transverse"] = float(split["transverse"])
            residual = split["residual"]
            if residual <= xtol:
                if sup_dev(split["c"]) <= xtol:
                    info["status"] = "converged"
                    break
                absorbed = c_start @ split["c"]
                if start_offset(s, absorbed, d) >= radius:
                    info["status"] = "centralizer exceeds start ball"
                    break
                c_start = absorbed
                info["nstep"] += 1
                continue
            if residual < prev:
                damping = min(mpmath.mpf(1), damping * 2)
            else:
                damping /= 2
                if damping < MIN_DAMPING:
                    info["status"] = "stalled"
                    break
            prev = residual
            trial = [si + damping * ai / expand for si, ai in zip(s, split["a"])]
            info["nstep"] += 1
            if start_offset(trial, c_start, d) >= radius:
                info["status"] = "left start ball"
                break
            s = trial

        start_rep = y_rep @ unstable_element(s, d) @ c_start
        z = lattice_class(start_rep)
        end = lattice_class(scale_columns(start_rep, nprime), validate=False)
        try:
            end_dist = quotient_dist(x, end, metric)
        except NoUnimodularCandidate:
            end_dist = mpmath.inf
        info["s"] = [float(v) for v in s]
        info["c_start"] = float(sup_dev(c_start))
        return ConnectorResult(
            z=z,
            dist_start=quotient_dist(z, y, metric),
            dist_end=end_dist,
            iterations=info["nstep"],
            nprime=nprime,
            tol=tol,
            start_rep=start_rep,
            info=info,
        )
