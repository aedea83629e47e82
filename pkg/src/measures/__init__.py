"""Empirical measures along coded orbits, separated sets and entropy accounting.

Usage:
    from measures import empirical_mu, mass_fraction

    mu = empirical_mu(points, horizon=p.horizon(m))
    low = mass_fraction(mu, p.M / (p.c0 + 1))
"""

from measures.empirical import (
    Atom,
    EmpiricalMeasure,
    empirical_mu,
    empirical_sigma,
    mass_bound,
    mass_fraction,
)
from measures.entropy import (
    entropy_accounting,
    entropy_lower_bound,
    full_symbol_count_log,
    max_separated_count,
    minimal_N,
    preconditions,
)

__all__ = [
    "Atom",
    "EmpiricalMeasure",
    "empirical_mu",
    "empirical_sigma",
    "entropy_accounting",
    "entropy_lower_bound",
    "full_symbol_count_log",
    "mass_bound",
    "mass_fraction",
    "max_separated_count",
    "minimal_N",
    "preconditions",
]
