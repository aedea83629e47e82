"""Exceptions raised by the lab.

Check violations are never raised; they travel inside report objects. The
classes below signal engineering failures (precision, budgets, bad input) and
map to exit code 2 in the CLI.
"""

from __future__ import annotations


class LabError(RuntimeError):
    """Base class for engineering failures."""

    exit_code = 2


class SingularDrift(LabError):
    """A matrix left the determinant-one tolerance band."""


class PrecisionExhausted(LabError):
    """A flow time exceeds the overflow guard of the active precision."""


class ReductionStall(LabError):
    """Basis reduction did not terminate within its pass budget."""


class EnumerationOverflow(LabError):
    """Shortest-vector enumeration box is too large (basis not reduced)."""


class NoUnimodularCandidate(LabError):
    """No determinant-one integer candidate in the quotient-distance search."""


class DisplacementTooLarge(LabError):
    """A displacement is outside the validity ball of the decomposition."""


class NotClose(LabError):
    """Two points are not within the requested quotient distance."""


class DecompositionDrift(LabError):
    """The reconstruction identity g·u⁺ = c·u⁻ failed its tolerance."""


class InsufficientCubes(LabError):
    """Too few inner cubes meet A_N′ at the search resolution."""


class ConnectorNotFound(LabError):
    """The shooting search exhausted its iteration or N′ budget.

    `best` holds the closest attempt when the search produced one.
    """

    def __init__(self, message: str, best=None) -> None:
        super().__init__(message)
        self.best = best


class BudgetExceeded(LabError):
    """A build would exceed its point budget."""


class CertificationFailed(LabError):
    """An empirically certified radius violates the required inequality."""


class ConfigInvalid(LabError, ValueError):
    """A run configuration violates one of the construction's constraints."""


class StateMissing(LabError):
    """A pipeline stage needs state an earlier stage has not stored."""
