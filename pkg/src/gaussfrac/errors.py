"""Exception types shared by every module.

Each class name doubles as the machine-readable error name emitted by the CLI.
"""
from __future__ import annotations


class GaussFracError(Exception):
    """Base class; ``name`` is the stable identifier used in error objects."""

    @property
    def name(self) -> str:
        return type(self).__name__


class ZeroDenominator(GaussFracError, ZeroDivisionError):
    def __init__(self, message: str = "zero denominator", index: int | None = None):
        super().__init__(message)
        self.index = index


class AmbiguousChoice(GaussFracError):
    """The certified error disc straddles a decision boundary."""


class PrecisionExhausted(GaussFracError):
    """Precision was doubled up to the cap without resolving a decision."""


class RationalRoot(GaussFracError, ValueError):
    pass


class DegenerateDisc(GaussFracError, ValueError):
    pass


class ExceededBudget(GaussFracError):
    def __init__(self, message: str, steps: int | None = None):
        super().__init__(message)
        self.steps = steps


class BridgeSearchFailed(GaussFracError):
    def __init__(self, message: str, junction: int | None = None):
        super().__init__(message)
        self.junction = junction


class PoleHit(GaussFracError, ZeroDivisionError):
    pass


class ShapeViolation(GaussFracError, ValueError):
    def __init__(self, message: str, clause: str = ""):
        super().__init__(message)
        self.clause = clause


class InexactDegeneracy(GaussFracError):
    """|z| = 1 cannot be decided from an approximate value."""
