"""Error hierarchy shared across the package.

Every failure mode that callers are expected to catch has its own class;
anything raised from this module signals a *refusal to guess*, never a
silent fallback.
"""

from __future__ import annotations


class SpindexError(Exception):
    """Base class for all package errors."""


class ParseError(SpindexError):
    """Malformed textual or JSON input."""


class ExactArithmeticError(SpindexError):
    """Operation not representable in exact form (e.g. mixing sqrt fields)."""


class PrecisionError(SpindexError):
    """A guarded decimal was queried inside its guard band."""


class HalfIntegerAmbiguity(PrecisionError):
    """Nearest-integer query at an exact half integer."""


class DegenerateIterate(SpindexError):
    """Index requested for an iterate with eigenvalue 1."""


class NonpositiveMeanIndex(SpindexError):
    """An orbit with mean index <= 0 entered a recurrence computation."""


class EmptyWindow(SpindexError):
    """No candidate survived the search window."""


class ParamTooTight(SpindexError):
    """Parameter derivation produced an empty or contradictory window."""


class BoundaryNotSquareZero(SpindexError):
    """Filtered complex boundary fails d(d(x)) = 0 over the chosen field."""


class FiltrationViolation(SpindexError):
    """Boundary entry points from lower to strictly higher filtration."""


class ZetaMismatch(SpindexError):
    """Bar endpoint counts disagree with declared orbit homology ranks."""


class ClassificationUndefined(SpindexError):
    """Good/bad label refused (even-order root of unity, degenerate prime)."""


class ChieqUndefined(SpindexError):
    """Equivariant Euler characteristic only known up to bounds."""


class NotApplicable(SpindexError):
    """Degree-shift rule invoked outside its hypotheses."""


class EventMismatch(SpindexError):
    """Stored recurrence event fails re-verification."""


class HypothesisViolation(SpindexError):
    """Staircase construction hypotheses fail (ordering, degrees, ties)."""


class RationalRatio(SpindexError):
    """Ellipsoid semiaxis ratio is rational where irrationality is required."""


class NonResonanceFailed(SpindexError):
    """Mean-index vector violates the non-resonance condition."""


class UsageError(SpindexError):
    """Bad command-line invocation."""
