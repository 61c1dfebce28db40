"""Error taxonomy shared by all modules.

Every failure of a stated precondition or internal contract raises one of
these; nothing is ever silently coerced.  Division by zero in scalar
arithmetic surfaces as the usual ZeroDivisionError from fractions.Fraction,
except where a named error below is more specific (NotInvertible for series
with vanishing constant term, for instance).
"""


class HeckeKLRError(Exception):
    """Base class for all package errors."""


class InvalidParam(HeckeKLRError):
    """Parameter set violates a validation rule (variant, q, Q, a, I)."""


class RingMismatch(HeckeKLRError):
    """Operands live in different polynomial rings (kind or variable count)."""


class LabelMismatch(HeckeKLRError):
    """Operands carry different idempotent labels, or an operator was fed a
    component it is not defined on."""


class VariantMismatch(HeckeKLRError):
    """A degenerate-only operation met a q-variant object or vice versa."""


class IndexOutOfRange(HeckeKLRError):
    """Generator or variable index outside 1..d (or 1..d-1)."""


class InvalidBasisKey(HeckeKLRError):
    """Basis key (w, I, n, i) fails its structural constraints."""


class DegreeBoundExceeded(HeckeKLRError):
    """An element's action grows faster than the declared degree bound."""


class SingularTable(HeckeKLRError):
    """A basis-operator table failed its full-column-rank certificate."""


class NotInvertible(HeckeKLRError):
    """Series inversion or a case-split conversion hit a zero constant term."""


class NotStabilized(HeckeKLRError):
    """A capped dimension count failed its stabilization check."""


class FiltrationLeak(HeckeKLRError):
    """A differential left the declared filtration level."""


class InternalError(HeckeKLRError):
    """An internal exactness contract was violated (non-exact division,
    inconsistent linear system, rank certificate broken)."""
