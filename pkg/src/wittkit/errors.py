"""Exception types shared across the package.

Mathematical verdicts (non-membership, non-unit, bad sequence, ...) are never
raised as exceptions; they are returned as values.  Exceptions signal misuse,
violated preconditions, or insufficient truncation parameters.
"""


class WittkitError(Exception):
    """Base class for all package errors."""


class ExponentLevelMismatch(WittkitError):
    """An exponent denominator exceeds the ambient algebra's level."""


class InexactDivision(WittkitError):
    """Division by p was requested on a coefficient not divisible by p.

    When this fires inside a tower computation it means a claimed
    integrality failed at the current precision.
    """


class IntegralityFailure(WittkitError):
    """A structure-polynomial recursion produced a non-integer coefficient.

    This indicates an implementation bug, never a property of the input;
    callers must not catch it.
    """


class LengthMismatch(WittkitError):
    """Witt vector operands have incompatible lengths or primes."""


class CapExceeded(WittkitError):
    """A requested parameter exceeds a configured size cap."""


class InvalidSpec(WittkitError):
    """A tower or algebra specification violates its invariants."""


class InvalidRelations(WittkitError):
    """A relation set fails the confluence/termination validation."""


class NoRootAtTruncation(WittkitError):
    """A p-th root is not representable at the current truncation."""


class CannotExtend(WittkitError):
    """A compatible-root sequence cannot be extended at this precision."""


class UnitCheckFailed(WittkitError):
    """An element required to be a unit is not one at this precision."""


class RelationNotVerified(WittkitError):
    """A claimed module relation does not hold exactly."""


class AlmostCMViolation(WittkitError):
    """The colon-scaling hypothesis of the bounded-map extension fails."""


class NoWitness(WittkitError):
    """No witness can be produced at the current precision."""


class NotMonic(WittkitError):
    """A defining polynomial that must be monic is not."""


class RingSpecError(WittkitError):
    """Base class for ring-spec language errors (carries line/column)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, col {column}: {message}"
        super().__init__(message)


class ParseError(RingSpecError):
    """Malformed ring-spec input."""


class UnknownReference(RingSpecError):
    """A check refers to an undeclared tower or algebra."""
