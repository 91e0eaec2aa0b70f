"""Exception types shared across the package."""


class ShadivError(Exception):
    """Base class for all package errors."""


class ZeroInput(ShadivError):
    """An operation received 0 where a nonzero value is required."""


class BoundExceeded(ShadivError):
    """Input exceeds the configured desk-scale bound."""


class NonPrime(ShadivError):
    """A prime argument failed its primality test."""


class ExcludedPrime(ShadivError):
    """A prime argument is excluded by the operation's hypotheses."""


class PrecisionExhausted(ShadivError):
    """A local decision procedure ran out of precision.

    Carries the undecided residues so the caller can report them.
    """

    def __init__(self, message, undecided=()):
        super().__init__(message)
        self.undecided = tuple(undecided)


class PointNotOnCurve(ShadivError):
    """A point does not satisfy the curve equation."""


class WitnessSearchExhausted(ShadivError):
    """No witness prime realizing a sign pattern was found within the bound."""


class NoWitnessClass(ShadivError):
    """No Selmer class survives the non-divisibility screen."""


class ConductorUnavailable(ShadivError):
    """The conductor could not be computed and was not supplied."""


class InternalPigeonholeViolation(ShadivError):
    """Self-test failure: the pigeonhole guarantee did not produce a factor."""


class SchemaError(ShadivError):
    """A certificate file does not validate against the schema."""
