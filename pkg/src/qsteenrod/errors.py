"""Exception types shared across the package."""


class QSteenrodError(Exception):
    """Base class for all errors raised by this package."""


class ZeroInverse(QSteenrodError):
    """Attempted to invert 0 in F_p."""


class NegativeValuation(QSteenrodError):
    """A factorial ratio has more factors of p downstairs than upstairs."""


class MixedContext(QSteenrodError):
    """Operands live over different primes or different q-truncations."""


class NotDivisor(QSteenrodError):
    """A degree-2 divisor class was required."""


class MissingSteenrodData(QSteenrodError):
    """No classical Steenrod entry for the requested (prime, class)."""


class InconsistentSeed(QSteenrodError):
    """The covariant-constancy recurrence contradicts a seeded slot."""


class NegativePowerResidue(QSteenrodError):
    """A nonzero entry landed on a slot whose forced t-exponent is negative."""


class NonReducible(QSteenrodError):
    """A retained rational coefficient has p in its denominator."""


class UnknownManifold(QSteenrodError):
    """Unknown built-in manifold name."""


class NotGenerated(QSteenrodError):
    """Expression uses a non-divisor where the generator strategy needs one."""


class CapExceeded(QSteenrodError):
    """Requested cell degree exceeds the finite degree cap."""


class ManifoldFormatError(QSteenrodError):
    """A manifold or result file failed validation."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
