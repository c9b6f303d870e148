"""
Exception hierarchy shared by the library and the command line.

Every domain error derives from both MagicLabError and ValueError, so
callers can catch whichever they prefer. The CLI maps MagicLabError to
exit code 1.
"""


class MagicLabError(Exception):
    """Base class for all magiclab errors"""


class OrderMismatchError(MagicLabError, ValueError):
    """Operands have different orders"""


class NotMagicError(MagicLabError, ValueError):
    """A magic-only operation received a matrix that is not magic"""


class UnsupportedOrderError(MagicLabError, ValueError):
    """Order outside the operation's domain"""


class NotMCPMError(MagicLabError, ValueError):
    """A magic classifying permutation matrix was required"""


class NotAWitnessError(MagicLabError, ValueError):
    """The permutation does not witness the requested relation"""


class MatrixFormatError(MagicLabError, ValueError):
    """Matrix or permutation text could not be parsed"""


class ConstructionError(MagicLabError, ValueError):
    """No integral square with the requested structure could be built"""


class FixtureError(MagicLabError, ValueError):
    """A verification fixture is missing or malformed"""


class InvariantViolation(MagicLabError, AssertionError):
    """A mathematical invariant that must always hold was violated"""
