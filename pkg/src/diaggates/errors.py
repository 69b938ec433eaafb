"""Exception types raised by diaggates."""


class InvalidInputError(ValueError):
    """Input violates a documented precondition (shape, hermiticity, range...)."""


class InfeasibleTargetError(ValueError):
    """Requested diagonal is not majorized by the spectrum."""


class UnsupportedOrderError(ValueError):
    """No closed form is available for the requested moment order."""


class ResourceLimitError(RuntimeError):
    """Brute-force enumeration would exceed its budget."""
