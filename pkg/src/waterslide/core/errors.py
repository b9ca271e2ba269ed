"""Domain signals raised or warned by the computational services."""


class InfeasibleRegionError(RuntimeError):
    """No test channel or operating point satisfies the constraints."""


class InfeasibleRateWarning(UserWarning):
    """Rate at or above capacity; an exponent or bound degenerates to its sentinel."""
