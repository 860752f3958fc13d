"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NonFiniteValueError(ArithmeticError):
    """The requested value exists only as +/-inf (e.g. the 0-quantile of a normal)."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class IntegrandError(ArithmeticError):
    """The integrand returned a non-finite value inside the integration domain."""

    def __init__(self, message, abscissa):
        super().__init__(message)
        self.abscissa = abscissa


class ConvergenceError(ArithmeticError):
    """Adaptive quadrature ran out of subdivisions before meeting its tolerance."""

    def __init__(self, message, value, error_estimate):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class SpecError(ValueError):
    """A distribution or copula spec string could not be parsed."""

    def __init__(self, message, token="", position=0):
        super().__init__(f"{message} (token {token!r} at position {position})")
        self.token = token
        self.position = position
