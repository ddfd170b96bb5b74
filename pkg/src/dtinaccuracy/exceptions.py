"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid parameter value or argument combination."""


class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


class DivergenceError(ArithmeticError):
    """A functional is infinite (e.g. the assigned density vanishes where the actual does not)."""


class IntegrandError(ArithmeticError):
    """The integrand produced a non-finite value at an interior abscissa."""

    def __init__(self, abscissa, value):
        self.abscissa = float(abscissa)
        self.value = value
        super().__init__(f"integrand returned {value!r} at x={self.abscissa!r}")
