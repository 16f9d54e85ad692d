"""Exception types shared across the package."""


class QManifoldError(Exception):
    """Base class for all errors raised by this package."""


class ExprSyntaxError(QManifoldError):
    """Malformed expression source.

    Carries the 0-based byte offset of the offending token and a short
    description of what was expected there.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownIdentifierError(ExprSyntaxError):
    """Identifier outside the allowed set {x1, x2, x3} + function names."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier '{name}'", position)
        self.name = name


class DomainError(QManifoldError):
    """Evaluation left the domain of a subexpression (log/sqrt/division/power)."""

    def __init__(self, message: str, expression: str, point):
        super().__init__(f"{message} in '{expression}' at point {tuple(point)}")
        self.expression = expression
        self.point = tuple(point)


class NonFiniteError(QManifoldError):
    """A jet component evaluated to NaN or infinity (typically overflow)."""


class NotPositiveDefiniteError(QManifoldError):
    """A metric coefficient was <= 0 at the evaluation point."""

    def __init__(self, coefficient: str, value: float, point):
        super().__init__(
            f"metric coefficient {coefficient} = {value} is not positive "
            f"at point {tuple(point)}"
        )
        self.coefficient = coefficient
        self.value = value


class DegenerateVectorError(QManifoldError):
    """Vector fails the orbit-basis condition x3*((x1)^2 + (x2)^2) != 0."""


class NullDirectionError(QManifoldError):
    """Directional Ricci quotient undefined: the squared norm vanishes."""


class DegeneratePlaneError(QManifoldError):
    """Sectional curvature undefined: the 2-plane denominator vanishes."""


class DegenerateParameterError(QManifoldError):
    """Chart parameter outside the admissible range (catenoid needs u != 0)."""
