"""Exception types shared across the package."""


class GaugeForgeError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(GaugeForgeError, SyntaxError):
    """Malformed expression text.

    ``offset`` is the byte offset into the UTF-8 encoded input where
    parsing failed.
    """

    def __init__(self, message, text, offset):
        super().__init__(f"{message} at offset {offset}")
        self.msg = message
        self.text = text
        self.offset = offset


class UnknownIdentifier(GaugeForgeError, NameError):
    def __init__(self, name, offset=None):
        where = "" if offset is None else f" at offset {offset}"
        super().__init__(f"unknown identifier {name!r}{where}")
        self.name = name
        self.offset = offset


class UnboundSymbol(GaugeForgeError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"no value bound for symbol {self.name!r}"


class DomainError(GaugeForgeError, ArithmeticError):
    """Evaluation left the real domain (pole, overflow, NaN)."""


class InvalidLagrangian(GaugeForgeError, ValueError):
    pass


class NotSecondOrder(GaugeForgeError, ValueError):
    pass


class InvalidGauge(GaugeForgeError, ValueError):
    pass


class InternalNullViolation(GaugeForgeError, AssertionError):
    """A total derivative failed null certification; indicates a bug."""


class TrajectoryTooShort(GaugeForgeError, ValueError):
    pass


class NonFiniteState(GaugeForgeError, FloatingPointError):
    def __init__(self, step, t):
        super().__init__(f"state became non-finite at step {step} (t={t!r})")
        self.step = step
        self.t = t


class ForceContainsState(GaugeForgeError, ValueError):
    pass


class ConflictingParameters(GaugeForgeError, ValueError):
    pass


class InvalidParameter(GaugeForgeError, ValueError):
    pass


class ConfigError(GaugeForgeError, ValueError):
    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key
