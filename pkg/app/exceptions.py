"""Ошибки симулятора.

Иерархия наследует встроенные исключения, поэтому вызывающий код может по-прежнему
ловить ``ValueError`` там, где речь идёт о некорректных параметрах.
"""


class ShadowSimError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(ShadowSimError, ValueError):
    """A numeric parameter is outside its admissible range."""


class DomainError(ParameterError):
    """A transform argument is outside the function's domain (e.g. s < 0)."""


class StructuralError(ShadowSimError, ValueError):
    """Inputs have the wrong shape or variant (missing mother index, mismatched grids)."""


class DivergenceError(ShadowSimError, ArithmeticError):
    """An integral or expectation is infinite, or a truncation bound cannot be met."""


class UnsupportedError(ShadowSimError, NotImplementedError):
    """The requested combination has no analytic evaluator."""


class ConfigError(ShadowSimError, ValueError):
    """An experiment config could not be parsed or validated."""

    def __init__(self, message: str, diagnostics: list[str] | None = None):
        self.diagnostics = diagnostics or []
        details = "\n".join(f"  {line}" for line in self.diagnostics)
        super().__init__(f"{message}\n{details}" if details else message)


class PropertyFailure(ShadowSimError, AssertionError):
    """A verification property did not hold."""
