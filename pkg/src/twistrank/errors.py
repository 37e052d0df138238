"""Exception types shared across the package."""


class TwistrankError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(TwistrankError):
    """Invalid graph data: bad ids, conflicting signs, self-loops, ragged attributes."""


class ParseError(GraphError):
    """A file could not be parsed.  Carries the offending path and line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class EnumerationBudgetError(TwistrankError):
    """Path enumeration would exceed the caller-supplied budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration requires {required} paths, exceeding the budget of {budget}"
        )
        self.required = required
        self.budget = budget


class SolveError(TwistrankError):
    """Temperature solving failed: unachievable target or singular system."""


class ConvergenceError(SolveError):
    """An iterative solver hit its iteration cap.  Carries the final residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (final residual {residual:.3e})")
        self.residual = residual
