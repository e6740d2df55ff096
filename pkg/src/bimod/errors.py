"""Exception types shared across the package."""


class BimodError(Exception):
    """Base class for all bimod errors."""


class ParseError(BimodError):
    """A file could not be parsed.

    Carries the offending path and 1-based line number when known, so CLI
    messages can point at the exact input line.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        elif line is not None:
            prefix = f"line {line}: "
        super().__init__(prefix + message)


class ValidationError(BimodError):
    """Input data violates a documented contract (negative weight, empty graph, ...)."""


class MetadataJoinError(ValidationError):
    """Node metadata refers to labels that do not exist in the graph."""

    def __init__(self, missing):
        self.missing = list(missing)
        shown = ", ".join(str(x) for x in self.missing[:20])
        extra = "" if len(self.missing) <= 20 else f" (+{len(self.missing) - 20} more)"
        super().__init__(f"metadata labels not present in graph: {shown}{extra}")


class ConvergenceError(BimodError):
    """An iterative solver did not reach the requested tolerance.

    ``residual`` holds the last observed convergence measure so callers can
    decide whether the partial answer is usable.
    """

    def __init__(self, message, residual=None, iterations=None):
        self.residual = residual
        self.iterations = iterations
        detail = message
        if residual is not None:
            detail += f" (residual {residual:.3e}"
            if iterations is not None:
                detail += f" after {iterations} iterations"
            detail += ")"
        super().__init__(detail)


class ConfigError(BimodError):
    """A configuration file or parameter set is malformed."""
