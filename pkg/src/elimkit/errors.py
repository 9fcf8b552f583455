"""Exception types shared across the package."""


class ElimkitError(Exception):
    """Base class for all errors raised by elimkit."""


class ParseError(ElimkitError):
    """Syntax or name-resolution error in a program or query expression."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class OperatorPresentError(ElimkitError):
    """An operation that requires an operator-free formula received one
    containing second-order operators, macros, or quantifiers."""


class SignatureError(ElimkitError):
    """An atom outside the interpretation's signature, or a signature
    exceeding the enumeration bound."""


class ExpansionError(ElimkitError):
    """Quantifier expansion failed: empty domain or unbound variable."""


class MacroError(ElimkitError):
    """Macro registration or lookup failure (duplicate, unknown, arity)."""


class EngineLimitError(ElimkitError):
    """Engine step limit or macro expansion depth exceeded."""


class SolverError(ElimkitError):
    """External solver invocation failed or produced unusable output."""


class RenderError(ElimkitError):
    """Requested output format is incompatible with the formula."""
