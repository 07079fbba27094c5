"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes, so keep the grouping stable.
"""


class FocountError(Exception):
    """Base class for all errors raised by the package."""


class InputError(FocountError):
    """Malformed or inconsistent input (exit code 2)."""


class ParseError(InputError):
    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        if position is not None and text is not None:
            line = text.count("\n", 0, position) + 1
            col = position - (text.rfind("\n", 0, position) + 1) + 1
            message = f"{message} (line {line}, column {col})"
        elif position is not None:
            message = f"{message} (offset {position})"
        super().__init__(message)


class FormatError(InputError):
    """A serialized object has the wrong shape (e.g. bitstring length)."""


class DomainError(InputError):
    """A value lies outside the universe or a universe is too small/empty."""


class UnknownSymbolError(InputError):
    """A symbol is not part of the vocabulary it is used with."""


class ArityError(InputError):
    pass


class EncodingError(InputError):
    """A propositional formula cannot be encoded as requested."""


class PreconditionError(FocountError):
    """An operation was called on input outside its documented domain."""


class EvaluationError(FocountError):
    """Model checking hit an unbound variable or symbol."""


class StructuralError(FocountError):
    """A circuit (or circuit structure) violates the circuit invariants."""


class ResourceError(FocountError):
    """The enumeration budget is too small for the requested count."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"enumeration needs {required} candidate assignments, budget is {budget}"
            f" (rerun with --budget {required})"
        )
