"""Exceptions raised across the package.

Three families map onto the CLI exit codes: validation failures (2), exceeded
budgets (3) and failed constructions (4).
"""
from typing import Any, Optional, Sequence


class EdsemError(Exception):
    """Base class of all package errors."""

    exit_code = 1


class ValidationError(EdsemError, ValueError):
    """Input or intermediate data violates a structural requirement."""

    exit_code = 2


class BudgetError(EdsemError, RuntimeError):
    """A configured size, sweep or closure budget would be exceeded."""

    exit_code = 3


class ConstructionError(EdsemError, RuntimeError):
    """A term or system that should exist could not be built."""

    exit_code = 4


class NotAssociative(ValidationError):
    def __init__(self, a: int, b: int, c: int, names: Optional[Sequence[str]] = None):
        self.triple = (a, b, c)
        shown = [names[x] for x in self.triple] if names is not None else self.triple
        self.names = tuple(str(x) for x in shown)
        super().__init__(
            f"Table is not associative: ({shown[0]}*{shown[1]})*{shown[2]} != "
            f"{shown[0]}*({shown[1]}*{shown[2]})"
        )


class IndexOutOfRange(ValidationError):
    def __init__(self, row: int, column: int, value: Any, size: int):
        self.position = (row, column)
        self.value = value
        super().__init__(
            f"Table entry at ({row}, {column}) is {value!r}, expected an element of 0..{size - 1}"
        )


class NotAGroup(ValidationError):
    pass


class NotAnIdeal(ValidationError):
    pass


class NotCompletelySimple(ValidationError):
    pass


class FormulaMismatch(ValidationError):
    pass


class TermSyntaxError(ValidationError):
    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


class UnknownElement(ValidationError):
    def __init__(self, token: str):
        self.token = token
        super().__init__(f"Unknown element {token!r}")


class VariableOutOfArity(ValidationError):
    def __init__(self, variable: int, arity: int):
        self.variable = variable
        self.arity = arity
        super().__init__(f"Variable x{variable} exceeds arity {arity}")


class ZeroPower(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class SizeCapExceeded(BudgetError):
    def __init__(self, size: int, cap: int, what: str = "semigroup"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} of size {size} exceeds the size cap {cap}")


class SweepBudgetExceeded(BudgetError):
    def __init__(self, points: int, budget: int):
        self.points = points
        self.budget = budget
        super().__init__(f"Sweep over {points} points exceeds the budget {budget}")


class ConstructionFailed(ConstructionError):
    pass


class NotDistinguishable(ConstructionError):
    def __init__(self, alpha: str, beta: str, reason: str):
        self.pair = (alpha, beta)
        super().__init__(f"Cannot separate {alpha} and {beta}: {reason}")
