"""Exception taxonomy shared across the package."""

from __future__ import annotations


class CraigError(Exception):
    """Base class for all errors raised by this package."""


class FormulaError(CraigError):
    """Ill-formed formula (arity mismatch, bad quantifier block, ...)."""


class ParseError(CraigError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class MissingSymbolError(CraigError):
    """Formula mentions a symbol the structure does not interpret."""


class PartialAssignmentError(CraigError):
    """Assignment does not cover every free variable."""


class NonSentenceError(CraigError):
    """Operation requires sentences (no free variables)."""


class NotNNFError(CraigError):
    """Tableau input must be in negation normal form."""


class BranchNotSaturatedError(CraigError):
    """Model extraction requires a fully expanded open branch."""


class OpenTableauError(CraigError):
    """Interpolant propagation requires a closed tableau."""


class NotProvedWithinBudget(CraigError):
    """No verdict within the rule-application budget."""

    def __init__(self, message: str, budget_spent: int = 0):
        self.budget_spent = budget_spent
        super().__init__(message)


class NotValid(CraigError):
    """A finite countermodel to the claimed implication was found."""

    def __init__(self, message: str, structure=None):
        self.structure = structure
        super().__init__(message)


class JointlyConsistent(CraigError):
    """The two theories admit a common model; no separator exists."""

    def __init__(self, message: str, structure=None):
        self.structure = structure
        super().__init__(message)


class ImplicitDefinabilityRefuted(CraigError):
    """A Padoa pair witnesses that no explicit definition exists."""

    def __init__(self, message: str, pair=None):
        self.pair = pair
        super().__init__(message)


class NotSplittable(CraigError):
    """Theory admits no (sigma, tau)-splitting."""


class UnknownFragmentError(CraigError):
    """cip_status was asked about a fragment outside the table."""
