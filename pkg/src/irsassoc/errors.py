"""Exception hierarchy shared across the package."""


class IrsAssocError(Exception):
    """Base class for all package errors."""


class InvalidInputError(IrsAssocError, ValueError):
    """An argument is outside the domain of the operation."""


class GeometryError(IrsAssocError, ValueError):
    """A node lies behind a panel, or two points coincide."""


class InfeasibleError(IrsAssocError):
    """The instance admits no one-to-one association (e.g. more sources than IRSs)."""


class CapExceededError(IrsAssocError):
    """Exhaustive enumeration refused because the candidate count is above the cap."""

    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} candidates exceed the enumeration cap of {cap}")


class ContractError(IrsAssocError, AssertionError):
    """A caller broke a precondition (unmatched triple, invalid association)."""
