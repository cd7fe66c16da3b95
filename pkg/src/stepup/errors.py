"""Shared error types."""


class BudgetExceededError(RuntimeError):
    """An exhaustive scan or exact solve would exceed its configured budget."""


class InvariantViolation(AssertionError):
    """A structural invariant that should hold by construction failed."""
