"""Shared exception types."""

from __future__ import annotations


class BudgetExceededError(RuntimeError):
    """A configured computation budget ran out.

    ``budget`` names which limit was hit so callers (and the CLI exit path)
    can report it.
    """

    def __init__(self, budget: str, limit: int, context: str = ""):
        self.budget = budget
        self.limit = limit
        msg = f"budget {budget!r} exhausted (limit {limit})"
        if context:
            msg += f" while {context}"
        super().__init__(msg)


class StageCollisionError(AssertionError):
    """An automaton received both a non-freeness witness and a freeness
    certificate; this contradicts the rigid-stabilizer criterion and aborts
    the run."""


class SingularSystemError(AssertionError):
    """The fixed-point measure linear system was singular.

    A minimized section automaton always yields a spectral radius below one,
    so this indicates an internal bug and must abort loudly.
    """
