from __future__ import annotations


class CombprobError(Exception):
    """Base class for every error raised by this package."""


class ConstructionError(CombprobError, ValueError):
    """A measure could not be built because an axiom is violated outright."""

    def __init__(self, axiom: str, message: str, event=None):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.event = event


class EventNotInFamilyError(CombprobError, LookupError):
    def __init__(self, event):
        super().__init__(f"event {event} is not a member of the family")
        self.event = event

    def __str__(self) -> str:
        return self.args[0]


class NotDigitalizedError(CombprobError, ValueError):
    pass


class UnreducedEventError(CombprobError, ValueError):
    pass


class HypothesisError(CombprobError, ValueError):
    """A conversion precondition failed.

    ``hypothesis`` names the failed condition, ``reason`` is the error kind
    (defaults to ``hypothesis``), ``axiom`` the target axiom it protects (when
    there is one) and ``witness`` carries the evidence.
    """

    def __init__(self, hypothesis: str, message: str, witness=None, axiom: str | None = None,
                 reason: str | None = None):
        super().__init__(message)
        self.hypothesis = hypothesis
        self.reason = reason or hypothesis
        self.witness = witness
        self.axiom = axiom
